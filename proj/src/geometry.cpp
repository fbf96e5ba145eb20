#include "thzsm/geometry.hpp"

#include <cmath>

namespace thzsm {

void ArrayGeometry::validate() const {
    if (sa_count < 1) throw ValidationError("ArrayGeometry: sa_count must be >= 1");
    if (ae_count < 1) throw ValidationError("ArrayGeometry: ae_count must be >= 1");
    if (!(ae_pitch > 0)) throw ValidationError("ArrayGeometry: ae_pitch must be > 0");
    if (!(sa_pitch > 0)) throw ValidationError("ArrayGeometry: sa_pitch must be > 0");
    if (!(range > 0)) throw ValidationError("ArrayGeometry: range must be > 0");
}

namespace {

void check_sa_index(const ArrayGeometry& geom, int sa_row, int sa_col) {
    if (sa_row < 1 || sa_row > geom.sa_count || sa_col < 1 || sa_col > geom.sa_count)
        throw ValidationError("subarray index out of range [1, " +
                              std::to_string(geom.sa_count) + "]");
}

// Offset of grid slot i (0-based) in a count-point grid centered on zero.
double centered_offset(int i, int count, double pitch) {
    return (i - 0.5 * (count - 1)) * pitch;
}

} // namespace

ElementPosition sa_center(const ArrayGeometry& geom, int sa_row, int sa_col) {
    geom.validate();
    check_sa_index(geom, sa_row, sa_col);
    return {centered_offset(sa_row - 1, geom.sa_count, geom.sa_pitch),
            centered_offset(sa_col - 1, geom.sa_count, geom.sa_pitch), 0.0};
}

std::vector<ElementPosition> ae_positions(const ArrayGeometry& geom, int sa_row, int sa_col) {
    const ElementPosition c = sa_center(geom, sa_row, sa_col);
    std::vector<ElementPosition> out;
    out.reserve(static_cast<size_t>(geom.ae_count) * geom.ae_count);
    for (int p = 0; p < geom.ae_count; ++p)
        for (int q = 0; q < geom.ae_count; ++q)
            out.push_back({c.x + centered_offset(p, geom.ae_count, geom.ae_pitch),
                           c.y + centered_offset(q, geom.ae_count, geom.ae_pitch), 0.0});
    return out;
}

double optimal_sa_spacing(double range, double freq, int sa_count, int z) {
    if (!(range > 0) || !(freq > 0)) throw ValidationError("optimal_sa_spacing: range and freq must be > 0");
    if (sa_count < 1) throw ValidationError("optimal_sa_spacing: sa_count must be >= 1");
    if (z < 1) throw ValidationError("optimal_sa_spacing: z must be a positive integer");
    return std::sqrt(static_cast<double>(z) * range * kSpeedOfLight / (sa_count * freq));
}

double quantized_sa_spacing(double range, double freq, int sa_count, int z, double ae_pitch) {
    if (!(ae_pitch > 0)) throw ValidationError("quantized_sa_spacing: ae_pitch must be > 0");
    const double opt = optimal_sa_spacing(range, freq, sa_count, z);
    const double steps = std::round(opt / ae_pitch);  // rounds half away from zero
    if (steps == 0.0)
        throw ValidationError("quantized_sa_spacing: spacing quantizes to zero for ae_pitch " +
                              std::to_string(ae_pitch));
    return steps * ae_pitch;
}

double spp_wavelength(double lambda_free, double eta) {
    if (!(lambda_free > 0)) throw ValidationError("spp_wavelength: lambda must be > 0");
    if (!(eta >= 1.0)) throw ValidationError("spp_wavelength: confinement factor must be >= 1");
    return lambda_free / eta;
}

double sheet_footprint(int sa_count, int ae_count, double lambda_spp) {
    if (sa_count < 1 || ae_count < 1 || !(lambda_spp > 0))
        throw ValidationError("sheet_footprint: inputs must be positive");
    const double side = 1.5 * sa_count * ae_count * lambda_spp;
    return side * side;
}

double effective_distance(const ArrayGeometry& geom, int m_t, int n_t, int m_r, int n_r,
                          DistanceModel model) {
    geom.validate();
    check_sa_index(geom, m_t, n_t);
    check_sa_index(geom, m_r, n_r);
    const double dm = m_r - m_t;
    const double dn = n_r - n_t;
    const double off2 = geom.sa_pitch * geom.sa_pitch * (dm * dm + dn * dn);
    if (model == DistanceModel::Exact)
        return std::sqrt(geom.range * geom.range + off2);
    return geom.range + off2 / (2.0 * geom.range);
}

} // namespace thzsm
