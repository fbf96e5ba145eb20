#pragma once

#include "thzsm/common.hpp"

#include <vector>

namespace thzsm {

/// Physical layout of one side of a symmetric array-of-subarrays link:
/// sa_count x sa_count subarrays (pitch sa_pitch), each holding
/// ae_count x ae_count antenna elements (pitch ae_pitch). Transmit and
/// receive arrays are identical, planar in z = 0 / z = range, broadside
/// facing with centers aligned.
struct ArrayGeometry {
    int sa_count = 1;      ///< subarrays per axis (M)
    int ae_count = 1;      ///< antenna elements per axis within a subarray (Q)
    double ae_pitch = 0;   ///< element spacing [m]
    double sa_pitch = 0;   ///< subarray spacing, center to center [m]
    double range = 0;      ///< communication range between array centers [m]

    void validate() const;
    int sa_total() const { return sa_count * sa_count; }
    int ae_total() const { return sa_total() * ae_count * ae_count; }
};

/// Cartesian position of an antenna element [m]. Planar arrays have z = 0.
struct ElementPosition {
    double x = 0;
    double y = 0;
    double z = 0;
};

/// Center of subarray (sa_row, sa_col), 1-based indices in [1, sa_count].
/// Subarray centers form a uniform grid with pitch sa_pitch centered on
/// the array origin.
ElementPosition sa_center(const ArrayGeometry& geom, int sa_row, int sa_col);

/// Positions of the ae_count^2 elements of one subarray, row-major with the
/// column index fastest, on a uniform grid with pitch ae_pitch centered on
/// the subarray center.
std::vector<ElementPosition> ae_positions(const ArrayGeometry& geom, int sa_row, int sa_col);

/// Subarray spacing that makes the channel columns orthogonal:
/// sqrt(z * range * c / (sa_count * freq)), z a positive integer.
double optimal_sa_spacing(double range, double freq, int sa_count, int z);

/// optimal_sa_spacing rounded to the nearest multiple of ae_pitch
/// (half away from zero). Throws if the result quantizes to zero.
double quantized_sa_spacing(double range, double freq, int sa_count, int z, double ae_pitch);

/// Plasmonic wavelength lambda / eta for confinement factor eta >= 1.
double spp_wavelength(double lambda_free, double eta);

/// Active-sheet footprint (1.5 * sa_count * ae_count * lambda_spp)^2 [m^2].
double sheet_footprint(int sa_count, int ae_count, double lambda_spp);

enum class DistanceModel {
    Exact,  ///< sqrt(range^2 + sa_pitch^2 * (dm^2 + dn^2))
    Approx  ///< range + sa_pitch^2 * (dm^2 + dn^2) / (2 * range); assumes range >> sa_pitch
};

/// Distance between transmit subarray (m_t, n_t) and receive subarray
/// (m_r, n_r), 1-based indices.
double effective_distance(const ArrayGeometry& geom, int m_t, int n_t, int m_r, int n_r,
                          DistanceModel model = DistanceModel::Exact);

} // namespace thzsm
