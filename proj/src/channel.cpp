#include "thzsm/channel.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace thzsm {

void SystemConfig::validate() const {
    geom.validate();
    if (!(freq > 0)) throw ValidationError("SystemConfig: freq must be > 0");
    if (!(gain_tx >= 1.0) || !(gain_rx >= 1.0))
        throw ValidationError("SystemConfig: antenna gains are linear power gains >= 1");
    if (!(noise_power > 0)) throw ValidationError("SystemConfig: noise_power must be > 0");
    if (!(kappa >= 0)) throw ValidationError("SystemConfig: kappa must be >= 0");
    if (order < 2) throw ValidationError("SystemConfig: order must be a supported QAM size");
}

Complex los_path_gain(double freq, double distance, double kappa) {
    if (!(freq > 0) || !(distance > 0))
        throw ValidationError("los_path_gain: freq and distance must be > 0");
    if (!(kappa >= 0)) throw ValidationError("los_path_gain: kappa must be >= 0");
    const double amp = kSpeedOfLight / (4.0 * M_PI * freq * distance) *
                       std::exp(-0.5 * kappa * distance);
    const double phase = -2.0 * M_PI * freq * distance / kSpeedOfLight;
    return std::polar(amp, phase);
}

Complex los_path_gain_approx(double freq, double range, double sa_pitch, int m_t, int n_t,
                             int m_r, int n_r, double kappa) {
    if (!(freq > 0) || !(range > 0))
        throw ValidationError("los_path_gain_approx: freq and range must be > 0");
    if (!(sa_pitch > 0)) throw ValidationError("los_path_gain_approx: sa_pitch must be > 0");
    if (!(kappa >= 0)) throw ValidationError("los_path_gain_approx: kappa must be >= 0");
    const double dm = m_r - m_t;
    const double dn = n_r - n_t;
    const double d = range + sa_pitch * sa_pitch * (dm * dm + dn * dn) / (2.0 * range);
    const double amp = kSpeedOfLight / (4.0 * M_PI * freq * range) * std::exp(-0.5 * kappa * range);
    return std::polar(amp, -2.0 * M_PI * freq * d / kSpeedOfLight);
}

Complex nlos_path_gain(double freq, double r1, double r2, Complex refl, double kappa) {
    if (!(r1 > 0) || !(r2 > 0)) throw ValidationError("nlos_path_gain: distances must be > 0");
    if (std::abs(refl) > 1.0 + 1e-12)
        throw ValidationError("nlos_path_gain: |reflection coefficient| must be <= 1");
    return los_path_gain(freq, r1 + r2, kappa) * refl;
}

SteeringVector steering_vector(const std::vector<ElementPosition>& positions, double phi,
                               double theta, double lambda_spp) {
    if (positions.empty()) throw ValidationError("steering_vector: empty position list");
    if (!(lambda_spp > 0)) throw ValidationError("steering_vector: lambda_spp must be > 0");
    const int q = static_cast<int>(std::lround(std::sqrt(static_cast<double>(positions.size()))));
    if (static_cast<size_t>(q) * q != positions.size())
        throw ValidationError("steering_vector: position count must be a perfect square");
    const double k = 2.0 * M_PI / lambda_spp;
    const double ux = std::cos(phi) * std::sin(theta);
    const double uy = std::sin(phi) * std::sin(theta);
    const double uz = std::cos(theta);
    SteeringVector sv;
    sv.azimuth = phi;
    sv.elevation = theta;
    sv.weights.resize(static_cast<Eigen::Index>(positions.size()));
    for (size_t i = 0; i < positions.size(); ++i) {
        const double shift = k * (positions[i].x * ux + positions[i].y * uy + positions[i].z * uz);
        sv.weights[static_cast<Eigen::Index>(i)] = std::polar(1.0 / q, shift);
    }
    return sv;
}

namespace {

// Distance between a transmit element at z = 0 and the mirrored receive
// element at z = range.
double element_distance(const ElementPosition& tx, const ElementPosition& rx, double range) {
    const double dx = rx.x - tx.x;
    const double dy = rx.y - tx.y;
    return std::sqrt(range * range + dx * dx + dy * dy);
}

} // namespace

ChannelMatrix build_channel(const SystemConfig& config) {
    config.validate();
    const ArrayGeometry& g = config.geom;
    const double amp_gain = std::sqrt(config.gain_tx * config.gain_rx);
    ChannelMatrix out;
    out.level = config.level;
    out.config = config;

    if (config.level == SmLevel::Sa) {
        const int n = g.sa_total();
        out.h.resize(n, n);
        for (int mr = 0; mr < g.sa_count; ++mr)
            for (int nr = 0; nr < g.sa_count; ++nr)
                for (int mt = 0; mt < g.sa_count; ++mt)
                    for (int nt = 0; nt < g.sa_count; ++nt) {
                        const double d = effective_distance(g, mt + 1, nt + 1, mr + 1, nr + 1,
                                                            DistanceModel::Exact);
                        out.h(mr * g.sa_count + nr, mt * g.sa_count + nt) =
                            amp_gain * static_cast<double>(g.ae_count) *
                            los_path_gain(config.freq, d, config.kappa);
                    }
        return out;
    }

    // AE level: per-element distances; overlapping subarrays would place
    // elements of different subarrays on top of each other.
    if (g.sa_count > 1 && g.sa_pitch < g.ae_count * g.ae_pitch)
        throw ValidationError("build_channel: sa_pitch must be >= ae_count * ae_pitch at AE level");
    std::vector<ElementPosition> elems;
    elems.reserve(static_cast<size_t>(g.ae_total()));
    for (int m = 1; m <= g.sa_count; ++m)
        for (int n = 1; n <= g.sa_count; ++n) {
            auto block = ae_positions(g, m, n);
            elems.insert(elems.end(), block.begin(), block.end());
        }
    const int n = static_cast<int>(elems.size());
    out.h.resize(n, n);
    for (int r = 0; r < n; ++r)
        for (int t = 0; t < n; ++t)
            out.h(r, t) = amp_gain * los_path_gain(config.freq,
                                                   element_distance(elems[t], elems[r], g.range),
                                                   config.kappa);
    return out;
}

ChannelMatrix build_channel_approx(const SystemConfig& config) {
    config.validate();
    if (config.level != SmLevel::Sa)
        throw ValidationError("build_channel_approx: only defined at SA level");
    const ArrayGeometry& g = config.geom;
    const double amp_gain = std::sqrt(config.gain_tx * config.gain_rx);
    ChannelMatrix out;
    out.level = SmLevel::Sa;
    out.config = config;
    const int n = g.sa_total();
    out.h.resize(n, n);
    for (int mr = 0; mr < g.sa_count; ++mr)
        for (int nr = 0; nr < g.sa_count; ++nr)
            for (int mt = 0; mt < g.sa_count; ++mt)
                for (int nt = 0; nt < g.sa_count; ++nt)
                    out.h(mr * g.sa_count + nr, mt * g.sa_count + nt) =
                        amp_gain * static_cast<double>(g.ae_count) *
                        los_path_gain_approx(config.freq, g.range, g.sa_pitch, mt, nt, mr, nr,
                                             config.kappa);
    return out;
}

double reference_gain(const SystemConfig& config) {
    config.validate();
    const double q_amp = config.level == SmLevel::Sa ? config.geom.ae_count : 1;
    const double a = std::abs(los_path_gain(config.freq, config.geom.range, config.kappa));
    return config.gain_tx * config.gain_rx * q_amp * q_amp * a * a;
}

Complex column_inner_product(const ChannelMatrix& channel, int k, int l, int kprime, int lprime) {
    if (channel.level != SmLevel::Sa)
        throw ValidationError("column_inner_product: expects an SA-level matrix");
    const int m = channel.config.geom.sa_count;
    for (int idx : {k, l, kprime, lprime})
        if (idx < 0 || idx >= m) throw ValidationError("column_inner_product: index out of range");
    return channel.h.col(k * m + l).dot(channel.h.col(kprime * m + lprime));
}

namespace {

// sin(pi M x) / sin(pi x), continued to +-M at integer x.
double dirichlet_ratio(int m, double x) {
    const double num = std::sin(M_PI * m * x);
    const double den = std::sin(M_PI * x);
    if (std::abs(den) < 1e-12) {
        const double r = std::round(x);
        return m * std::cos(M_PI * m * r) * std::cos(M_PI * r);  // L'Hopital at integers
    }
    return num / den;
}

} // namespace

double column_inner_product_closed_form(const SystemConfig& config, int k, int l, int kprime,
                                        int lprime) {
    config.validate();
    const ArrayGeometry& g = config.geom;
    for (int idx : {k, l, kprime, lprime})
        if (idx < 0 || idx >= g.sa_count)
            throw ValidationError("column_inner_product_closed_form: index out of range");
    const double a0 = kSpeedOfLight / (4.0 * M_PI * config.freq * g.range);
    const double prefactor = config.gain_tx * config.gain_rx * g.ae_count * g.ae_count * a0 * a0 *
                             std::exp(-config.kappa * g.range);
    const double u = g.sa_pitch * g.sa_pitch * config.freq / (kSpeedOfLight * g.range);
    return prefactor * std::abs(dirichlet_ratio(g.sa_count, u * (kprime - k))) *
           std::abs(dirichlet_ratio(g.sa_count, u * (lprime - l)));
}

double condition_number_db(const CMatrix& h) {
    if (h.size() == 0 || h.norm() == 0.0)
        throw ValidationError("condition_number_db: matrix must be nonzero");
    Eigen::JacobiSVD<CMatrix> svd(h);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    const double floor = smax * std::max(h.rows(), h.cols()) *
                         std::numeric_limits<double>::epsilon();
    if (smin <= floor) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(smax / smin);
}

RMatrix condition_sweep(const SystemConfig& config, const std::vector<double>& sa_pitch_grid,
                        const std::vector<double>& range_grid) {
    if (sa_pitch_grid.empty() || range_grid.empty())
        throw ValidationError("condition_sweep: grids must be nonempty");
    RMatrix out(sa_pitch_grid.size(), range_grid.size());
    for (size_t i = 0; i < sa_pitch_grid.size(); ++i)
        for (size_t j = 0; j < range_grid.size(); ++j) {
            SystemConfig c = config;
            c.geom.sa_pitch = sa_pitch_grid[i];
            c.geom.range = range_grid[j];
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                condition_number_db(build_channel(c).h);
        }
    return out;
}

} // namespace thzsm
