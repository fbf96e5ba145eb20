#include "thzsm/analysis.hpp"

#include "thzsm/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace thzsm {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double qam_ser(double gamma, int order) {
    if (!(gamma >= 0)) throw ValidationError("qam_ser: gamma must be >= 0");
    if (order < 4) throw ValidationError("qam_ser: order must be a square QAM size");
    const double p = 4.0 * q_function(std::sqrt(3.0 * gamma / (order - 1)));
    return std::clamp(p, 0.0, 1.0);
}

double folded_normal_pdf(double v, double mu, double sigma2) {
    if (!(v >= 0)) throw ValidationError("folded_normal_pdf: v must be >= 0");
    if (!(sigma2 > 0)) throw ValidationError("folded_normal_pdf: sigma2 must be > 0");
    const double inv = 1.0 / std::sqrt(2.0 * M_PI * sigma2);
    const double a = v - mu;
    const double b = v + mu;
    return inv * (std::exp(-a * a / (2.0 * sigma2)) + std::exp(-b * b / (2.0 * sigma2)));
}

double folded_normal_cdf(double v, double mu, double sigma2) {
    if (!(v >= 0)) throw ValidationError("folded_normal_cdf: v must be >= 0");
    if (!(sigma2 > 0)) throw ValidationError("folded_normal_cdf: sigma2 must be > 0");
    const double s = std::sqrt(2.0 * sigma2);
    return 0.5 * (std::erf((v + mu) / s) + std::erf((v - mu) / s));
}

double order_statistic_pdf(double v, int j, int n, double mu, double sigma2) {
    if (j < 1 || j > n) throw ValidationError("order_statistic_pdf: rank out of range");
    const double f = folded_normal_pdf(v, mu, sigma2);
    const double F = folded_normal_cdf(v, mu, sigma2);
    double logc = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(j)) -
                  std::lgamma(static_cast<double>(n - j + 1));
    double value = std::exp(logc) * f;
    if (j > 1) value *= std::pow(F, j - 1);
    if (j < n) value *= std::pow(1.0 - F, n - j);
    return value;
}

namespace {

// Exponentially scaled modified Bessel I0(x) e^{-x}; Abramowitz & Stegun
// 9.8.1 / 9.8.2 polynomial fits, |error| < 2e-7.
double bessel_i0_scaled(double x) {
    x = std::abs(x);
    if (x < 3.75) {
        const double t = x / 3.75;
        const double t2 = t * t;
        const double i0 = 1.0 + t2 * (3.5156229 + t2 * (3.0899424 + t2 * (1.2067492 +
                          t2 * (0.2659732 + t2 * (0.0360768 + t2 * 0.0045813)))));
        return i0 * std::exp(-x);
    }
    const double t = 3.75 / x;
    const double poly = 0.39894228 + t * (0.01328592 + t * (0.00225319 + t * (-0.00157565 +
                        t * (0.00916281 + t * (-0.02057706 + t * (0.02635537 +
                        t * (-0.01647633 + t * 0.00392377)))))));
    return poly / std::sqrt(x);
}

// P(max of (n-1) iid Rayleigh exceeds a Rician signal), in normalized units
// kappa = nu / sigma_axis. Closed binomial mixture for small n; a stable
// quadrature over the normalized Rice density otherwise (the alternating
// binomial sum cancels catastrophically for large n).
double rice_vs_max_rayleigh(double kappa, int n) {
    const double half_k2 = 0.5 * kappa * kappa;
    if (n <= 32) {
        double sum = 0.0;
        double binom = 1.0;  // C(n-1, k)
        for (int k = 1; k <= n - 1; ++k) {
            binom *= static_cast<double>(n - k) / k;
            const double term = binom / (k + 1) *
                                std::exp(-half_k2 * (static_cast<double>(k) / (k + 1)));
            sum += (k % 2 == 1) ? term : -term;
        }
        return std::clamp(sum, 0.0, 1.0);
    }
    // P = int rice(u; kappa) (1 - (1 - e^{-u^2/2})^{n-1}) du
    const double upper = kappa + 10.0;
    auto integrand = [kappa, n](double u) {
        if (u <= 0.0) return 0.0;
        const double du = u - kappa;
        const double rice = u * std::exp(-0.5 * du * du) * bessel_i0_scaled(kappa * u);
        const double tail = 1.0 - std::pow(1.0 - std::exp(-0.5 * u * u), n - 1);
        return rice * tail;
    };
    return std::clamp(integrate_adaptive_simpson(integrand, 0.0, upper), 0.0, 1.0);
}

// Column-norm average and derived noise terms shared by both analyses.
struct MrrcScales {
    double hnorm2 = 0;      // mean Gram diagonal
    double sigma2 = 0;      // noise power at this gamma
    double sigma_dot2 = 0;  // per-axis variance of h^H n
};

MrrcScales mrrc_scales(const ChannelMatrix& channel, double gamma) {
    if (!(gamma > 0)) throw ValidationError("antenna error analysis: gamma must be > 0");
    MrrcScales s;
    s.hnorm2 = channel.h.colwise().squaredNorm().mean();
    if (!(s.hnorm2 > 0)) throw ValidationError("antenna error analysis: zero channel");
    s.sigma2 = reference_gain(channel.config) / gamma;
    s.sigma_dot2 = s.hnorm2 * s.sigma2 / 2.0;
    return s;
}

} // namespace

AntennaErrorResult antenna_error_prob(int n_antennas, const Constellation& constellation,
                                      double gamma, const ChannelMatrix& channel) {
    if (n_antennas < 2) throw ValidationError("antenna_error_prob: need at least two antennas");
    const MrrcScales s = mrrc_scales(channel, gamma);
    const double gamma_symbol = s.hnorm2 / s.sigma2;

    AntennaErrorResult r;
    const size_t half_levels = constellation.mu.size();
    r.per_mu.resize(half_levels, 0.0);
    double p_a = 0.0;
    for (size_t i = 0; i < half_levels; ++i) {
        double per_level = 0.0;
        for (size_t j = 0; j < half_levels; ++j) {
            const double mag2 = constellation.mu[i] * constellation.mu[i] +
                                constellation.mu[j] * constellation.mu[j];
            // kappa^2 = nu^2 / sigma_axis^2 = 2 gamma_s |x|^2
            const double kappa = std::sqrt(2.0 * gamma_symbol * mag2);
            per_level += rice_vs_max_rayleigh(kappa, n_antennas);
        }
        r.per_mu[i] = per_level / static_cast<double>(half_levels);
        p_a += r.per_mu[i];
    }
    r.p_a = std::clamp(p_a / static_cast<double>(half_levels), 0.0, 1.0);
    r.p_tilde_a = 1.0 - std::sqrt(1.0 - r.p_a);
    return r;
}

namespace {

// Largest intersection of the top-order signal pdf with the j-th null-order
// pdf on (0, upper], located by a 512-point scan of the log-density gap and
// refined by bisection. Returns a negative value when no crossing exists;
// dominated is set when the signal density sits below the null density
// over the whole scan.
double largest_intersection(int j, int n, double mu_bar, double sigma_dot2, double upper,
                            bool& dominated) {
    constexpr int kScanPoints = 512;
    auto log_gap = [&](double v) {
        const double fs = order_statistic_pdf(v, n, n, mu_bar, sigma_dot2);
        const double fn = order_statistic_pdf(v, j, n, 0.0, sigma_dot2);
        if (fs == 0.0 && fn == 0.0) return 0.0;
        if (fs == 0.0) return -std::numeric_limits<double>::infinity();
        if (fn == 0.0) return std::numeric_limits<double>::infinity();
        return std::log(fs) - std::log(fn);
    };

    double lo = 0.0, hi = -1.0;
    double prev_v = 0.0;
    double prev_gap = 0.0;
    bool have_prev = false;
    bool any_positive = false;
    for (int i = 1; i <= kScanPoints; ++i) {
        const double v = upper * i / kScanPoints;
        const double gap = log_gap(v);
        if (gap > 0.0) any_positive = true;
        if (have_prev && std::isfinite(prev_gap) && std::isfinite(gap) &&
            ((prev_gap < 0.0) != (gap < 0.0))) {
            lo = prev_v;
            hi = v;  // keep scanning: the largest crossing wins
        }
        prev_v = v;
        prev_gap = gap;
        have_prev = true;
    }
    dominated = !any_positive;
    if (hi < 0.0) return -1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((log_gap(lo) < 0.0) == (log_gap(mid) < 0.0))
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * upper) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

AntennaErrorResult antenna_error_prob_folded(int n_antennas, const Constellation& constellation,
                                             double gamma, const ChannelMatrix& channel) {
    if (n_antennas < 2)
        throw ValidationError("antenna_error_prob_folded: need at least two antennas");
    const MrrcScales s = mrrc_scales(channel, gamma);
    const int n = n_antennas;

    AntennaErrorResult r;
    r.per_mu.resize(constellation.mu.size(), 0.0);
    double p_tilde = 0.0;
    for (size_t i = 0; i < constellation.mu.size(); ++i) {
        const double mu_bar = s.hnorm2 * constellation.mu[i];
        const double upper = mu_bar + 10.0 * std::sqrt(s.sigma_dot2);
        double total = 0.0;
        for (int j = 1; j <= n - 1; ++j) {
            bool dominated = false;
            const double vt = largest_intersection(j, n, mu_bar, s.sigma_dot2, upper, dominated);
            double contribution = 0.0;
            if (vt >= 0.0) {
                contribution = integrate_adaptive_simpson(
                    [&](double v) { return order_statistic_pdf(v, n, n, mu_bar, s.sigma_dot2); },
                    0.0, vt);
            } else if (dominated) {
                contribution = integrate_adaptive_simpson(
                    [&](double v) { return order_statistic_pdf(v, n, n, mu_bar, s.sigma_dot2); },
                    0.0, upper);
            }
            total += contribution;
        }
        r.per_mu[i] = total / (n - 1);
        p_tilde += r.per_mu[i];
    }
    r.p_tilde_a = std::clamp(2.0 / std::sqrt(static_cast<double>(constellation.order)) * p_tilde,
                             0.0, 1.0);
    r.p_a = std::clamp(2.0 * r.p_tilde_a - r.p_tilde_a * r.p_tilde_a, 0.0, 1.0);
    return r;
}

SerBreakdown total_ser(const SystemConfig& config, const ChannelMatrix& channel, double gamma) {
    const Constellation constellation = build_constellation(config.order);
    const MrrcScales s = mrrc_scales(channel, gamma);

    SerBreakdown out;
    out.gamma = gamma;
    out.sigma2 = s.sigma2;
    out.sigma_dot2 = s.sigma_dot2;
    out.gamma_symbol = s.hnorm2 / s.sigma2;

    const double raw_ps = 4.0 * q_function(std::sqrt(3.0 * out.gamma_symbol / (config.order - 1)));
    out.ps_clamped = raw_ps > 1.0;
    out.p_s = std::clamp(raw_ps, 0.0, 1.0);

    const AntennaErrorResult a = antenna_error_prob(static_cast<int>(channel.h.cols()),
                                                    constellation, gamma, channel);
    out.p_a = a.p_a;
    out.p_tilde_a = a.p_tilde_a;
    out.per_mu = a.per_mu;
    out.p_e = out.p_a + out.p_s - out.p_a * out.p_s;
    return out;
}

double pep(const ChannelMatrix& channel, const CVector& x, const CVector& x_dot, double sigma2) {
    if (x.size() != channel.h.cols() || x_dot.size() != channel.h.cols())
        throw ValidationError("pep: vector length does not match the channel");
    if (!(sigma2 > 0)) throw ValidationError("pep: sigma2 must be > 0");
    const double d2 = (channel.h * (x - x_dot)).squaredNorm();
    return q_function(std::sqrt(d2 / (2.0 * sigma2)));
}

double pep_union_bound(const ChannelMatrix& channel, const Constellation& constellation,
                       double sigma2) {
    const Eigen::Index n = channel.h.cols();
    const int order = constellation.order;
    double sum = 0.0;
    CVector x = CVector::Zero(n), x_dot = CVector::Zero(n);
    for (Eigen::Index l = 0; l < n; ++l) {
        for (int a = 0; a < order; ++a) {
            x.setZero();
            x(l) = constellation.points[static_cast<size_t>(a)];
            for (Eigen::Index ld = 0; ld < n; ++ld) {
                for (int b = 0; b < order; ++b) {
                    if (ld == l && b == a) continue;
                    x_dot.setZero();
                    x_dot(ld) = constellation.points[static_cast<size_t>(b)];
                    sum += pep(channel, x, x_dot, sigma2);
                }
            }
        }
    }
    return sum / (static_cast<double>(n) * order);
}

} // namespace thzsm
