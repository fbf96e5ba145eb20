#pragma once

#include "thzsm/channel.hpp"
#include "thzsm/modulation.hpp"

#include <vector>

namespace thzsm {

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/// Per-axis nearest-neighbor symbol error rate of square QAM in AWGN:
/// 4 Q(sqrt(3 gamma / (order - 1))), clamped to [0, 1]. This counts axis
/// threshold crossings as if every level were interior, so it sits slightly
/// above the finite-constellation slicing error rate.
double qam_ser(double gamma, int order);

/// Density of |X| for X ~ N(mu, sigma2), v >= 0.
double folded_normal_pdf(double v, double mu, double sigma2);
double folded_normal_cdf(double v, double mu, double sigma2);

/// Density of the j-th smallest of n iid folded normals (1 <= j <= n).
double order_statistic_pdf(double v, int j, int n, double mu, double sigma2);

/// Antenna-index error analysis output. per_mu[i] is the error probability
/// conditioned on the positive real-axis level mu_i (averaged over the
/// imaginary-axis level); p_tilde_a is the equivalent per-axis rate with
/// p_a = 2 p_tilde_a - p_tilde_a^2 holding exactly.
struct AntennaErrorResult {
    double p_a = 0;
    double p_tilde_a = 0;
    std::vector<double> per_mu;
};

/// Probability that MRRC picks a wrong column on a channel with orthogonal
/// equal-norm columns, n_antennas candidates and per-stream SNR gamma.
/// The signal magnitude is Rician, the competitors are Rayleigh; the maximum
/// of the competitors is handled by order statistics, which yields the
/// binomial mixture
///   P(err | x) = sum_k C(n-1,k) (-1)^{k+1} exp(-k/(k+1) gamma_s |x|^2) / (k+1)
/// with gamma_s the post-combining symbol SNR, averaged over the
/// constellation. Column norms and noise scale are taken from the matrix so
/// the result is exact at the orthogonal spacing and approximate elsewhere.
AntennaErrorResult antenna_error_prob(int n_antennas, const Constellation& constellation,
                                      double gamma, const ChannelMatrix& channel);

/// Per-axis folded-normal order-statistic approximation of the same
/// probability: intersects the top-order signal pdf with each null-order pdf
/// and integrates below the crossing. Kept for reference; it is
/// systematically biased against the argmax process (use antenna_error_prob
/// for quantitative work).
AntennaErrorResult antenna_error_prob_folded(int n_antennas, const Constellation& constellation,
                                             double gamma, const ChannelMatrix& channel);

/// Closed-form error budget at one per-stream SNR point.
struct SerBreakdown {
    double p_s = 0;            ///< symbol error component
    double p_a = 0;            ///< antenna-index error component
    double p_e = 0;            ///< total: p_a + p_s - p_a p_s
    double p_tilde_a = 0;      ///< per-axis antenna error equivalent
    double gamma = 0;          ///< per-stream SNR (linear)
    double gamma_symbol = 0;   ///< post-combining symbol SNR ||h||^2 / sigma^2
    double sigma2 = 0;         ///< derived noise power
    double sigma_dot2 = 0;     ///< per-axis noise variance after combining
    bool ps_clamped = false;   ///< true when the p_s expression exceeded 1
    std::vector<double> per_mu;
};

/// Combines qam_ser (at the post-combining symbol SNR) with
/// antenna_error_prob. sigma^2 is derived from gamma via the per-stream SNR
/// relation gamma = reference_gain / sigma^2.
SerBreakdown total_ser(const SystemConfig& config, const ChannelMatrix& channel, double gamma);

/// Pairwise error probability Q(sqrt(||H (x - xdot)||^2 / (2 sigma2))).
double pep(const ChannelMatrix& channel, const CVector& x, const CVector& x_dot, double sigma2);

/// Union bound: mean over transmit hypotheses of the summed pairwise error
/// probabilities to all other one-hot (column, symbol) hypotheses.
double pep_union_bound(const ChannelMatrix& channel, const Constellation& constellation,
                       double sigma2);

} // namespace thzsm
