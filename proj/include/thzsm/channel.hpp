#pragma once

#include "thzsm/common.hpp"
#include "thzsm/geometry.hpp"

#include <vector>

namespace thzsm {

/// Hierarchy level at which spatial modulation addresses the array.
enum class SmLevel {
    Sa,  ///< subarray level: channel is sa_total x sa_total, beamforming gain Q per side
    Ae   ///< element level: channel is ae_total x ae_total, no beamforming gain
};

/// Full physical parameterization of one link.
struct SystemConfig {
    ArrayGeometry geom;
    double freq = 1e12;        ///< carrier frequency [Hz]
    double gain_tx = 1.0;      ///< transmit antenna power gain (linear)
    double gain_rx = 1.0;      ///< receive antenna power gain (linear)
    double noise_power = 1e-12;///< nominal noise power sigma^2 (linear); sweeps derive per-point values
    double kappa = 0.0;        ///< molecular absorption coefficient K(f) [1/m]
    SmLevel level = SmLevel::Sa;
    int order = 16;            ///< QAM constellation size

    void validate() const;
};

/// Line-of-sight channel between all addressable transmit/receive units.
struct ChannelMatrix {
    CMatrix h;           ///< N_rx x N_tx complex gains
    SmLevel level = SmLevel::Sa;
    SystemConfig config; ///< snapshot used to build the matrix
};

/// Per-element beam steering weights of one subarray; each weight has
/// magnitude 1/ae_count so the vector has unit norm.
struct SteeringVector {
    CVector weights;
    double azimuth = 0;
    double elevation = 0;
};

/// Free-space gain with molecular absorption:
/// (c / (4 pi f d)) * exp(-K d / 2) * exp(-j 2 pi f d / c).
Complex los_path_gain(double freq, double distance, double kappa);

/// Gain under the binomial distance approximation: constant magnitude
/// c/(4 pi f range) * exp(-K range / 2), phase from the approximate distance.
Complex los_path_gain_approx(double freq, double range, double sa_pitch, int m_t, int n_t,
                             int m_r, int n_r, double kappa);

/// Single-bounce reflected gain over path r1 + r2 with reflection
/// coefficient refl (|refl| <= 1).
Complex nlos_path_gain(double freq, double r1, double r2, Complex refl, double kappa);

/// Ideal steering vector for the given element positions: weight (p,q) =
/// (1/Q) exp(j Phi) with Phi = (2 pi / lambda_spp) (x cos(phi) sin(theta) +
/// y sin(phi) sin(theta) + z cos(theta)).
SteeringVector steering_vector(const std::vector<ElementPosition>& positions, double phi,
                               double theta, double lambda_spp);

/// Exact-distance channel. SA level: entry = sqrt(Gt Gr) * Q * alpha(d);
/// AE level: entry = sqrt(Gt Gr) * alpha(d) over per-element distances.
/// Columns are ordered row-major over (row, col) subarray indices, then
/// (p, q) element indices within each subarray.
ChannelMatrix build_channel(const SystemConfig& config);

/// Approximate-gain channel (SA level only); exactly orthogonal columns at
/// the optimal spacing, used for the closed-form orthogonality analysis.
ChannelMatrix build_channel_approx(const SystemConfig& config);

/// Squared magnitude of the aligned-pair entry: Gt * Gr * Q^2 * |alpha(range)|^2
/// at SA level (Q factor absent at AE level). This is the per-stream SNR
/// reference: gamma = reference_gain / sigma^2.
double reference_gain(const SystemConfig& config);

/// <h_{kl}, h_{k'l'}> computed from the matrix columns (conjugate-linear in
/// the first argument). Subarray coordinates are 0-based.
Complex column_inner_product(const ChannelMatrix& channel, int k, int l, int kprime, int lprime);

/// Closed-form magnitude of the same inner product for the approximate-gain
/// channel: Gt Gr Q^2 (c / 4 pi f D)^2 e^{-K D} |D_M(u dk)| |D_M(u dl)| with
/// u = sa_pitch^2 f / (c D) and D_M the Dirichlet ratio sin(pi M x)/sin(pi x).
double column_inner_product_closed_form(const SystemConfig& config, int k, int l, int kprime,
                                        int lprime);

/// 20 log10(sigma_max / sigma_min) over the full singular spectrum;
/// +infinity when the matrix is singular to machine precision.
double condition_number_db(const CMatrix& h);

/// condition_number_db of build_channel over a (sa_pitch, range) grid.
/// Result row i, column j corresponds to (sa_pitch_grid[i], range_grid[j]).
RMatrix condition_sweep(const SystemConfig& config, const std::vector<double>& sa_pitch_grid,
                        const std::vector<double>& range_grid);

} // namespace thzsm
