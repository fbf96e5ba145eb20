#pragma once

#include "thzsm/common.hpp"
#include "thzsm/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace thzsm {

/// dB-domain link budget terms. The threshold the path loss is compared
/// against is the plain sum p_tx + g_t + g_r + array_gain + alpha - gamma_th
/// - noise, all fields in their natural dB/dBm units.
struct LinkBudget {
    double p_tx_dbm = 0;       ///< transmit power
    double gamma_th_db = 0;    ///< threshold SNR
    double noise_dbm = 0;      ///< 20 log10(sigma)
    double g_t_dbi = 0;        ///< transmit antenna gain
    double g_r_dbi = 0;        ///< receive antenna gain
    double array_gain_db = 0;  ///< beamforming contribution, 20 log10(Q)
};

/// Molecular absorption samples (freq [Hz], K [1/m]), strictly increasing in
/// frequency. Lookups interpolate piecewise-linearly and clamp to the
/// nearest endpoint outside the tabulated range.
struct AbsorptionTable {
    std::vector<std::pair<double, double>> rows;

    void validate() const;
    double kappa_at(double freq) const;

    /// Parses CSV with the exact header "freq_hz,kappa_per_m"; malformed
    /// input is rejected with a line-numbered message.
    static AbsorptionTable from_csv(std::istream& in);
    static AbsorptionTable from_csv_file(const std::string& path);
};

/// Spreading plus absorption loss in dB:
/// 20 log10(4 pi f d / c) + 10 K(f) d log10(e). Pass nullptr for K = 0.
double path_loss_db(double freq, double distance, const AbsorptionTable* table);

/// Link-budget path loss threshold; alpha_db carries any 20 log10(|alpha|)
/// term not already folded into the budget fields.
double pl_threshold_db(const LinkBudget& budget, double alpha_db);

/// One-sided beamforming power gain of a Q x Q subarray, in dB.
double array_gain_db(int ae_count);

struct RequiredQ {
    int ae_count = 1;
    double array_gain_db = 0;
};

/// Smallest power-of-two Q whose array gain covers
/// path_loss_db(freq, distance, table) - pl_threshold_db(budget w/o array gain).
/// Throws "infeasible range" when even max_ae_count is not enough.
RequiredQ required_q(double freq, double distance, const LinkBudget& budget,
                     const AbsorptionTable* table, int max_ae_count = 64);

/// Subarray activation pattern on a configurable sheet: sa_count x sa_count
/// subarrays spaced sa_pitch apart (center to center), centered on the sheet,
/// each owning ae_count x ae_count elements at pitch ae_pitch. Doubles as the
/// support of the identity precoder/combiner.
struct ActiveSaMask {
    int sa_count = 0;
    int ae_count = 0;
    double ae_pitch = 0;
    double sa_pitch = 0;
    std::vector<ElementPosition> sa_centers;                 ///< row-major, sa_count^2 entries
    std::vector<std::vector<ElementPosition>> sa_elements;   ///< per subarray, row-major
};

ActiveSaMask active_sa_mask(double sheet_extent, int sa_count, double sa_pitch, double ae_pitch,
                            int ae_count);

} // namespace thzsm
