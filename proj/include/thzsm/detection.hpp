#pragma once

#include "thzsm/channel.hpp"
#include "thzsm/modulation.hpp"

namespace thzsm {

/// Outcome of one detection: the flattened antenna index, the sliced symbol
/// and the recovered bit vector.
struct DetectionResult {
    int antenna_index = 0;
    int symbol_label = 0;
    Complex symbol;
    std::vector<uint8_t> bits;
    double peak_magnitude = 0;       ///< |g| at the chosen index
    double runner_up_magnitude = 0;  ///< second-largest |g|
};

/// Nearest constellation point to v; ties resolve to the lowest bit label.
/// Returns the label; the point is constellation.points[label].
int slice(Complex v, const Constellation& constellation);

/// Maximum receive ratio combining: g = H^H y, the antenna index is
/// argmax |g_l| (ties to the lowest index), the symbol is sliced from
/// g at that index normalized by the column energy.
DetectionResult mrrc_detect(const ChannelMatrix& channel, const CVector& y,
                            const Constellation& constellation);

/// Exhaustive joint search over (column, symbol) minimizing ||y - h_l x||^2;
/// ties resolve to the lowest column then lowest label. Intended as a
/// desk-scale reference only; refuses searches above hypothesis_budget.
DetectionResult ml_detect(const ChannelMatrix& channel, const CVector& y,
                          const Constellation& constellation,
                          long hypothesis_budget = 1L << 20);

} // namespace thzsm
