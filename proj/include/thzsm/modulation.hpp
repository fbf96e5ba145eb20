#pragma once

#include "thzsm/channel.hpp"
#include "thzsm/common.hpp"

#include <cstdint>
#include <vector>

namespace thzsm {

/// Square QAM constellation with unit mean power and a per-axis
/// binary-reflected Gray labeling. points[label] is the symbol whose bit
/// pattern equals label read MSB-first; the first half of the bits selects
/// the real-axis level, the second half the imaginary-axis level.
struct Constellation {
    int order = 0;                 ///< |X|, a power of 4
    double gamma = 0;              ///< amplitude normalization 1/sqrt(2(|X|-1)/3)
    std::vector<Complex> points;   ///< indexed by bit label
    std::vector<double> mu;        ///< positive per-axis levels gamma*(2i-1), i = 1..sqrt(|X|)/2

    int bits_per_symbol() const;
    int levels_per_axis() const;
};

Constellation build_constellation(int order);

/// Binary-reflected Gray code and its inverse.
uint32_t gray_encode(uint32_t value);
uint32_t gray_decode(uint32_t code);

/// Bits conveyed per channel use. AE level adds the element-index bits.
int bits_per_use(int sa_count, int ae_count, int order, SmLevel level);

/// Index-modulation bit counts for activating element subsets and frequency
/// bands; only the arithmetic, no transceiver chain.
int gsm_bits(int total_elements, int active_elements, int order);
int gim_bits(int total_bands, int used_bands, int total_elements, int active_elements, int order);

/// One spatial-modulation channel use.
struct SmFrame {
    std::vector<uint8_t> bits;  ///< [b_sa | b_ae | b_sym], b_ae absent at SA level
    int sa_index = 0;           ///< row-major flattened subarray index
    int ae_index = -1;          ///< row-major flattened element index within the subarray, -1 at SA level
    int antenna_index = 0;      ///< flattened transmit index into the channel columns
    int symbol_label = 0;
    Complex symbol;
    CVector tx;                 ///< one-hot transmit vector, E[x^H x] = 1
};

/// Maps a bit vector of length bits_per_use(...) onto antenna indices and a
/// QAM symbol. Row bits precede column bits at each hierarchy level, each
/// group binary-reflected Gray decoded.
SmFrame sm_encode(const std::vector<uint8_t>& bits, const SystemConfig& config,
                  const Constellation& constellation);

/// Inverse of sm_encode: recovers the bit vector from a flattened antenna
/// index and a constellation label.
std::vector<uint8_t> sm_decode_bits(int antenna_index, int symbol_label,
                                    const SystemConfig& config, const Constellation& constellation);

/// Mode-selection lookup table: frequency [Hz] -> multiple k such that the
/// AE level is used when range < k * ae_pitch.
struct ModeThreshold {
    double freq = 0;
    double multiple = 0;
};
using ModeThresholdTable = std::vector<ModeThreshold>;

/// Nearest-frequency (piecewise-constant) lookup; AE level iff
/// range < k(freq) * ae_pitch, strict at the boundary.
SmLevel mode_select(double range, double ae_pitch, double freq, const ModeThresholdTable& table);

} // namespace thzsm
