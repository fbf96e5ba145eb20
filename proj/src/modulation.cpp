#include "thzsm/modulation.hpp"

#include <algorithm>
#include <cmath>

namespace thzsm {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2i(int v) {
    int bits = 0;
    while ((1 << bits) < v) ++bits;
    return bits;
}

// Integer value of bits[first, first+count), MSB first.
uint32_t bits_to_label(const std::vector<uint8_t>& bits, int first, int count) {
    uint32_t label = 0;
    for (int i = 0; i < count; ++i) label = (label << 1) | (bits[first + i] & 1u);
    return label;
}

void label_to_bits(uint32_t label, int count, std::vector<uint8_t>& out) {
    for (int i = count - 1; i >= 0; --i) out.push_back(static_cast<uint8_t>((label >> i) & 1u));
}

// Row-major grid index from a Gray-coded bit label: first half row, second
// half column, each binary-reflected Gray decoded.
int gray_grid_index(uint32_t label, int axis_bits, int axis_count) {
    const uint32_t row_code = label >> axis_bits;
    const uint32_t col_code = label & ((1u << axis_bits) - 1u);
    return static_cast<int>(gray_decode(row_code)) * axis_count +
           static_cast<int>(gray_decode(col_code));
}

uint32_t grid_index_to_gray(int index, int axis_bits, int axis_count) {
    const uint32_t row = static_cast<uint32_t>(index / axis_count);
    const uint32_t col = static_cast<uint32_t>(index % axis_count);
    return (gray_encode(row) << axis_bits) | gray_encode(col);
}

} // namespace

uint32_t gray_encode(uint32_t value) { return value ^ (value >> 1); }

uint32_t gray_decode(uint32_t code) {
    uint32_t value = 0;
    for (; code; code >>= 1) value ^= code;
    return value;
}

int Constellation::bits_per_symbol() const { return log2i(order); }
int Constellation::levels_per_axis() const { return 1 << (bits_per_symbol() / 2); }

Constellation build_constellation(int order) {
    switch (order) {
        case 4: case 16: case 64: case 256: case 1024: break;
        default:
            throw ValidationError("build_constellation: order must be one of 4, 16, 64, 256, 1024");
    }
    Constellation c;
    c.order = order;
    c.gamma = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
    const int axis_bits = log2i(order) / 2;
    const int levels = 1 << axis_bits;
    c.points.resize(static_cast<size_t>(order));
    for (uint32_t label = 0; label < static_cast<uint32_t>(order); ++label) {
        const uint32_t i_code = label >> axis_bits;
        const uint32_t q_code = label & ((1u << axis_bits) - 1u);
        const int i_level = static_cast<int>(gray_decode(i_code));
        const int q_level = static_cast<int>(gray_decode(q_code));
        c.points[label] = Complex(c.gamma * (2 * i_level - (levels - 1)),
                                  c.gamma * (2 * q_level - (levels - 1)));
    }
    c.mu.resize(static_cast<size_t>(levels / 2));
    for (int i = 1; i <= levels / 2; ++i) c.mu[static_cast<size_t>(i - 1)] = c.gamma * (2 * i - 1);
    return c;
}

int bits_per_use(int sa_count, int ae_count, int order, SmLevel level) {
    if (!is_power_of_two(sa_count) || !is_power_of_two(ae_count) || !is_power_of_two(order))
        throw ValidationError("bits_per_use: counts and order must be powers of two");
    int bits = log2i(sa_count * sa_count) + log2i(order);
    if (level == SmLevel::Ae) bits += log2i(ae_count * ae_count);
    return bits;
}

namespace {

// floor(log2(C(n, k))) without overflowing: accumulate log2 of the factors.
int floor_log2_binomial(int n, int k) {
    k = std::min(k, n - k);
    double log2c = 0.0;
    for (int i = 1; i <= k; ++i)
        log2c += std::log2(static_cast<double>(n - k + i)) - std::log2(static_cast<double>(i));
    // Guard against the accumulated value sitting a hair above an integer.
    const double snapped = std::round(log2c);
    if (std::abs(log2c - snapped) < 1e-9) return static_cast<int>(snapped);
    return static_cast<int>(std::floor(log2c));
}

} // namespace

int gsm_bits(int total_elements, int active_elements, int order) {
    if (total_elements < 1 || active_elements < 1 || active_elements > total_elements)
        throw ValidationError("gsm_bits: need 1 <= active_elements <= total_elements");
    if (!is_power_of_two(order)) throw ValidationError("gsm_bits: order must be a power of two");
    return floor_log2_binomial(total_elements, active_elements) + log2i(order);
}

int gim_bits(int total_bands, int used_bands, int total_elements, int active_elements, int order) {
    if (total_bands < 1 || used_bands < 1 || used_bands > total_bands)
        throw ValidationError("gim_bits: need 1 <= used_bands <= total_bands");
    return floor_log2_binomial(total_bands, used_bands) +
           gsm_bits(total_elements, active_elements, order);
}

SmFrame sm_encode(const std::vector<uint8_t>& bits, const SystemConfig& config,
                  const Constellation& constellation) {
    const int m = config.geom.sa_count;
    const int q = config.geom.ae_count;
    const int n_bits = bits_per_use(m, q, constellation.order, config.level);
    if (static_cast<int>(bits.size()) != n_bits)
        throw ValidationError("sm_encode: expected " + std::to_string(n_bits) + " bits, got " +
                              std::to_string(bits.size()));

    const int sa_bits = log2i(m * m);
    const int ae_bits = config.level == SmLevel::Ae ? log2i(q * q) : 0;
    const int sym_bits = constellation.bits_per_symbol();

    SmFrame frame;
    frame.bits = bits;
    frame.sa_index = gray_grid_index(bits_to_label(bits, 0, sa_bits), sa_bits / 2, m);
    frame.ae_index = -1;
    int columns = m * m;
    frame.antenna_index = frame.sa_index;
    if (config.level == SmLevel::Ae) {
        frame.ae_index = gray_grid_index(bits_to_label(bits, sa_bits, ae_bits), ae_bits / 2, q);
        frame.antenna_index = frame.sa_index * q * q + frame.ae_index;
        columns = m * m * q * q;
    }
    frame.symbol_label = static_cast<int>(bits_to_label(bits, sa_bits + ae_bits, sym_bits));
    frame.symbol = constellation.points[static_cast<size_t>(frame.symbol_label)];
    frame.tx = CVector::Zero(columns);
    frame.tx(frame.antenna_index) = frame.symbol;
    return frame;
}

std::vector<uint8_t> sm_decode_bits(int antenna_index, int symbol_label,
                                    const SystemConfig& config,
                                    const Constellation& constellation) {
    const int m = config.geom.sa_count;
    const int q = config.geom.ae_count;
    const int columns = config.level == SmLevel::Ae ? m * m * q * q : m * m;
    if (antenna_index < 0 || antenna_index >= columns)
        throw ValidationError("sm_decode_bits: antenna index out of range");
    if (symbol_label < 0 || symbol_label >= constellation.order)
        throw ValidationError("sm_decode_bits: symbol label out of range");

    const int sa_bits = log2i(m * m);
    std::vector<uint8_t> bits;
    bits.reserve(static_cast<size_t>(bits_per_use(m, q, constellation.order, config.level)));
    if (config.level == SmLevel::Ae) {
        const int ae_bits = log2i(q * q);
        label_to_bits(grid_index_to_gray(antenna_index / (q * q), sa_bits / 2, m), sa_bits, bits);
        label_to_bits(grid_index_to_gray(antenna_index % (q * q), ae_bits / 2, q), ae_bits, bits);
    } else {
        label_to_bits(grid_index_to_gray(antenna_index, sa_bits / 2, m), sa_bits, bits);
    }
    label_to_bits(static_cast<uint32_t>(symbol_label), constellation.bits_per_symbol(), bits);
    return bits;
}

SmLevel mode_select(double range, double ae_pitch, double freq, const ModeThresholdTable& table) {
    if (table.empty()) throw ValidationError("mode_select: empty threshold table");
    if (!(range > 0) || !(ae_pitch > 0) || !(freq > 0))
        throw ValidationError("mode_select: inputs must be > 0");
    // Piecewise-constant in frequency: nearest entry, ties toward the lower one.
    const ModeThreshold* best = &table.front();
    for (const auto& row : table)
        if (std::abs(row.freq - freq) < std::abs(best->freq - freq)) best = &row;
    return range < best->multiple * ae_pitch ? SmLevel::Ae : SmLevel::Sa;
}

} // namespace thzsm
