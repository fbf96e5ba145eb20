#pragma once

#include <cmath>
#include <cstdint>
#include <array>

namespace thzsm {

/// Philox4x32-10 counter-based block cipher. Stateless: each (key, counter)
/// pair maps to four independent 32-bit words, so streams can be indexed by
/// (seed, point, trial) and evaluated in any order or thread count with
/// identical results.
struct Philox4x32 {
    using Counter = std::array<uint32_t, 4>;
    using Key = std::array<uint32_t, 2>;

    static Counter round10(Counter ctr, Key key) {
        constexpr uint32_t kMul0 = 0xD2511F53u;
        constexpr uint32_t kMul1 = 0xCD9E8D57u;
        constexpr uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr uint32_t kWeyl1 = 0xBB67AE85u;
        for (int r = 0; r < 10; ++r) {
            const uint64_t p0 = static_cast<uint64_t>(kMul0) * ctr[0];
            const uint64_t p1 = static_cast<uint64_t>(kMul1) * ctr[2];
            const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
            const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

/// One deterministic random stream keyed by (seed, point, trial). Draw order
/// within a stream is fixed by the caller; all draws are reproducible
/// regardless of how trials are scheduled across threads.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint32_t point, uint64_t trial)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
          base_{0, static_cast<uint32_t>(trial), static_cast<uint32_t>(trial >> 32), point} {}

    uint64_t next_u64() {
        if (have_word_) {
            have_word_ = false;
            return spare_word_;
        }
        auto block = Philox4x32::round10({block_index_++, base_[1], base_[2], base_[3]}, key_);
        spare_word_ = (static_cast<uint64_t>(block[2]) << 32) | block[3];
        have_word_ = true;
        return (static_cast<uint64_t>(block[0]) << 32) | block[1];
    }

    /// Uniform on (0, 1]: never returns 0, safe under log().
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    /// Standard normal via Box-Muller (two uniforms per pair).
    double next_gaussian() {
        if (have_gauss_) {
            have_gauss_ = false;
            return spare_gauss_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_gauss_ = r * std::sin(a);
        have_gauss_ = true;
        return r * std::cos(a);
    }

private:
    Philox4x32::Key key_;
    std::array<uint32_t, 4> base_;
    uint32_t block_index_ = 0;
    uint64_t spare_word_ = 0;
    bool have_word_ = false;
    double spare_gauss_ = 0;
    bool have_gauss_ = false;
};

} // namespace thzsm
