#pragma once

#include "thzsm/channel.hpp"
#include "thzsm/detection.hpp"
#include "thzsm/modulation.hpp"

#include <cstdint>
#include <vector>

namespace thzsm {

enum class Detector { Mrrc, Ml };
enum class Scheme { Sm, Smx };

/// How the subarray pitch is chosen before building the sweep channel.
struct SpacingPolicy {
    enum class Kind {
        Region1,           ///< keep the configured sa_pitch (short-range regime)
        Region2Optimized,  ///< sa_pitch = optimal_sa_spacing(range, freq, sa_count, z)
        Region2Raw         ///< sa_pitch = raw_spacing, unoptimized
    };
    Kind kind = Kind::Region1;
    int z = 1;
    double raw_spacing = 0;

    static SpacingPolicy region1() { return {}; }
    static SpacingPolicy region2_optimized(int z) { return {Kind::Region2Optimized, z, 0.0}; }
    static SpacingPolicy region2_raw(double spacing) { return {Kind::Region2Raw, 1, spacing}; }
};

/// Full definition of one Monte Carlo sweep. Identical specs (including the
/// seed) produce bitwise-identical results regardless of thread count.
struct SweepSpec {
    SystemConfig config;
    std::vector<double> snr_grid_db;  ///< per-stream SNR points gamma [dB]
    uint64_t trials_per_point = 10000;
    uint64_t seed = 1;
    Detector detector = Detector::Mrrc;
    Scheme scheme = Scheme::Sm;
    SpacingPolicy policy;

    void validate() const;
};

/// Error counts and estimates at one SNR point. Alongside the detector
/// counts, two analysis-facing tallies are kept: axis_crossings counts
/// per-axis nearest-neighbor threshold crossings of the noise at the true
/// column (the event family the closed-form symbol error rate integrates),
/// and union_pair_errors counts trials where the antenna index was wrong or
/// at least one such crossing occurred.
struct SweepPoint {
    double snr_db = 0;
    uint64_t trials = 0;
    uint64_t bit_errors = 0;
    uint64_t symbol_errors = 0;     ///< detected (index, symbol) pair differs
    uint64_t antenna_errors = 0;
    uint64_t axis_crossings = 0;
    uint64_t union_pair_errors = 0;
    uint64_t slicing_errors = 0;    ///< wrong sliced symbol among antenna-correct trials
    uint64_t antenna_correct = 0;
    double ber = 0;
    double ser = 0;
    double aer = 0;
    double ci95 = 0;  ///< normal-approximation binomial half-width on ser
};

struct SweepResult {
    std::vector<SweepPoint> points;
    Scheme scheme = Scheme::Sm;
    Detector detector = Detector::Mrrc;
    SmLevel level = SmLevel::Sa;
    double resolved_sa_pitch = 0;
    int bits_per_trial = 0;
    uint64_t failed_trials = 0;  ///< SMX trials counted all-bits-wrong on a singular channel
};

/// Subarray pitch after applying the spacing policy.
double resolve_spacing(const SweepSpec& spec);

/// Seeded SM bit/symbol/antenna error sweep over the SNR grid. Each trial
/// draws uniform bits, encodes, propagates y = H x + n with complex Gaussian
/// noise of per-axis variance sigma^2/2, detects and accumulates counts.
/// Trials are keyed by (seed, point, trial) counter streams, so any thread
/// count gives identical results.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 1);

/// Reference spatial-multiplexing chain: all columns carry independent QAM
/// streams at per-stream power 1/N, detected with the pseudo-inverse linear
/// detector. symbol_errors counts whole-vector errors.
SweepResult run_smx_reference(const SweepSpec& spec, unsigned threads = 1);

/// Picks the SA/AE level from the threshold table before sweeping.
SweepResult adaptive_mode_sweep(const SweepSpec& spec, const ModeThresholdTable& table,
                                unsigned threads = 1);

} // namespace thzsm
