#pragma once

#include "thzsm/modulation.hpp"
#include "thzsm/sim.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace thzsm {

/// Flat key-value run configuration with [system], [sweep], [files] and
/// [mode_table] sections. Unknown sections or keys are rejected with line
/// numbers; every physical key carries its unit in the name.
struct RunConfig {
    // [system]
    double freq_hz = 1e12;
    double range_m = 1.0;
    int sa_per_axis = 4;
    int ae_per_axis = 1;
    double ae_pitch_m = 150e-6;
    double sa_pitch_m = 0;  ///< 0: derive from the spacing policy
    double gain_tx = 1.0;
    double gain_rx = 1.0;
    double noise_power = 1e-12;
    double kappa_per_m = 0.0;
    std::string sm_level = "sa";  ///< "sa" | "ae"
    int order = 16;

    // [sweep]
    std::vector<double> snr_db = {0, 5, 10, 15, 20};
    uint64_t trials = 10000;
    uint64_t seed = 1;
    std::string detector = "mrrc";        ///< "mrrc" | "ml"
    std::string scheme = "sm";            ///< "sm" | "smx"
    std::string spacing_policy = "region2_optimized";
    int z = 1;
    double delta_raw_m = 0;
    unsigned threads = 1;

    // [files]
    std::string absorption_csv;
    std::string output;

    // [mode_table]: freq_hz -> multiple
    ModeThresholdTable mode_table = {{1e12, 20.0}};

    SystemConfig to_system_config() const;
    SweepSpec to_sweep_spec() const;

    /// Resolved configuration as "key=value" pairs in a stable order, for
    /// CSV comment headers. Thread count is excluded: it never changes
    /// results.
    std::string describe() const;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// Comma list of doubles, or "lin:a:b:n" / "log:a:b:n" grid shorthand.
std::vector<double> parse_grid(const std::string& text);

} // namespace thzsm
