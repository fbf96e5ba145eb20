#pragma once

#include "thzsm/analysis.hpp"
#include "thzsm/sim.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace thzsm {

inline constexpr const char* kArtifactVersion = "thzsm 0.1.0";

/// Shortest-round-trip serialization with 17 significant digits, so equal
/// doubles always print to equal bytes.
std::string format_g17(double v);

/// Sweep rows: snr_db,trials,bit_errors,ber,ser,aer,ci95 behind '#' comment
/// lines carrying the artifact version and the resolved configuration.
/// Analytical breakdowns, when supplied per point, append p_e,p_a,p_s.
void write_sweep_csv(std::ostream& out, const SweepResult& result,
                     const std::string& config_description,
                     const std::vector<SerBreakdown>* analytical = nullptr);

/// Long-format grid rows: Delta_m,D_m,cond_dB.
void write_condition_csv(std::ostream& out, const std::vector<double>& sa_pitch_grid,
                         const std::vector<double>& range_grid, const RMatrix& cond_db,
                         const std::string& config_description);

/// Spacing table rows: z,delta_opt_m,delta_bar_m.
void write_spacing_csv(std::ostream& out, double range_m, double freq_hz, int sa_per_axis,
                       int z_max, double ae_pitch_m);

/// Analytical error budget rows: snr_db,p_e,p_a,p_s,p_tilde_a,gamma_symbol.
void write_analysis_csv(std::ostream& out, const std::vector<double>& snr_db,
                        const std::vector<SerBreakdown>& rows,
                        const std::string& config_description);

} // namespace thzsm
