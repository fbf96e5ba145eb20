#include "thzsm/csv.hpp"

#include "thzsm/geometry.hpp"

#include <cstdio>
#include <ostream>

namespace thzsm {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result,
                     const std::string& config_description,
                     const std::vector<SerBreakdown>* analytical) {
    out << "# " << kArtifactVersion << " ber-sweep\n";
    out << "# config: " << config_description << "\n";
    out << "# resolved_sa_pitch_m=" << format_g17(result.resolved_sa_pitch)
        << " bits_per_trial=" << result.bits_per_trial
        << " level=" << (result.level == SmLevel::Sa ? "sa" : "ae")
        << " failed_trials=" << result.failed_trials << "\n";
    out << "# snr_db is the per-stream SNR gamma = reference_gain / sigma^2\n";
    out << "snr_db,trials,bit_errors,ber,ser,aer,ci95";
    if (analytical) out << ",p_e,p_a,p_s";
    out << "\n";
    for (size_t i = 0; i < result.points.size(); ++i) {
        const SweepPoint& p = result.points[i];
        out << format_g17(p.snr_db) << ',' << p.trials << ',' << p.bit_errors << ','
            << format_g17(p.ber) << ',' << format_g17(p.ser) << ',' << format_g17(p.aer) << ','
            << format_g17(p.ci95);
        if (analytical) {
            const SerBreakdown& a = (*analytical)[i];
            out << ',' << format_g17(a.p_e) << ',' << format_g17(a.p_a) << ','
                << format_g17(a.p_s);
        }
        out << "\n";
    }
}

void write_condition_csv(std::ostream& out, const std::vector<double>& sa_pitch_grid,
                         const std::vector<double>& range_grid, const RMatrix& cond_db,
                         const std::string& config_description) {
    out << "# " << kArtifactVersion << " condition-sweep\n";
    out << "# config: " << config_description << "\n";
    out << "Delta_m,D_m,cond_dB\n";
    for (size_t i = 0; i < sa_pitch_grid.size(); ++i)
        for (size_t j = 0; j < range_grid.size(); ++j)
            out << format_g17(sa_pitch_grid[i]) << ',' << format_g17(range_grid[j]) << ','
                << format_g17(cond_db(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
                << "\n";
}

void write_spacing_csv(std::ostream& out, double range_m, double freq_hz, int sa_per_axis,
                       int z_max, double ae_pitch_m) {
    out << "# " << kArtifactVersion << " spacing\n";
    out << "# range_m=" << format_g17(range_m) << " freq_hz=" << format_g17(freq_hz)
        << " sa_per_axis=" << sa_per_axis << " ae_pitch_m=" << format_g17(ae_pitch_m) << "\n";
    out << "z,delta_opt_m,delta_bar_m\n";
    for (int z = 1; z <= z_max; ++z) {
        const double opt = optimal_sa_spacing(range_m, freq_hz, sa_per_axis, z);
        const double bar = quantized_sa_spacing(range_m, freq_hz, sa_per_axis, z, ae_pitch_m);
        out << z << ',' << format_g17(opt) << ',' << format_g17(bar) << "\n";
    }
}

void write_analysis_csv(std::ostream& out, const std::vector<double>& snr_db,
                        const std::vector<SerBreakdown>& rows,
                        const std::string& config_description) {
    out << "# " << kArtifactVersion << " ser-analytical\n";
    out << "# config: " << config_description << "\n";
    out << "snr_db,p_e,p_a,p_s,p_tilde_a,gamma_symbol\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const SerBreakdown& a = rows[i];
        out << format_g17(snr_db[i]) << ',' << format_g17(a.p_e) << ',' << format_g17(a.p_a)
            << ',' << format_g17(a.p_s) << ',' << format_g17(a.p_tilde_a) << ','
            << format_g17(a.gamma_symbol) << "\n";
    }
}

} // namespace thzsm
