#include "thzsm/linkbudget.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace thzsm {

void AbsorptionTable::validate() const {
    if (rows.empty()) throw ValidationError("AbsorptionTable: at least one row required");
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].first > 0))
            throw ValidationError("AbsorptionTable: frequencies must be > 0");
        if (!(rows[i].second >= 0))
            throw ValidationError("AbsorptionTable: absorption coefficients must be >= 0");
        if (i > 0 && !(rows[i].first > rows[i - 1].first))
            throw ValidationError("AbsorptionTable: frequencies must be strictly increasing");
    }
}

double AbsorptionTable::kappa_at(double freq) const {
    validate();
    if (freq <= rows.front().first) return rows.front().second;
    if (freq >= rows.back().first) return rows.back().second;
    for (size_t i = 1; i < rows.size(); ++i) {
        if (freq <= rows[i].first) {
            const auto& [f0, k0] = rows[i - 1];
            const auto& [f1, k1] = rows[i];
            return k0 + (k1 - k0) * (freq - f0) / (f1 - f0);
        }
    }
    return rows.back().second;
}

namespace {

double parse_strict_double(const std::string& token, int line, const std::string& what) {
    size_t consumed = 0;
    double value = 0;
    try {
        value = std::stod(token, &consumed);
    } catch (const std::exception&) {
        throw ValidationError("absorption CSV line " + std::to_string(line) + ": bad " + what +
                              " '" + token + "'");
    }
    if (consumed != token.size())
        throw ValidationError("absorption CSV line " + std::to_string(line) +
                              ": trailing characters in " + what + " '" + token + "'");
    return value;
}

} // namespace

AbsorptionTable AbsorptionTable::from_csv(std::istream& in) {
    AbsorptionTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "freq_hz,kappa_per_m")
                throw ValidationError(
                    "absorption CSV line 1: expected header 'freq_hz,kappa_per_m'");
            continue;
        }
        const size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ValidationError("absorption CSV line " + std::to_string(line_no) +
                                  ": expected exactly two comma-separated fields");
        const double f = parse_strict_double(line.substr(0, comma), line_no, "freq_hz");
        const double k = parse_strict_double(line.substr(comma + 1), line_no, "kappa_per_m");
        if (!table.rows.empty() && !(f > table.rows.back().first))
            throw ValidationError("absorption CSV line " + std::to_string(line_no) +
                                  ": freq_hz must be strictly increasing");
        if (!(k >= 0))
            throw ValidationError("absorption CSV line " + std::to_string(line_no) +
                                  ": kappa_per_m must be >= 0");
        table.rows.emplace_back(f, k);
    }
    table.validate();
    return table;
}

AbsorptionTable AbsorptionTable::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open absorption CSV '" + path + "'");
    return from_csv(in);
}

double path_loss_db(double freq, double distance, const AbsorptionTable* table) {
    if (!(freq > 0) || !(distance > 0))
        throw ValidationError("path_loss_db: freq and distance must be > 0");
    const double kappa = table ? table->kappa_at(freq) : 0.0;
    const double spreading = 20.0 * std::log10(4.0 * M_PI * freq * distance / kSpeedOfLight);
    const double absorption = 10.0 * kappa * distance * std::log10(std::exp(1.0));
    return spreading + absorption;
}

double pl_threshold_db(const LinkBudget& budget, double alpha_db) {
    return budget.p_tx_dbm + budget.g_t_dbi + budget.g_r_dbi + budget.array_gain_db + alpha_db -
           budget.gamma_th_db - budget.noise_dbm;
}

double array_gain_db(int ae_count) {
    if (ae_count < 1) throw ValidationError("array_gain_db: ae_count must be >= 1");
    return 20.0 * std::log10(static_cast<double>(ae_count));
}

RequiredQ required_q(double freq, double distance, const LinkBudget& budget,
                     const AbsorptionTable* table, int max_ae_count) {
    if (max_ae_count < 1) throw ValidationError("required_q: max_ae_count must be >= 1");
    LinkBudget no_array = budget;
    no_array.array_gain_db = 0.0;
    const double required = path_loss_db(freq, distance, table) - pl_threshold_db(no_array, 0.0);
    for (int q = 1; q <= max_ae_count; q *= 2) {
        const double gain = array_gain_db(q);
        if (gain >= required) return {q, gain};
    }
    throw ValidationError("required_q: infeasible range, needs more than " +
                          std::to_string(20.0 * std::log10(static_cast<double>(max_ae_count))) +
                          " dB of array gain");
}

ActiveSaMask active_sa_mask(double sheet_extent, int sa_count, double sa_pitch, double ae_pitch,
                            int ae_count) {
    if (sa_count < 1 || ae_count < 1)
        throw ValidationError("active_sa_mask: counts must be >= 1");
    if (!(sheet_extent > 0) || !(sa_pitch > 0) || !(ae_pitch > 0))
        throw ValidationError("active_sa_mask: extents and pitches must be > 0");
    const double needed = (sa_count - 1) * sa_pitch + ae_count * ae_pitch;
    if (needed > sheet_extent)
        throw ValidationError("active_sa_mask: sheet too small, minimum extent " +
                              std::to_string(needed) + " m");

    ActiveSaMask mask;
    mask.sa_count = sa_count;
    mask.ae_count = ae_count;
    mask.ae_pitch = ae_pitch;
    mask.sa_pitch = sa_pitch;
    ArrayGeometry geom{sa_count, ae_count, ae_pitch, sa_pitch, 1.0};
    for (int row = 1; row <= sa_count; ++row)
        for (int col = 1; col <= sa_count; ++col) {
            mask.sa_centers.push_back(sa_center(geom, row, col));
            mask.sa_elements.push_back(ae_positions(geom, row, col));
        }
    return mask;
}

} // namespace thzsm
