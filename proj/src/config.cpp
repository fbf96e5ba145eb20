#include "thzsm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace thzsm {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& value, int line) {
    size_t consumed = 0;
    double v = 0;
    try {
        v = std::stod(value, &consumed);
    } catch (const std::exception&) {
        throw ValidationError("config line " + std::to_string(line) + ": bad number '" + value +
                              "'");
    }
    if (consumed != value.size())
        throw ValidationError("config line " + std::to_string(line) +
                              ": trailing characters in number '" + value + "'");
    return v;
}

uint64_t to_u64(const std::string& value, int line) {
    try {
        if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
        size_t consumed = 0;
        const uint64_t v = std::stoull(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config line " + std::to_string(line) + ": bad integer '" + value +
                              "'");
    }
}

} // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.rfind("lin:", 0) == 0 || text.rfind("log:", 0) == 0) {
        const bool log_scale = text[1] == 'o';
        std::vector<std::string> parts;
        std::stringstream ss(text.substr(4));
        std::string tok;
        while (std::getline(ss, tok, ':')) parts.push_back(tok);
        if (parts.size() != 3) throw ValidationError("grid: expected {lin|log}:start:stop:count");
        const double a = to_double(parts[0], 0);
        const double b = to_double(parts[1], 0);
        const int n = static_cast<int>(to_double(parts[2], 0));
        if (n < 1) throw ValidationError("grid: count must be >= 1");
        if (log_scale && (!(a > 0) || !(b > 0)))
            throw ValidationError("grid: log scale needs positive endpoints");
        for (int i = 0; i < n; ++i) {
            const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            out.push_back(log_scale ? std::exp(std::log(a) + t * (std::log(b) - std::log(a)))
                                    : a + t * (b - a));
        }
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(to_double(tok, 0));
    }
    if (out.empty()) throw ValidationError("grid: no values in '" + text + "'");
    return out;
}

RunConfig parse_run_config(std::istream& in) {
    RunConfig cfg;
    bool mode_table_cleared = false;
    std::string section;
    std::string line;
    int line_no = 0;

    const std::map<std::string, std::function<void(const std::string&, int)>> system_keys = {
        {"freq_hz", [&](const std::string& v, int l) { cfg.freq_hz = to_double(v, l); }},
        {"range_m", [&](const std::string& v, int l) { cfg.range_m = to_double(v, l); }},
        {"sa_per_axis", [&](const std::string& v, int l) { cfg.sa_per_axis = static_cast<int>(to_u64(v, l)); }},
        {"ae_per_axis", [&](const std::string& v, int l) { cfg.ae_per_axis = static_cast<int>(to_u64(v, l)); }},
        {"ae_pitch_m", [&](const std::string& v, int l) { cfg.ae_pitch_m = to_double(v, l); }},
        {"sa_pitch_m", [&](const std::string& v, int l) { cfg.sa_pitch_m = to_double(v, l); }},
        {"gain_tx", [&](const std::string& v, int l) { cfg.gain_tx = to_double(v, l); }},
        {"gain_rx", [&](const std::string& v, int l) { cfg.gain_rx = to_double(v, l); }},
        {"noise_power", [&](const std::string& v, int l) { cfg.noise_power = to_double(v, l); }},
        {"kappa_per_m", [&](const std::string& v, int l) { cfg.kappa_per_m = to_double(v, l); }},
        {"sm_level", [&](const std::string& v, int) { cfg.sm_level = v; }},
        {"order", [&](const std::string& v, int l) { cfg.order = static_cast<int>(to_u64(v, l)); }},
    };
    const std::map<std::string, std::function<void(const std::string&, int)>> sweep_keys = {
        {"snr_db", [&](const std::string& v, int) { cfg.snr_db = parse_grid(v); }},
        {"trials", [&](const std::string& v, int l) { cfg.trials = to_u64(v, l); }},
        {"seed", [&](const std::string& v, int l) { cfg.seed = to_u64(v, l); }},
        {"detector", [&](const std::string& v, int) { cfg.detector = v; }},
        {"scheme", [&](const std::string& v, int) { cfg.scheme = v; }},
        {"spacing_policy", [&](const std::string& v, int) { cfg.spacing_policy = v; }},
        {"z", [&](const std::string& v, int l) { cfg.z = static_cast<int>(to_u64(v, l)); }},
        {"delta_raw_m", [&](const std::string& v, int l) { cfg.delta_raw_m = to_double(v, l); }},
        {"threads", [&](const std::string& v, int l) { cfg.threads = static_cast<unsigned>(to_u64(v, l)); }},
    };
    const std::map<std::string, std::function<void(const std::string&, int)>> file_keys = {
        {"absorption_csv", [&](const std::string& v, int) { cfg.absorption_csv = v; }},
        {"output", [&](const std::string& v, int) { cfg.output = v; }},
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "sweep" && section != "files" &&
                section != "mode_table")
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": key before any section");

        if (section == "mode_table") {
            if (!mode_table_cleared) {
                cfg.mode_table.clear();  // user table replaces the default
                mode_table_cleared = true;
            }
            cfg.mode_table.push_back({to_double(key, line_no), to_double(value, line_no)});
            continue;
        }
        const auto& keys = section == "system" ? system_keys
                         : section == "sweep"  ? sweep_keys
                                               : file_keys;
        const auto it = keys.find(key);
        if (it == keys.end())
            throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "' in section [" + section + "]");
        it->second(value, line_no);
    }
    std::sort(cfg.mode_table.begin(), cfg.mode_table.end(),
              [](const ModeThreshold& a, const ModeThreshold& b) { return a.freq < b.freq; });
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    return parse_run_config(in);
}

SystemConfig RunConfig::to_system_config() const {
    SystemConfig sc;
    sc.geom.sa_count = sa_per_axis;
    sc.geom.ae_count = ae_per_axis;
    sc.geom.ae_pitch = ae_pitch_m;
    // Placeholder pitch when the policy derives it; run_sweep overwrites it.
    sc.geom.sa_pitch = sa_pitch_m > 0 ? sa_pitch_m : ae_pitch_m;
    sc.geom.range = range_m;
    sc.freq = freq_hz;
    sc.gain_tx = gain_tx;
    sc.gain_rx = gain_rx;
    sc.noise_power = noise_power;
    sc.kappa = kappa_per_m;
    if (sm_level == "sa")
        sc.level = SmLevel::Sa;
    else if (sm_level == "ae")
        sc.level = SmLevel::Ae;
    else
        throw ValidationError("sm_level must be 'sa' or 'ae', got '" + sm_level + "'");
    sc.order = order;
    return sc;
}

SweepSpec RunConfig::to_sweep_spec() const {
    SweepSpec spec;
    spec.config = to_system_config();
    spec.snr_grid_db = snr_db;
    spec.trials_per_point = trials;
    spec.seed = seed;
    if (detector == "mrrc")
        spec.detector = Detector::Mrrc;
    else if (detector == "ml")
        spec.detector = Detector::Ml;
    else
        throw ValidationError("detector must be 'mrrc' or 'ml', got '" + detector + "'");
    if (scheme == "sm")
        spec.scheme = Scheme::Sm;
    else if (scheme == "smx")
        spec.scheme = Scheme::Smx;
    else
        throw ValidationError("scheme must be 'sm' or 'smx', got '" + scheme + "'");
    if (spacing_policy == "region1")
        spec.policy = SpacingPolicy::region1();
    else if (spacing_policy == "region2_optimized")
        spec.policy = SpacingPolicy::region2_optimized(z);
    else if (spacing_policy == "region2_raw")
        spec.policy = SpacingPolicy::region2_raw(delta_raw_m);
    else
        throw ValidationError("spacing_policy must be region1, region2_optimized or region2_raw");
    return spec;
}

std::string RunConfig::describe() const {
    std::ostringstream out;
    out.precision(17);
    out << "freq_hz=" << freq_hz << " range_m=" << range_m << " sa_per_axis=" << sa_per_axis
        << " ae_per_axis=" << ae_per_axis << " ae_pitch_m=" << ae_pitch_m
        << " sa_pitch_m=" << sa_pitch_m << " gain_tx=" << gain_tx << " gain_rx=" << gain_rx
        << " noise_power=" << noise_power << " kappa_per_m=" << kappa_per_m
        << " sm_level=" << sm_level << " order=" << order << " trials=" << trials
        << " seed=" << seed << " detector=" << detector << " scheme=" << scheme
        << " spacing_policy=" << spacing_policy << " z=" << z << " delta_raw_m=" << delta_raw_m;
    return out.str();
}

} // namespace thzsm
