// Command-line front end: every subcommand reads an optional run
// configuration file, applies flag overrides on top and emits CSV either to
// stdout or to --out. Exit codes: 0 success, 2 validation error, 3 numerical
// failure.

#include "thzsm/analysis.hpp"
#include "thzsm/config.hpp"
#include "thzsm/csv.hpp"
#include "thzsm/detection.hpp"
#include "thzsm/linkbudget.hpp"
#include "thzsm/sim.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace thzsm;

// Writes to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + out_path + "'");
    out << payload;
}

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<uint64_t> seed;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run configuration file");
        cmd->add_option("--out", out_path, "output path (default: stdout)");
        cmd->add_option("--seed", seed, "RNG seed override");
    }

    RunConfig load() const {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (seed) cfg.seed = *seed;
        return cfg;
    }
};

int cmd_spacing(const CommonArgs& common, std::optional<double> range,
                std::optional<double> freq, std::optional<int> m, int zmax,
                std::optional<double> pitch) {
    RunConfig cfg = common.load();
    if (range) cfg.range_m = *range;
    if (freq) cfg.freq_hz = *freq;
    if (m) cfg.sa_per_axis = *m;
    if (pitch) cfg.ae_pitch_m = *pitch;
    std::ostringstream out;
    write_spacing_csv(out, cfg.range_m, cfg.freq_hz, cfg.sa_per_axis, zmax, cfg.ae_pitch_m);
    emit(common.out_path, out.str());
    return 0;
}

int cmd_condition_sweep(const CommonArgs& common, std::optional<double> freq,
                        std::optional<int> m, const std::string& delta_grid_text,
                        const std::string& d_grid_text) {
    RunConfig cfg = common.load();
    if (freq) cfg.freq_hz = *freq;
    if (m) cfg.sa_per_axis = *m;
    const std::vector<double> deltas = parse_grid(delta_grid_text);
    const std::vector<double> ranges = parse_grid(d_grid_text);
    SystemConfig sc = cfg.to_system_config();
    sc.level = SmLevel::Sa;
    const RMatrix grid = condition_sweep(sc, deltas, ranges);
    std::ostringstream out;
    write_condition_csv(out, deltas, ranges, grid, cfg.describe());
    emit(common.out_path, out.str());
    return 0;
}

int cmd_ber_sweep(const CommonArgs& common, bool analytical, std::optional<unsigned> threads,
                  const std::string& snr_text) {
    RunConfig cfg = common.load();
    if (threads) cfg.threads = *threads;
    if (!snr_text.empty()) cfg.snr_db = parse_grid(snr_text);
    const SweepSpec spec = cfg.to_sweep_spec();
    const SweepResult result = spec.scheme == Scheme::Smx
                                   ? run_smx_reference(spec, cfg.threads)
                                   : run_sweep(spec, cfg.threads);

    std::vector<SerBreakdown> breakdowns;
    const std::vector<SerBreakdown>* analytical_ptr = nullptr;
    if (analytical) {
        if (spec.scheme == Scheme::Smx)
            throw ValidationError("--analytical applies to the SM scheme only");
        SystemConfig resolved = spec.config;
        resolved.geom.sa_pitch = result.resolved_sa_pitch;
        const ChannelMatrix channel = build_channel(resolved);
        for (const SweepPoint& p : result.points)
            breakdowns.push_back(total_ser(resolved, channel, power_ratio_from_db(p.snr_db)));
        analytical_ptr = &breakdowns;
    }
    std::ostringstream out;
    write_sweep_csv(out, result, cfg.describe(), analytical_ptr);
    emit(common.out_path, out.str());
    return 0;
}

int cmd_ser_analytical(const CommonArgs& common, const std::string& snr_text) {
    RunConfig cfg = common.load();
    if (!snr_text.empty()) cfg.snr_db = parse_grid(snr_text);
    const SweepSpec spec = cfg.to_sweep_spec();
    SystemConfig resolved = spec.config;
    resolved.geom.sa_pitch = resolve_spacing(spec);
    const ChannelMatrix channel = build_channel(resolved);
    std::vector<SerBreakdown> rows;
    for (double snr_db : cfg.snr_db)
        rows.push_back(total_ser(resolved, channel, power_ratio_from_db(snr_db)));
    std::ostringstream out;
    write_analysis_csv(out, cfg.snr_db, rows, cfg.describe());
    emit(common.out_path, out.str());
    return 0;
}

int cmd_link_budget(const CommonArgs& common, double ptx_dbm, double gamma_th_db,
                    double noise_dbm, double gt_dbi, double gr_dbi,
                    std::optional<double> freq, std::optional<double> range,
                    double sheet_extent_m, std::optional<int> m, int z, int max_q) {
    RunConfig cfg = common.load();
    if (freq) cfg.freq_hz = *freq;
    if (range) cfg.range_m = *range;
    if (m) cfg.sa_per_axis = *m;

    std::optional<AbsorptionTable> table;
    if (!cfg.absorption_csv.empty()) table = AbsorptionTable::from_csv_file(cfg.absorption_csv);
    const AbsorptionTable* table_ptr = table ? &*table : nullptr;

    LinkBudget budget{ptx_dbm, gamma_th_db, noise_dbm, gt_dbi, gr_dbi, 0.0};
    const double pl = path_loss_db(cfg.freq_hz, cfg.range_m, table_ptr);
    const double threshold = pl_threshold_db(budget, 0.0);
    const RequiredQ q = required_q(cfg.freq_hz, cfg.range_m, budget, table_ptr, max_q);
    const double delta_bar =
        quantized_sa_spacing(cfg.range_m, cfg.freq_hz, cfg.sa_per_axis, z, cfg.ae_pitch_m);
    const ActiveSaMask mask =
        active_sa_mask(sheet_extent_m, cfg.sa_per_axis, delta_bar, cfg.ae_pitch_m, q.ae_count);

    std::ostringstream out;
    out << "# " << kArtifactVersion << " link-budget\n";
    out << "path_loss_db=" << format_g17(pl) << "\n";
    out << "pl_threshold_db=" << format_g17(threshold) << "\n";
    out << "required_gain_db=" << format_g17(pl - threshold) << "\n";
    out << "q=" << q.ae_count << "\n";
    out << "array_gain_db=" << format_g17(q.array_gain_db) << "\n";
    out << "delta_bar_m=" << format_g17(delta_bar) << "\n";
    out << "active_sas=" << mask.sa_centers.size() << "\n";
    out << "active_aes=" << mask.sa_centers.size() * mask.sa_elements.front().size() << "\n";
    out << "outermost_center_m=" << format_g17(mask.sa_centers.back().x) << "\n";
    emit(common.out_path, out.str());
    return 0;
}

int cmd_roundtrip(const CommonArgs& common, std::optional<int> m, std::optional<int> q,
                  std::optional<int> order, std::optional<int> expect_bits) {
    RunConfig cfg = common.load();
    if (m) cfg.sa_per_axis = *m;
    if (q) cfg.ae_per_axis = *q;
    if (order) cfg.order = *order;

    SystemConfig sc = cfg.to_system_config();
    sc.level = cfg.ae_per_axis > 1 ? SmLevel::Ae : SmLevel::Sa;
    const int mq = sc.geom.sa_count * sc.geom.ae_count;
    if (sc.level == SmLevel::Ae) {
        // Contiguous uniform grid whose (M Q)-point aperture is orthogonal.
        sc.geom.ae_pitch =
            std::sqrt(kSpeedOfLight * sc.geom.range / (mq * sc.freq));
        sc.geom.sa_pitch = sc.geom.ae_count * sc.geom.ae_pitch;
    } else {
        sc.geom.sa_pitch =
            optimal_sa_spacing(sc.geom.range, sc.freq, sc.geom.sa_count, 1);
    }

    const Constellation constellation = build_constellation(sc.order);
    const int n_bits = bits_per_use(sc.geom.sa_count, sc.geom.ae_count, sc.order, sc.level);
    if (expect_bits && *expect_bits != n_bits)
        throw ValidationError("bit width is " + std::to_string(n_bits) + ", not " +
                              std::to_string(*expect_bits));
    const ChannelMatrix channel = build_channel(sc);

    uint64_t pass = 0, fail = 0;
    std::vector<uint8_t> bits(static_cast<size_t>(n_bits));
    for (uint64_t word = 0; word < (1ull << n_bits); ++word) {
        for (int i = 0; i < n_bits; ++i)
            bits[static_cast<size_t>(i)] = static_cast<uint8_t>((word >> (n_bits - 1 - i)) & 1u);
        const SmFrame frame = sm_encode(bits, sc, constellation);
        const CVector y = channel.h * frame.tx;
        const DetectionResult det = mrrc_detect(channel, y, constellation);
        if (det.bits == bits)
            ++pass;
        else
            ++fail;
    }
    std::ostringstream out;
    out << "# " << kArtifactVersion << " roundtrip\n";
    out << "cases=" << (1ull << n_bits) << "\n";
    out << "pass=" << pass << "\n";
    out << "fail=" << fail << "\n";
    emit(common.out_path, out.str());
    return fail == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"THz array-of-subarrays spatial modulation link simulator"};
    app.require_subcommand(1);

    CommonArgs spacing_common, cond_common, ber_common, ser_common, link_common, rt_common;

    // spacing
    auto* spacing = app.add_subcommand("spacing", "optimal and quantized subarray spacing table");
    spacing_common.attach(spacing);
    std::optional<double> sp_range, sp_freq, sp_pitch;
    std::optional<int> sp_m;
    int sp_zmax = 3;
    spacing->add_option("--range-m", sp_range, "communication range [m]");
    spacing->add_option("--freq-hz", sp_freq, "carrier frequency [Hz]");
    spacing->add_option("--m", sp_m, "subarrays per axis");
    spacing->add_option("--zmax", sp_zmax, "largest z to tabulate");
    spacing->add_option("--ae-pitch-m", sp_pitch, "element pitch for quantization [m]");

    // condition-sweep
    auto* cond = app.add_subcommand("condition-sweep", "channel condition number over (Delta, D)");
    cond_common.attach(cond);
    std::optional<double> cs_freq;
    std::optional<int> cs_m;
    std::string cs_delta = "log:1e-4:1e-1:32", cs_d = "log:0.1:10:16";
    cond->add_option("--freq-hz", cs_freq, "carrier frequency [Hz]");
    cond->add_option("--m", cs_m, "subarrays per axis");
    cond->add_option("--delta-m", cs_delta, "subarray pitch grid (list or {lin|log}:a:b:n)");
    cond->add_option("--d-m", cs_d, "range grid (list or {lin|log}:a:b:n)");

    // ber-sweep
    auto* ber = app.add_subcommand("ber-sweep", "Monte Carlo BER/SER sweep");
    ber_common.attach(ber);
    bool ber_analytical = false;
    std::optional<unsigned> ber_threads;
    std::string ber_snr;
    ber->add_flag("--analytical", ber_analytical, "append closed-form p_e,p_a,p_s columns");
    ber->add_option("--threads", ber_threads, "worker threads (results are thread-invariant)");
    ber->add_option("--snr-db", ber_snr, "SNR grid override (list or {lin|log}:a:b:n)");

    // ser-analytical
    auto* ser = app.add_subcommand("ser-analytical", "closed-form SER breakdown over the grid");
    ser_common.attach(ser);
    std::string ser_snr;
    ser->add_option("--snr-db", ser_snr, "SNR grid override (list or {lin|log}:a:b:n)");

    // link-budget
    auto* link = app.add_subcommand("link-budget", "path loss threshold and subarray sizing");
    link_common.attach(link);
    double lb_ptx = 10.0, lb_gamma = 10.0, lb_noise = -80.0, lb_gt = 0.0, lb_gr = 0.0;
    double lb_extent = 0.05;
    std::optional<double> lb_freq, lb_range;
    std::optional<int> lb_m;
    int lb_z = 1, lb_maxq = 64;
    link->add_option("--ptx-dbm", lb_ptx, "transmit power [dBm]");
    link->add_option("--gamma-th-db", lb_gamma, "threshold SNR [dB]");
    link->add_option("--noise-dbm", lb_noise, "noise level 20log10(sigma) [dBm]");
    link->add_option("--gt-dbi", lb_gt, "transmit antenna gain [dBi]");
    link->add_option("--gr-dbi", lb_gr, "receive antenna gain [dBi]");
    link->add_option("--freq-hz", lb_freq, "carrier frequency [Hz]");
    link->add_option("--range-m", lb_range, "communication range [m]");
    link->add_option("--sheet-extent-m", lb_extent, "sheet side length [m]");
    link->add_option("--m", lb_m, "active subarrays per axis");
    link->add_option("--z", lb_z, "spacing harmonic for delta_bar");
    link->add_option("--max-q", lb_maxq, "largest subarray size considered");

    // roundtrip
    auto* rt = app.add_subcommand("roundtrip", "exhaustive encode/detect/decode verification");
    rt_common.attach(rt);
    std::optional<int> rt_m, rt_q, rt_order, rt_bits;
    rt->add_option("--m", rt_m, "subarrays per axis");
    rt->add_option("--q", rt_q, "elements per axis in a subarray");
    rt->add_option("--order", rt_order, "QAM order");
    rt->add_option("--expect-bits", rt_bits, "fail unless bits-per-use matches");

    try {
        app.parse(argc, argv);
        if (spacing->parsed())
            return cmd_spacing(spacing_common, sp_range, sp_freq, sp_m, sp_zmax, sp_pitch);
        if (cond->parsed())
            return cmd_condition_sweep(cond_common, cs_freq, cs_m, cs_delta, cs_d);
        if (ber->parsed())
            return cmd_ber_sweep(ber_common, ber_analytical, ber_threads, ber_snr);
        if (ser->parsed()) return cmd_ser_analytical(ser_common, ser_snr);
        if (link->parsed())
            return cmd_link_budget(link_common, lb_ptx, lb_gamma, lb_noise, lb_gt, lb_gr,
                                   lb_freq, lb_range, lb_extent, lb_m, lb_z, lb_maxq);
        if (rt->parsed())
            return cmd_roundtrip(rt_common, rt_m, rt_q, rt_order, rt_bits);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const thzsm::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const thzsm::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
