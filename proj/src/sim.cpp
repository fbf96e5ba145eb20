#include "thzsm/sim.hpp"

#include "thzsm/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <thread>

namespace thzsm {

void SweepSpec::validate() const {
    config.validate();
    if (snr_grid_db.empty()) throw ValidationError("SweepSpec: empty SNR grid");
    if (trials_per_point < 1) throw ValidationError("SweepSpec: trials_per_point must be >= 1");
    if (policy.kind == SpacingPolicy::Kind::Region2Raw && !(policy.raw_spacing > 0))
        throw ValidationError("SweepSpec: region2_raw needs a positive spacing");
    if (policy.kind == SpacingPolicy::Kind::Region2Optimized && policy.z < 1)
        throw ValidationError("SweepSpec: region2_optimized needs z >= 1");
}

double resolve_spacing(const SweepSpec& spec) {
    switch (spec.policy.kind) {
        case SpacingPolicy::Kind::Region1:
            return spec.config.geom.sa_pitch;
        case SpacingPolicy::Kind::Region2Optimized:
            return optimal_sa_spacing(spec.config.geom.range, spec.config.freq,
                                      spec.config.geom.sa_count, spec.policy.z);
        case SpacingPolicy::Kind::Region2Raw:
            return spec.policy.raw_spacing;
    }
    return spec.config.geom.sa_pitch;
}

namespace {

struct Counts {
    uint64_t bit = 0, symbol = 0, antenna = 0;
    uint64_t crossings = 0, union_pair = 0, slicing = 0, antenna_correct = 0;
    uint64_t failed = 0;

    Counts& operator+=(const Counts& o) {
        bit += o.bit;
        symbol += o.symbol;
        antenna += o.antenna;
        crossings += o.crossings;
        union_pair += o.union_pair;
        slicing += o.slicing;
        antenna_correct += o.antenna_correct;
        failed += o.failed;
        return *this;
    }
};

double binomial_ci95(double p, uint64_t n) {
    return 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

void draw_bits(CounterRng& rng, int count, std::vector<uint8_t>& out) {
    out.resize(static_cast<size_t>(count));
    uint64_t word = 0;
    for (int i = 0; i < count; ++i) {
        if (i % 64 == 0) word = rng.next_u64();
        out[static_cast<size_t>(i)] = static_cast<uint8_t>((word >> (i % 64)) & 1u);
    }
}

void draw_noise(CounterRng& rng, double axis_sigma, CVector& out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double re = rng.next_gaussian();
        const double im = rng.next_gaussian();
        out(i) = Complex(axis_sigma * re, axis_sigma * im);
    }
}

int hamming(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

// Partition trials into contiguous chunks, run worker(chunk) on each thread,
// and fold the counts in chunk order so the result is schedule-independent.
template <typename Worker>
Counts parallel_trials(uint64_t trials, unsigned threads, Worker&& worker) {
    threads = std::max(1u, threads);
    const uint64_t chunk = (trials + threads - 1) / threads;
    std::vector<Counts> partial(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        const uint64_t begin = std::min<uint64_t>(t * chunk, trials);
        const uint64_t end = std::min<uint64_t>(begin + chunk, trials);
        if (begin >= end) break;
        pool.emplace_back([&, t, begin, end] { partial[t] = worker(begin, end); });
    }
    for (auto& th : pool) th.join();
    Counts total;
    for (const auto& c : partial) total += c;
    return total;
}

SystemConfig resolved_config(const SweepSpec& spec) {
    SystemConfig config = spec.config;
    config.geom.sa_pitch = resolve_spacing(spec);
    return config;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
    spec.validate();
    const SystemConfig config = resolved_config(spec);
    const Constellation constellation = build_constellation(config.order);
    const ChannelMatrix channel = build_channel(config);
    const double g0 = reference_gain(config);
    const int n_bits = bits_per_use(config.geom.sa_count, config.geom.ae_count, config.order,
                                    config.level);
    const RVector col_energy = channel.h.colwise().squaredNorm().transpose();
    const double gamma_level = constellation.gamma;  // half the per-axis level spacing

    SweepResult result;
    result.scheme = Scheme::Sm;
    result.detector = spec.detector;
    result.level = config.level;
    result.resolved_sa_pitch = config.geom.sa_pitch;
    result.bits_per_trial = n_bits;

    for (size_t point = 0; point < spec.snr_grid_db.size(); ++point) {
        const double gamma = power_ratio_from_db(spec.snr_grid_db[point]);
        if (!(gamma > 0)) throw ValidationError("run_sweep: SNR must be positive in linear scale");
        const double sigma2 = g0 / gamma;
        const double axis_sigma = std::sqrt(sigma2 / 2.0);

        auto worker = [&](uint64_t begin, uint64_t end) {
            Counts c;
            std::vector<uint8_t> bits;
            CVector y(channel.h.rows());
            for (uint64_t trial = begin; trial < end; ++trial) {
                CounterRng rng(spec.seed, static_cast<uint32_t>(point), trial);
                draw_bits(rng, n_bits, bits);
                const SmFrame frame = sm_encode(bits, config, constellation);
                draw_noise(rng, axis_sigma, y);
                y.noalias() += channel.h.col(frame.antenna_index) * frame.symbol;

                const DetectionResult det =
                    spec.detector == Detector::Mrrc
                        ? mrrc_detect(channel, y, constellation)
                        : ml_detect(channel, y, constellation);

                const bool antenna_wrong = det.antenna_index != frame.antenna_index;
                const bool pair_wrong = antenna_wrong || det.symbol_label != frame.symbol_label;
                c.bit += static_cast<uint64_t>(hamming(bits, det.bits));
                c.antenna += antenna_wrong;
                c.symbol += pair_wrong;
                if (!antenna_wrong) {
                    ++c.antenna_correct;
                    c.slicing += det.symbol_label != frame.symbol_label;
                }

                // Noise seen by the slicer at the true column, per axis.
                const Complex z = channel.h.col(frame.antenna_index).dot(y) /
                                      col_energy(frame.antenna_index) -
                                  frame.symbol;
                const int crossings = (std::abs(z.real()) > gamma_level) +
                                      (std::abs(z.imag()) > gamma_level);
                c.crossings += static_cast<uint64_t>(crossings);
                c.union_pair += antenna_wrong || crossings > 0;
            }
            return c;
        };

        const Counts c = parallel_trials(spec.trials_per_point, threads, worker);
        SweepPoint p;
        p.snr_db = spec.snr_grid_db[point];
        p.trials = spec.trials_per_point;
        p.bit_errors = c.bit;
        p.symbol_errors = c.symbol;
        p.antenna_errors = c.antenna;
        p.axis_crossings = c.crossings;
        p.union_pair_errors = c.union_pair;
        p.slicing_errors = c.slicing;
        p.antenna_correct = c.antenna_correct;
        p.ber = static_cast<double>(c.bit) / (static_cast<double>(p.trials) * n_bits);
        p.ser = static_cast<double>(c.symbol) / static_cast<double>(p.trials);
        p.aer = static_cast<double>(c.antenna) / static_cast<double>(p.trials);
        p.ci95 = binomial_ci95(p.ser, p.trials);
        result.points.push_back(p);
    }
    return result;
}

SweepResult run_smx_reference(const SweepSpec& spec, unsigned threads) {
    spec.validate();
    if (spec.scheme != Scheme::Smx)
        throw ValidationError("run_smx_reference: spec.scheme must be Smx");
    const SystemConfig config = resolved_config(spec);
    const Constellation constellation = build_constellation(config.order);
    const ChannelMatrix channel = build_channel(config);
    const double g0 = reference_gain(config);
    const int streams = static_cast<int>(channel.h.cols());
    const int bits_per_stream = constellation.bits_per_symbol();
    const int n_bits = streams * bits_per_stream;
    const double stream_scale = 1.0 / std::sqrt(static_cast<double>(streams));

    // Zero-forcing detector: pseudo-inverse by SVD, flagged singular when the
    // spectrum collapses to machine precision.
    Eigen::JacobiSVD<CMatrix> svd(channel.h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double tol = s(0) * std::max(channel.h.rows(), channel.h.cols()) *
                       std::numeric_limits<double>::epsilon();
    const bool singular = s(s.size() - 1) <= tol;
    CMatrix pinv;
    if (!singular) {
        pinv = svd.matrixV() * s.cwiseInverse().cast<Complex>().asDiagonal() *
               svd.matrixU().adjoint();
    }

    SweepResult result;
    result.scheme = Scheme::Smx;
    result.detector = spec.detector;
    result.level = config.level;
    result.resolved_sa_pitch = config.geom.sa_pitch;
    result.bits_per_trial = n_bits;

    for (size_t point = 0; point < spec.snr_grid_db.size(); ++point) {
        const double gamma = power_ratio_from_db(spec.snr_grid_db[point]);
        if (!(gamma > 0))
            throw ValidationError("run_smx_reference: SNR must be positive in linear scale");
        const double sigma2 = g0 / gamma;
        const double axis_sigma = std::sqrt(sigma2 / 2.0);

        auto worker = [&](uint64_t begin, uint64_t end) {
            Counts c;
            std::vector<uint8_t> bits;
            CVector x(streams), y(channel.h.rows()), xhat(streams);
            for (uint64_t trial = begin; trial < end; ++trial) {
                CounterRng rng(spec.seed, static_cast<uint32_t>(point), trial);
                draw_bits(rng, n_bits, bits);
                if (singular) {
                    c.bit += static_cast<uint64_t>(n_bits);
                    ++c.symbol;
                    ++c.failed;
                    continue;
                }
                for (int k = 0; k < streams; ++k) {
                    uint32_t label = 0;
                    for (int b = 0; b < bits_per_stream; ++b)
                        label = (label << 1) |
                                bits[static_cast<size_t>(k * bits_per_stream + b)];
                    x(k) = constellation.points[label] * stream_scale;
                }
                draw_noise(rng, axis_sigma, y);
                y.noalias() += channel.h * x;
                xhat.noalias() = pinv * y;

                bool vector_wrong = false;
                for (int k = 0; k < streams; ++k) {
                    const int label = slice(xhat(k) / stream_scale, constellation);
                    uint32_t sent = 0;
                    for (int b = 0; b < bits_per_stream; ++b)
                        sent = (sent << 1) | bits[static_cast<size_t>(k * bits_per_stream + b)];
                    if (static_cast<uint32_t>(label) != sent) vector_wrong = true;
                    const uint32_t diff = static_cast<uint32_t>(label) ^ sent;
                    c.bit += static_cast<uint64_t>(__builtin_popcount(diff));
                }
                c.symbol += vector_wrong;
            }
            return c;
        };

        const Counts c = parallel_trials(spec.trials_per_point, threads, worker);
        SweepPoint p;
        p.snr_db = spec.snr_grid_db[point];
        p.trials = spec.trials_per_point;
        p.bit_errors = c.bit;
        p.symbol_errors = c.symbol;
        p.antenna_errors = 0;
        p.ber = static_cast<double>(c.bit) / (static_cast<double>(p.trials) * n_bits);
        p.ser = static_cast<double>(c.symbol) / static_cast<double>(p.trials);
        p.aer = 0.0;
        p.ci95 = binomial_ci95(p.ser, p.trials);
        result.points.push_back(p);
        result.failed_trials += c.failed;
    }
    return result;
}

SweepResult adaptive_mode_sweep(const SweepSpec& spec, const ModeThresholdTable& table,
                                unsigned threads) {
    SweepSpec adapted = spec;
    adapted.config.level = mode_select(spec.config.geom.range, spec.config.geom.ae_pitch,
                                       spec.config.freq, table);
    return run_sweep(adapted, threads);
}

} // namespace thzsm
