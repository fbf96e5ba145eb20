#include "thzsm/detection.hpp"

#include <cmath>

namespace thzsm {

int slice(Complex v, const Constellation& constellation) {
    int best = 0;
    double best_dist = std::norm(v - constellation.points[0]);
    for (int label = 1; label < constellation.order; ++label) {
        const double d = std::norm(v - constellation.points[static_cast<size_t>(label)]);
        if (d < best_dist) {
            best_dist = d;
            best = label;
        }
    }
    return best;
}

DetectionResult mrrc_detect(const ChannelMatrix& channel, const CVector& y,
                            const Constellation& constellation) {
    if (y.size() != channel.h.rows())
        throw ValidationError("mrrc_detect: received vector length does not match the channel");
    const CVector g = channel.h.adjoint() * y;
    int best = 0;
    double peak = -1.0, runner_up = -1.0;
    for (Eigen::Index l = 0; l < g.size(); ++l) {
        const double mag = std::abs(g(l));
        if (mag > peak) {
            runner_up = peak;
            peak = mag;
            best = static_cast<int>(l);
        } else if (mag > runner_up) {
            runner_up = mag;
        }
    }
    const double energy = channel.h.col(best).squaredNorm();
    if (energy == 0.0) throw ValidationError("mrrc_detect: degenerate channel column");

    DetectionResult r;
    r.antenna_index = best;
    r.peak_magnitude = peak;
    r.runner_up_magnitude = std::max(runner_up, 0.0);
    r.symbol_label = slice(g(best) / energy, constellation);
    r.symbol = constellation.points[static_cast<size_t>(r.symbol_label)];
    r.bits = sm_decode_bits(best, r.symbol_label, channel.config, constellation);
    return r;
}

DetectionResult ml_detect(const ChannelMatrix& channel, const CVector& y,
                          const Constellation& constellation, long hypothesis_budget) {
    if (y.size() != channel.h.rows())
        throw ValidationError("ml_detect: received vector length does not match the channel");
    const long hypotheses = static_cast<long>(channel.h.cols()) * constellation.order;
    if (hypotheses > hypothesis_budget)
        throw ValidationError("ml_detect: exhaustive budget exceeded (" +
                              std::to_string(hypotheses) + " hypotheses)");

    int best_l = 0, best_label = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    CVector residual(y.size());
    for (Eigen::Index l = 0; l < channel.h.cols(); ++l) {
        for (int label = 0; label < constellation.order; ++label) {
            residual.noalias() = y - channel.h.col(l) * constellation.points[static_cast<size_t>(label)];
            const double metric = residual.squaredNorm();
            if (metric < best_metric) {
                best_metric = metric;
                best_l = static_cast<int>(l);
                best_label = label;
            }
        }
    }
    DetectionResult r;
    r.antenna_index = best_l;
    r.symbol_label = best_label;
    r.symbol = constellation.points[static_cast<size_t>(best_label)];
    r.peak_magnitude = std::abs(channel.h.col(best_l).dot(y));
    r.runner_up_magnitude = 0.0;
    r.bits = sm_decode_bits(best_l, best_label, channel.config, constellation);
    return r;
}

} // namespace thzsm
