#pragma once

#include "thzsm/common.hpp"

#include <cmath>

namespace thzsm {

/// Adaptive Simpson integration of f over [a, b]. Converges when the local
/// error estimate drops below max(abs_tol, rel_tol * |whole|); throws
/// NumericalError when the recursion depth limit is hit before then.
template <typename F>
double integrate_adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-12,
                                  double rel_tol = 1e-9, int max_depth = 60) {
    auto simpson = [](double fa, double fm, double fb, double h) {
        return h / 6.0 * (fa + 4.0 * fm + fb);
    };

    struct Recurse {
        F& f;
        double abs_tol, rel_tol, scale;
        int max_depth;

        double run(double a, double m, double b, double fa, double fm, double fb, double whole,
                   int depth) {
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double err = (left + right - whole) / 15.0;
            const double tol = std::max(abs_tol, rel_tol * std::abs(scale));
            if (std::abs(err) <= tol) return left + right + err;
            if (depth >= max_depth)
                throw NumericalError("adaptive Simpson: depth limit reached, error estimate " +
                                     std::to_string(std::abs(err)) + " above tolerance " +
                                     std::to_string(tol));
            return run(a, lm, m, fa, flm, fm, left, depth + 1) +
                   run(m, rm, b, fm, frm, fb, right, depth + 1);
        }
    };

    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    Recurse rec{f, abs_tol, rel_tol, whole, max_depth};
    return rec.run(a, m, b, fa, fm, fb, whole, 0);
}

} // namespace thzsm
