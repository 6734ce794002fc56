#pragma once

#include <cmath>
#include <utility>

#include "curvspec/common.hpp"

namespace curvspec::detail {

/* Bracketed scalar root solve: secant steps safeguarded by bisection.
 * Requires f(a) and f(b) of opposite sign (or zero). Stops when
 * |f| <= f_tol; throws NonConvergence if the bracket collapses to rounding
 * width first. Returns the abscissa with the smallest residual seen. */
template <class F>
double bracketed_root(F&& f, double a, double fa, double b, double fb,
                      double f_tol, int max_iter = 200)
{
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw InvalidInput("bracketed_root requires a sign change");

    double best_x = std::abs(fa) < std::abs(fb) ? a : b;
    double best_f = std::abs(fa) < std::abs(fb) ? fa : fb;
    double px = b, pf = fb; // previous iterate for the secant model

    for (int iter = 0; iter < max_iter; ++iter) {
        double x;
        const double mid = 0.5 * (a + b);
        // Secant proposal from the two most recent points; fall back to
        // bisection when it leaves the bracket or stalls.
        const double denom = best_f - pf;
        if (denom != 0.0) {
            x = best_x - best_f * (best_x - px) / denom;
            const double width = b - a;
            if (!(x > a + 0.01 * width) || !(x < b - 0.01 * width))
                x = mid;
        } else {
            x = mid;
        }
        if (x <= a || x >= b)
            x = mid;
        if (x == a || x == b)
            return best_x; // bracket at rounding width

        const double fx = f(x);
        px = best_x;
        pf = best_f;
        if (std::abs(fx) < std::abs(best_f)) {
            best_x = x;
            best_f = fx;
        }
        if (std::abs(fx) <= f_tol)
            return x;
        if ((fx > 0.0) == (fa > 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    if (std::abs(best_f) <= f_tol)
        return best_x;
    throw NonConvergence("bracketed_root: residual above tolerance after max iterations");
}

} // namespace curvspec::detail
