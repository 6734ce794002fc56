#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvspec/common.hpp"
#include "curvspec/timemap.hpp"

namespace curvspec::spectrum {

/* Nodal class S_n^nu: solutions with exactly n-1 simple interior zeros whose
 * sign near x = 0 is nu. */
struct NodalClass {
    int n = 1;
    int nu = +1; // +1 or -1
};

struct Interval {
    double lambda_min = 0.0;
    double lambda_max = 0.0; // +infinity in the Minkowski regime
    bool unbounded = false;
};

/* Exact existence interval for S_n^nu-solutions:
 * (8 n^2 B^2, n^2 pi^2) for kappa > 0 and (n^2 pi^2, infinity) for
 * kappa < 0. The interval does not depend on |kappa|; only the amplitude
 * scale does. */
Interval spectrum_interval(double kappa, int n);

/* The scaling u(x) = v(n x) maps the n-hump problem on (0,1) to the one-hump
 * problem with kappa_tilde = kappa n^2, lambda_tilde = lambda / n^2. */
std::pair<double, double> rescale(double kappa, double lambda, int n);

/* First hump of the solution, sampled uniformly on [0, 1/n].
 * grid holds grid_points + 1 samples; u(0) = u(1/n) = 0, the maximum xi is
 * attained at 1/(2n), and the two halves are exact mirror images. */
struct HumpProfile {
    int n = 1;
    double xi = 0.0;     // amplitude, max of u
    double b = 0.0;      // slope at the left endpoint (original scale)
    double lambda = 0.0;
    double kappa = 0.0;
    double residual_J = 0.0; // |J(lambda_tilde, xi) - 1/2| of the input pair
    std::vector<double> x, u;
};

/* Constructs the hump by inverting x(u) = integral_0^u ds/v(s) (v vanishes
 * like sqrt(xi - u) at the top, handled by the s = xi sin^2 parametrisation)
 * on a Chebyshev-in-u grid, mirroring about 1/(2n), and resampling to the
 * uniform grid. grid_points must be >= 16 and is rounded up to even.
 * Throws NotASolution unless |J(lambda_tilde, xi) - 1/2| <= 1e-8. */
HumpProfile build_hump(double kappa, double lambda, int n, double xi,
                       int grid_points = 1024, const Tolerances& tol = {});

struct NodalSolution {
    NodalClass cls;
    double lambda = 0.0;
    double kappa = 0.0;
    double sup_norm = 0.0;       // = xi
    double boundary_slope = 0.0; // nu * b
    double residual_J = 0.0;
    std::vector<double> x, u;    // n * grid_points + 1 uniform samples on [0,1]
    std::vector<double> zeros;   // interior zeros { j/n : j = 1..n-1 }
};

/* Tiles [0,1] with alternating reflected translates of the hump:
 * u = nu (-1)^j hump(x - j/n) on [j/n, (j+1)/n]. */
NodalSolution assemble_nodal(const HumpProfile& hump, NodalClass cls);

/* End-to-end solve at fixed lambda: rescale, solve the amplitude from
 * J = 1/2, build the hump, assemble. Propagates NoSolution for lambda
 * outside the spectral interval. */
NodalSolution solve_nodal(double kappa, double lambda, NodalClass cls,
                          int grid_points = 1024, const Tolerances& tol = {});

struct BranchPoint {
    double xi = 0.0;     // sup norm
    double lambda = 0.0;
    double b = 0.0;      // u'(0) magnitude
    double residual_J = 0.0;
};

struct SkippedPoint {
    double xi = 0.0;
    std::string reason;
};

struct Branch {
    double kappa = 0.0;
    NodalClass cls;
    std::vector<BranchPoint> points;  // ordered by xi
    std::vector<SkippedPoint> skipped;
};

/* Traces the bifurcation branch over a strictly increasing amplitude grid.
 * Branches are parametrised by xi because lambda(xi) is single-valued and
 * monotone, whereas xi(lambda) degenerates near the Euclidean singular
 * endpoint. Per-point NoSolution is recorded in skipped, not fatal. Points
 * are computed in parallel (CURVSPEC_THREADS workers).
 *
 * Verifies the regime's monotonicity structure before returning and throws
 * InvariantViolation if it fails: for kappa < 0, lambda strictly increasing
 * in xi and b strictly increasing in lambda; for kappa > 0, b strictly
 * decreasing in lambda. */
Branch trace_branch(double kappa, NodalClass cls, const std::vector<double>& xi_grid,
                    const Tolerances& tol = {});

/* Branch endpoint behaviour, one claim per line of the report:
 * Euclidean: lambda(xi) decreases monotonically to 8 n^2 B^2 as
 * xi -> 1/(2 n B sqrt(kappa)). Minkowski: at lambda in {1e3, 1e4, 1e5} the
 * sup norm increases and stays below 1/(2 n sqrt(-kappa)) while the
 * normalised boundary slope b sqrt(-kappa) increases toward 1. */
struct AsymptoteCheck {
    std::string claim;
    bool pass = false;
    double observed = 0.0;
    double reference = 0.0;
};

struct AsymptoteReport {
    double kappa = 0.0;
    int n = 1;
    std::vector<AsymptoteCheck> checks;
    bool all_pass() const;
};

AsymptoteReport asymptote_check(double kappa, int n, const Tolerances& tol = {});

} // namespace curvspec::spectrum
