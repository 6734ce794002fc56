#include "curvspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "curvspec/shooting.hpp"

namespace curvspec::spectrum {

namespace {

using timemap::Regime;

constexpr double kPi = std::numbers::pi;

void check_class(int n)
{
    if (n < 1)
        throw InvalidInput("nodal class requires n >= 1");
}

/* 16-point Gauss-Legendre nodes/weights on [-1,1], for the cumulative
 * arclength panels of the hump construction. */
constexpr double gl_x[8] = {
    0.09501250983763744019, 0.28160355077925891323, 0.45801677765722738634,
    0.61787624440264374845, 0.75540440835500303390, 0.86563120238783174388,
    0.94457502307323257608, 0.98940093499164993260};
constexpr double gl_w[8] = {
    0.18945061045506849629, 0.18260341504492358887, 0.16915651939500253819,
    0.14959598881657673208, 0.12462897125553387205, 0.09515851168249278481,
    0.06225352393864789286, 0.02715245941175409485};

/* Half-hump geometry in the rescaled (n = 1) variables: u on [0, 1/2],
 * parametrised as u = xi sin^2(tau), tau in [0, pi/2].
 *
 * From the first integral, with w = lambda (kappa/2)(xi^2 - u^2):
 *   v(u)^2 = w (2 - w) / (kappa (1 - w)^2),
 * and dx/dtau = (du/dtau) / v simplifies to
 *   2 sin(tau) (1 - w) / sqrt(lambda (1 + sin^2 tau)(1 - w/2)),
 * smooth on the whole closed interval (the sqrt(xi - u) vanishing of v is
 * absorbed by the parametrisation, and the amplitude factors cancel). */
struct HalfHump {
    double lambda, kappa, xi;

    double w_of_tau(double tau) const
    {
        const double c = std::cos(tau);
        const double s = std::sin(tau);
        return 0.5 * lambda * kappa * xi * xi * c * c * (1.0 + s * s);
    }

    double dx_dtau(double tau) const
    {
        const double s = std::sin(tau);
        const double w = w_of_tau(tau);
        return 2.0 * s * (1.0 - w) /
               std::sqrt(lambda * (1.0 + s * s) * (1.0 - 0.5 * w));
    }

    double v_of_u(double u) const
    {
        const double w = 0.5 * lambda * kappa * (xi - u) * (xi + u);
        const double v2 = w * (2.0 - w) / kappa;
        return std::sqrt(v2) / (1.0 - w);
    }
};

} // namespace

Interval spectrum_interval(double kappa, int n)
{
    if (kappa == 0.0 || !std::isfinite(kappa))
        throw InvalidInput("spectrum_interval requires kappa != 0");
    check_class(n);
    const double n2 = double(n) * double(n);
    if (kappa > 0.0) {
        const double B = timemap::compute_B();
        return Interval{8.0 * n2 * B * B, n2 * kPi * kPi, false};
    }
    return Interval{n2 * kPi * kPi, std::numeric_limits<double>::infinity(), true};
}

std::pair<double, double> rescale(double kappa, double lambda, int n)
{
    check_class(n);
    const double n2 = double(n) * double(n);
    return {kappa * n2, lambda / n2};
}

HumpProfile build_hump(double kappa, double lambda, int n, double xi,
                       int grid_points, const Tolerances& tol)
{
    check_class(n);
    if (grid_points < 16)
        throw InvalidInput("build_hump requires grid_points >= 16");
    if (grid_points % 2 != 0)
        ++grid_points;

    const auto [kt, lt] = rescale(kappa, lambda, n);
    const Regime regime = Regime::from_kappa(kt);

    const double J = timemap::time_map(regime, lt, xi, tol).value;
    const double residual = std::abs(J - 0.5);
    if (residual > 1e-8) {
        std::ostringstream msg;
        msg << "amplitude " << xi << " does not solve the time-map equation at lambda = "
            << lambda << " (|J - 1/2| = " << residual << ")";
        throw NotASolution(msg.str());
    }

    const HalfHump geom{lt, kt, xi};

    // Chebyshev-in-u node count: panels must stay well inside the
    // transition layer of width ~ 1/(xi sqrt(lambda |kappa|)).
    const double layer = xi * std::sqrt(std::abs(lt * kt));
    int K = std::max({256, grid_points / 2, int(8.0 * layer) + 1});

    // Cumulative x(tau_j), tau_j = (pi/2) j / K, by per-panel Gauss-Legendre.
    std::vector<double> tau(K + 1), xs(K + 1), us(K + 1), vs(K + 1);
    for (int j = 0; j <= K; ++j) {
        tau[j] = 0.5 * kPi * j / K;
        const double s = std::sin(tau[j]);
        us[j] = xi * s * s;
        vs[j] = j == K ? 0.0 : geom.v_of_u(us[j]);
    }
    xs[0] = 0.0;
    for (int j = 1; j <= K; ++j) {
        const double mid = 0.5 * (tau[j - 1] + tau[j]);
        const double half = 0.5 * (tau[j] - tau[j - 1]);
        double acc = 0.0;
        for (int g = 0; g < 8; ++g)
            acc += gl_w[g] * (geom.dx_dtau(mid - half * gl_x[g]) +
                              geom.dx_dtau(mid + half * gl_x[g]));
        xs[j] = xs[j - 1] + acc * half;
    }

    // Uniform resample of u(y) on [0, 1/2] via monotone Hermite data
    // (x_j, u_j, v_j); queries beyond the computed half-width x_K (possible
    // only within the 1e-8 residual) clamp to the top of the hump.
    auto eval_half = [&](double y) -> double {
        if (y <= 0.0)
            return 0.0;
        if (y >= xs[K])
            return xi;
        const auto it = std::upper_bound(xs.begin(), xs.end(), y);
        const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
        const double h = xs[j + 1] - xs[j];
        const double s = (y - xs[j]) / h;
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        return h00 * us[j] + h * h10 * vs[j] + h01 * us[j + 1] + h * h11 * vs[j + 1];
    };

    const int M = grid_points;
    HumpProfile hump;
    hump.n = n;
    hump.xi = xi;
    hump.b = shooting::slope_from_amplitude(kappa, lambda, xi);
    hump.lambda = lambda;
    hump.kappa = kappa;
    hump.residual_J = residual;
    hump.x.resize(M + 1);
    hump.u.resize(M + 1);
    for (int i = 0; i <= M; ++i) {
        hump.x[i] = double(i) / (double(n) * M);
        const double y = double(i) / M; // rescaled coordinate in [0,1]
        hump.u[i] = i <= M / 2 ? eval_half(y) : hump.u[M - i];
    }
    // The maximum sits at the midpoint sample by construction; pin it so the
    // |J - 1/2| residual cannot shave the top value below xi.
    hump.u[M / 2] = xi;
    return hump;
}

NodalSolution assemble_nodal(const HumpProfile& hump, NodalClass cls)
{
    check_class(cls.n);
    if (cls.nu != 1 && cls.nu != -1)
        throw InvalidInput("nu must be +1 or -1");
    if (cls.n != hump.n)
        throw InvalidInput("hump was built for a different nodal class");

    const int n = cls.n;
    const int M = int(hump.u.size()) - 1;
    NodalSolution sol;
    sol.cls = cls;
    sol.lambda = hump.lambda;
    sol.kappa = hump.kappa;
    sol.sup_norm = hump.xi;
    sol.boundary_slope = cls.nu * hump.b;
    sol.residual_J = hump.residual_J;
    sol.x.resize(std::size_t(n) * M + 1);
    sol.u.resize(std::size_t(n) * M + 1);
    for (int j = 0; j < n; ++j) {
        const double sign = (j % 2 == 0 ? 1.0 : -1.0) * cls.nu;
        for (int k = (j == 0 ? 0 : 1); k <= M; ++k) {
            const std::size_t i = std::size_t(j) * M + k;
            sol.x[i] = double(i) / (double(n) * M);
            const double value = sign * hump.u[k];
            sol.u[i] = value == 0.0 ? 0.0 : value; // normalise -0
        }
    }
    sol.x[0] = 0.0;
    sol.u[0] = 0.0;
    sol.zeros.reserve(n - 1);
    for (int j = 1; j < n; ++j)
        sol.zeros.push_back(double(j) / n);
    return sol;
}

NodalSolution solve_nodal(double kappa, double lambda, NodalClass cls,
                          int grid_points, const Tolerances& tol)
{
    const auto [kt, lt] = rescale(kappa, lambda, cls.n);
    const Regime regime = Regime::from_kappa(kt);
    const double xi = timemap::solve_amplitude(regime, lt, 0.5, tol);
    const HumpProfile hump = build_hump(kappa, lambda, cls.n, xi, grid_points, tol);
    return assemble_nodal(hump, cls);
}

Branch trace_branch(double kappa, NodalClass cls, const std::vector<double>& xi_grid,
                    const Tolerances& tol)
{
    check_class(cls.n);
    if (xi_grid.size() < 1)
        throw InvalidInput("trace_branch requires a nonempty amplitude grid");
    for (std::size_t i = 0; i < xi_grid.size(); ++i) {
        if (!(xi_grid[i] > 0.0) || (i > 0 && !(xi_grid[i] > xi_grid[i - 1])))
            throw InvalidInput("amplitude grid must be positive and strictly increasing");
    }

    const double n2 = double(cls.n) * double(cls.n);
    const Regime regime = Regime::from_kappa(kappa * n2);

    struct Slot {
        std::optional<BranchPoint> point;
        std::string error;
    };
    std::vector<Slot> slots(xi_grid.size());

    parallel_for(xi_grid.size(), [&](std::size_t i) {
        const double xi = xi_grid[i];
        try {
            const double lt = timemap::lambda_of_xi(regime, xi, 0.5, 1e6, tol);
            const double lambda = n2 * lt;
            BranchPoint p;
            p.xi = xi;
            p.lambda = lambda;
            // u'(0) is invariant under the hump rescaling: the quantity
            // c = 1 - lambda kappa xi^2 / 2 is the same in both variable sets.
            p.b = shooting::slope_from_amplitude(kappa, lambda, xi);
            p.residual_J = std::abs(timemap::time_map(regime, lt, xi, tol).value - 0.5);
            slots[i].point = p;
        } catch (const NoSolution& e) {
            slots[i].error = e.what();
        }
    });

    Branch branch;
    branch.kappa = kappa;
    branch.cls = cls;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].point)
            branch.points.push_back(*slots[i].point);
        else
            branch.skipped.push_back({xi_grid[i], slots[i].error});
    }

    // Monotonicity structure of the branch (checked pairwise so the claim
    // "b monotone in lambda" does not presuppose lambda monotone in xi).
    const auto& pts = branch.points;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const auto& p = pts[i];
            const auto& q = pts[j];
            if (kappa < 0.0) {
                if (!(q.lambda > p.lambda))
                    throw InvariantViolation("Minkowski branch: lambda not increasing in xi");
                if (!(q.b > p.b))
                    throw InvariantViolation("Minkowski branch: u'(0) not increasing in lambda");
            } else {
                const auto& low = p.lambda < q.lambda ? p : q;
                const auto& high = p.lambda < q.lambda ? q : p;
                if (!(low.b > high.b))
                    throw InvariantViolation("Euclidean branch: u'(0) not decreasing in lambda");
            }
        }
    }
    return branch;
}

bool AsymptoteReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const AsymptoteCheck& c) { return c.pass; });
}

AsymptoteReport asymptote_check(double kappa, int n, const Tolerances& tol)
{
    check_class(n);
    if (kappa == 0.0)
        throw InvalidInput("asymptote_check requires kappa != 0");

    AsymptoteReport report;
    report.kappa = kappa;
    report.n = n;
    const double n2 = double(n) * double(n);
    const Regime regime = Regime::from_kappa(kappa * n2);

    if (kappa > 0.0) {
        const double B = timemap::compute_B();
        const double xi_lim = 1.0 / (2.0 * n * B * std::sqrt(kappa));
        const double target = 8.0 * n2 * B * B;
        std::vector<double> lambdas;
        for (double offset : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const double xi = (1.0 - offset) * xi_lim;
            lambdas.push_back(n2 * timemap::lambda_of_xi(regime, xi, 0.5, 1e6, tol));
        }
        bool monotone = true;
        for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
            monotone = monotone && lambdas[i] > lambdas[i + 1];
        bool above = true;
        for (double l : lambdas)
            above = above && l > target;
        report.checks.push_back({"lambda(xi) decreases monotonically toward 8 n^2 B^2",
                                 monotone && above, lambdas.back(), target});
        report.checks.push_back({"lambda at xi = (1-1e-4) amplitude limit within 1e-2 of 8 n^2 B^2",
                                 std::abs(lambdas.back() - target) < 1e-2,
                                 lambdas.back(), target});
    } else {
        const double bound = 1.0 / (2.0 * n * std::sqrt(-kappa));
        const double slope_scale = std::sqrt(-kappa);
        std::vector<double> xis, bs;
        for (double lambda : {1e3, 1e4, 1e5}) {
            const double lt = lambda / n2;
            const double xi = timemap::solve_amplitude(regime, lt, 0.5, tol);
            xis.push_back(xi);
            bs.push_back(shooting::slope_from_amplitude(kappa, lambda, xi));
        }
        const bool xi_increasing = xis[0] < xis[1] && xis[1] < xis[2];
        bool xi_bounded = true;
        for (double xi : xis)
            xi_bounded = xi_bounded && xi < bound;
        const bool b_increasing = bs[0] < bs[1] && bs[1] < bs[2];
        const double b_norm = bs.back() * slope_scale;
        report.checks.push_back({"sup norm increasing in lambda", xi_increasing,
                                 xis.back(), bound});
        report.checks.push_back({"sup norm strictly below 1/(2 n sqrt(-kappa))",
                                 xi_bounded, xis.back(), bound});
        report.checks.push_back({"u'(0) increasing in lambda", b_increasing,
                                 bs.back(), 1.0 / slope_scale});
        report.checks.push_back({"normalised u'(0) in (0.99, 1) at lambda = 1e5",
                                 b_norm > 0.99 && b_norm < 1.0, b_norm, 1.0});
    }
    return report;
}

} // namespace curvspec::spectrum
