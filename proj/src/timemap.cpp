#include "curvspec/timemap.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "curvspec/quadrature.hpp"
#include "root_solve.hpp"

namespace curvspec::timemap {

namespace {

// Guard band at the Euclidean amplitude boundary: past (1 - 1e-8) xi_max the
// quantity 1 - w loses every significant digit.
constexpr double kEuclideanGuard = 1e-8;

double B_cached_base()
{
    static std::once_flag flag;
    static double value = 0.0;
    std::call_once(flag, [] {
        // B = integral_0^1 theta^2 / sqrt(1 - theta^4) dtheta, the
        // algebraically equivalent form of integral dtheta/sqrt(theta^-4 - 1),
        // with 1 - theta^4 factored so the right endpoint stays accurate.
        auto integrand = [](double theta, double one_minus_theta) {
            const double q = one_minus_theta * (1.0 + theta) * (1.0 + theta * theta);
            return theta * theta / std::sqrt(q);
        };
        value = quadrature::integrate(integrand, {.right_singular = true},
                                      1e-13, 1e-13)
                    .value;
    });
    return value;
}

std::atomic<double> g_B_perturbation{0.0};

} // namespace

namespace detail {

void set_B_perturbation(double delta) { g_B_perturbation.store(delta); }
double B_perturbation() { return g_B_perturbation.load(); }

} // namespace detail

Regime Regime::from_kappa(double kappa)
{
    if (kappa == 0.0 || !std::isfinite(kappa))
        throw InvalidInput("kappa must be nonzero and finite");
    return Regime{kappa > 0.0 ? RegimeKind::Euclidean : RegimeKind::Minkowski, kappa};
}

double compute_B()
{
    return B_cached_base() + g_B_perturbation.load();
}

double euclidean_xi_max(double kappa, double lambda)
{
    if (!(kappa > 0.0) || !(lambda > 0.0))
        throw InvalidInput("euclidean_xi_max requires kappa > 0 and lambda > 0");
    return std::sqrt(2.0 / (lambda * kappa));
}

namespace {

void check_time_map_args(const Regime& regime, double lambda, double xi)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidInput("time map requires lambda > 0");
    if (!(xi > 0.0) || !std::isfinite(xi))
        throw InvalidInput("time map requires xi > 0");
    if (regime.euclidean()) {
        const double cap = euclidean_xi_max(regime.kappa, lambda);
        if (xi > (1.0 - kEuclideanGuard) * cap) {
            std::ostringstream msg;
            msg << "Euclidean amplitude " << xi << " at or beyond xi_max = " << cap;
            throw DomainViolation(msg.str());
        }
    }
}

} // namespace

TimeMapEval time_map(const Regime& regime, double lambda, double xi,
                     const Tolerances& tol)
{
    check_time_map_args(regime, lambda, xi);
    const double kappa = regime.kappa;
    const double half_lk = 0.5 * lambda * kappa;

    // J = integral_0^1 xi dtheta / v(xi theta), v^2 = w(2-w)/(kappa (1-w)^2),
    // w = lambda (kappa/2) xi^2 (1 - theta^2). v vanishes like
    // sqrt(1 - theta) at theta = 1, so the right endpoint is singular.
    auto integrand = [=](double theta, double one_minus_theta) {
        const double w = half_lk * xi * xi * one_minus_theta * (1.0 + theta);
        const double v2 = w * (2.0 - w) / kappa;
        return xi * (1.0 - w) / std::sqrt(v2);
    };
    const auto q = quadrature::integrate(integrand, {.right_singular = true},
                                         tol.quad_abs, tol.quad_rel);
    return TimeMapEval{lambda, xi, q.value, q.error_estimate};
}

double time_map_derivative_xi(const Regime& regime, double lambda, double xi,
                              const Tolerances& tol)
{
    if (!regime.minkowski())
        throw DomainViolation("time_map_derivative_xi is defined for kappa < 0 only");
    if (!(lambda > 0.0) || !(xi > 0.0))
        throw InvalidInput("time_map_derivative_xi requires lambda > 0 and xi > 0");
    const double kappa = regime.kappa;
    const double half_lk = 0.5 * lambda * kappa;

    // a(theta) = 1 / (1 - lambda (kappa/2) xi^2 (1-theta^2)) <= 1; both
    // 1 - a and 1 - a^2 are formed from the positive increment
    // d = -lambda (kappa/2) xi^2 (1-theta^2) of the denominator.
    auto integrand = [=](double theta, double one_minus_theta) {
        const double d = -half_lk * xi * xi * one_minus_theta * (1.0 + theta);
        const double denom = 1.0 + d;
        const double a = 1.0 / denom;
        const double one_minus_a = d / denom;
        const double one_minus_a2 = one_minus_a * (1.0 + a);
        return std::pow(one_minus_a2, 1.5) * one_minus_a * one_minus_a * (a + 0.5);
    };
    const auto q = quadrature::integrate(integrand, {}, tol.quad_abs, tol.quad_rel);
    return 2.0 * std::sqrt(-kappa) * q.value;
}

double time_map_derivative_xi_fd(const Regime& regime, double lambda, double xi,
                                 double h, const Tolerances& tol)
{
    if (!(h > 0.0) || h >= xi)
        throw InvalidInput("finite-difference step must satisfy 0 < h < xi");
    const double up = time_map(regime, lambda, xi + h, tol).value;
    const double dn = time_map(regime, lambda, xi - h, tol).value;
    return (up - dn) / (2.0 * h);
}

std::vector<AmplitudeBracket> scan_amplitude_brackets(const Regime& regime,
                                                      double lambda, double target,
                                                      int scan_points,
                                                      const Tolerances& tol)
{
    if (!(lambda > 0.0))
        throw InvalidInput("scan_amplitude_brackets requires lambda > 0");
    if (!(target > 0.0))
        throw InvalidInput("scan_amplitude_brackets requires a positive target");
    if (scan_points < 2)
        throw InvalidInput("scan needs at least two points");

    const double xi_hi = regime.euclidean()
                             ? (1.0 - kEuclideanGuard) * euclidean_xi_max(regime.kappa, lambda)
                             : target / std::sqrt(-regime.kappa);

    std::vector<AmplitudeBracket> brackets;
    double prev_xi = 0.0;
    double prev_f = 0.0;
    bool have_prev = false;
    for (int k = 1; k <= scan_points; ++k) {
        const double xi = xi_hi * k / scan_points;
        const double f = time_map(regime, lambda, xi, tol).value - target;
        if (have_prev && (f == 0.0 || (prev_f > 0.0) != (f > 0.0)))
            brackets.push_back({prev_xi, xi, prev_f, f});
        prev_xi = xi;
        prev_f = f;
        have_prev = true;
    }
    return brackets;
}

double solve_amplitude(const Regime& regime, double lambda,
                       double half_width_target, const Tolerances& tol)
{
    const double target = half_width_target;
    auto brackets = scan_amplitude_brackets(regime, lambda, target, 512, tol);

    if (brackets.empty()) {
        const double xi_hi = regime.euclidean()
                                 ? (1.0 - kEuclideanGuard) * euclidean_xi_max(regime.kappa, lambda)
                                 : target / std::sqrt(-regime.kappa);
        const double f_lo = time_map(regime, lambda, xi_hi / 512.0, tol).value - target;
        const double f_hi = time_map(regime, lambda, xi_hi, tol).value - target;
        std::ostringstream msg;
        msg << "no amplitude solves J = " << target << " at lambda = " << lambda
            << " (J - target is " << f_lo << " at the lower boundary and " << f_hi
            << " at the upper boundary)";
        throw NoSolution(msg.str());
    }
    if (brackets.size() > 1) {
        std::ostringstream msg;
        msg << brackets.size() << " amplitude brackets found at lambda = " << lambda
            << "; the solution should be unique";
        throw MultipleRoots(msg.str());
    }

    const auto& bracket = brackets.front();
    auto f = [&](double xi) { return time_map(regime, lambda, xi, tol).value - target; };
    return curvspec::detail::bracketed_root(f, bracket.xi_lo, bracket.j_lo, bracket.xi_hi,
                                  bracket.j_hi, tol.root);
}

double lambda_of_xi(const Regime& regime, double xi, double half_width_target,
                    double lambda_budget, const Tolerances& tol)
{
    if (!(xi > 0.0))
        throw InvalidInput("lambda_of_xi requires xi > 0");
    if (!(half_width_target > 0.0))
        throw InvalidInput("lambda_of_xi requires a positive target");
    if (!(lambda_budget > 0.0))
        throw InvalidInput("lambda budget must be positive");
    const double target = half_width_target;

    // Euclidean amplitudes cap lambda at 2/(kappa xi^2); back off far enough
    // that xi still clears time_map's own guard band at lambda_hi.
    double lambda_hi = lambda_budget;
    if (regime.euclidean()) {
        const double cap = 2.0 / (regime.kappa * xi * xi);
        lambda_hi = std::min(lambda_hi, (1.0 - 4.0 * kEuclideanGuard) * cap);
    }

    auto f = [&](double lambda) { return time_map(regime, lambda, xi, tol).value - target; };

    double f_hi = f(lambda_hi);
    if (f_hi > 0.0) {
        std::ostringstream msg;
        msg << "J(lambda, " << xi << ") stays above " << target
            << " up to lambda = " << lambda_hi << " (J - target = " << f_hi << ")";
        throw NoSolution(msg.str());
    }
    if (f_hi == 0.0)
        return lambda_hi;

    // J -> infinity as lambda -> 0, so halving always brackets eventually.
    // The small-amplitude limit J ~ (pi/2)/sqrt(lambda) suggests the seed.
    double lambda_lo = std::min(lambda_hi * 0.5,
                                std::numbers::pi * std::numbers::pi / (4.0 * target * target));
    double f_lo = f(lambda_lo);
    while (f_lo <= 0.0) {
        lambda_hi = lambda_lo;
        f_hi = f_lo;
        lambda_lo *= 0.25;
        if (lambda_lo < 1e-280)
            throw NonConvergence("lambda_of_xi failed to bracket the root from below");
        f_lo = f(lambda_lo);
    }
    return curvspec::detail::bracketed_root(f, lambda_lo, f_lo, lambda_hi, f_hi, tol.root);
}

} // namespace curvspec::timemap
