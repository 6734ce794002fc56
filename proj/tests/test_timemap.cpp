#include <doctest.h>

#include <cmath>
#include <tuple>
#include <vector>

#include "curvspec/quadrature.hpp"
#include "curvspec/timemap.hpp"
#include "oracles.hpp"

using namespace curvspec;
using timemap::Regime;

namespace {
const Regime kEuclid = Regime::from_kappa(1.0);
const Regime kMink = Regime::from_kappa(-1.0);
constexpr double kPi2 = oracles::kPi * oracles::kPi;
} // namespace

TEST_CASE("regime construction")
{
    CHECK(Regime::from_kappa(2.5).euclidean());
    CHECK(Regime::from_kappa(-0.5).minkowski());
    CHECK_THROWS_AS(Regime::from_kappa(0.0), InvalidInput);
}

TEST_CASE("B against all three oracles")
{
    const double B = timemap::compute_B();
    CHECK(std::abs(B - oracles::kB) < 1e-12);
    CHECK(std::abs(B - oracles::B_gamma()) < 1e-12);
    CHECK(std::abs(B - oracles::B_midpoint()) < 1e-10);
    CHECK(std::abs(8.0 * B * B - oracles::k8B2) < 1e-11);
}

TEST_CASE("B perturbation hook is additive and reversible")
{
    const double base = timemap::compute_B();
    timemap::detail::set_B_perturbation(1e-3);
    CHECK(timemap::compute_B() == doctest::Approx(base + 1e-3).epsilon(1e-14));
    timemap::detail::set_B_perturbation(0.0);
    CHECK(timemap::compute_B() == base);
}

TEST_CASE("small-amplitude limit J -> (pi/2)/sqrt(lambda)")
{
    const auto J = timemap::time_map(kMink, kPi2, 1e-5);
    CHECK(std::abs(J.value - 0.5) < 1e-6);
    const auto Je = timemap::time_map(kEuclid, kPi2, 1e-5);
    CHECK(std::abs(Je.value - 0.5) < 1e-6);
}

TEST_CASE("Euclidean boundary identity J(lambda, xi_max) = B sqrt(2/lambda)")
{
    const double B = timemap::compute_B();
    for (const double lambda : {4.0, 6.0, 9.0}) {
        const double xi = (1.0 - 1e-8) * timemap::euclidean_xi_max(1.0, lambda);
        const auto J = timemap::time_map(kEuclid, lambda, xi);
        CHECK(std::abs(J.value - B * std::sqrt(2.0 / lambda)) < 1e-4);
    }
    // at lambda = 8B^2 the boundary value is exactly 1/2
    const double xi = (1.0 - 1e-8) * timemap::euclidean_xi_max(1.0, oracles::k8B2);
    CHECK(std::abs(timemap::time_map(kEuclid, oracles::k8B2, xi).value - 0.5) < 1e-4);
}

TEST_CASE("time map computed two ways: singular substitution vs smooth parametrisation")
{
    // Route 1: the flagged singular quadrature inside time_map. Route 2: the
    // arclength form J = sqrt(2/lambda) int_0^{pi/2} (1-w)/sqrt(2-w) dtau,
    // integrated as an ordinary smooth integrand with no singular flags.
    for (const auto& [kappa, lambda, xi] : std::vector<std::tuple<double, double, double>>{
             {-1.0, 2.0 * kPi2, 0.35}, {-1.0, 2.0 * kPi2, 0.1}, {1.0, 6.0, 0.4}}) {
        const double route1 = timemap::time_map(Regime::from_kappa(kappa), lambda, xi).value;
        const double k = kappa, l = lambda, x = xi;
        const auto smooth = quadrature::integrate(
            [k, l, x](double theta, double) {
                const double tau = 0.5 * oracles::kPi * theta;
                const double c = std::cos(tau);
                const double w = 0.5 * l * k * x * x * c * c;
                return (1.0 - w) / std::sqrt(2.0 - w);
            },
            {}, 1e-13, 1e-13);
        const double route2 = std::sqrt(2.0 / lambda) * 0.5 * oracles::kPi * smooth.value;
        CHECK(std::abs(route1 - route2) < 1e-10);
    }
}

TEST_CASE("Minkowski J at (2 pi^2, 0.35): library vs midpoint oracle vs frozen value")
{
    const auto J = timemap::time_map(kMink, 2.0 * kPi2, 0.35);
    CHECK(std::abs(J.value - oracles::kJ_TwoPi2_035) < 1e-10);
    CHECK(std::abs(J.value - oracles::time_map_midpoint(-1.0, 2.0 * kPi2, 0.35)) < 1e-9);
    CHECK(J.error_estimate < 1e-10);
}

TEST_CASE("J is decreasing in lambda in both regimes")
{
    for (const auto& [regime, xi] : std::vector<std::pair<Regime, double>>{
             {kMink, 0.3}, {kEuclid, 0.3}}) {
        double prev = 1e300;
        for (double lambda = 4.0; lambda <= 9.0; lambda += 1.0) {
            const double J = timemap::time_map(regime, lambda, xi).value;
            CHECK(J < prev);
            prev = J;
        }
    }
}

TEST_CASE("Minkowski J is increasing in xi")
{
    double prev = 0.0;
    for (double xi = 0.05; xi < 0.5; xi += 0.05) {
        const double J = timemap::time_map(kMink, 2.0 * kPi2, xi).value;
        CHECK(J > prev);
        prev = J;
    }
}

TEST_CASE("small-amplitude gap quarters when xi halves")
{
    const double lambda = 2.0 * kPi2;
    const double limit = 0.5 * oracles::kPi / std::sqrt(lambda);
    const double gap1 = std::abs(timemap::time_map(kMink, lambda, 0.02).value - limit);
    const double gap2 = std::abs(timemap::time_map(kMink, lambda, 0.01).value - limit);
    CHECK(gap1 / gap2 > 3.7);
    CHECK(gap1 / gap2 < 4.3);
}

TEST_CASE("time_map input validation")
{
    CHECK_THROWS_AS(timemap::time_map(kMink, -1.0, 0.1), InvalidInput);
    CHECK_THROWS_AS(timemap::time_map(kMink, kPi2, 0.0), InvalidInput);
    CHECK_THROWS_AS(
        timemap::time_map(kEuclid, 6.0, timemap::euclidean_xi_max(1.0, 6.0) * 1.0001),
        DomainViolation);
}

TEST_CASE("solve_amplitude outside the spectral interval")
{
    // kappa=-1: no solution below pi^2
    CHECK_THROWS_AS(timemap::solve_amplitude(kMink, 9.0, 0.5), NoSolution);
    // kappa=+1: no solution below 8B^2 ~ 2.871
    CHECK_THROWS_AS(timemap::solve_amplitude(kEuclid, 2.0, 0.5), NoSolution);
    // kappa=+1: no solution above pi^2; J < 1/2 across the whole domain
    CHECK_THROWS_AS(timemap::solve_amplitude(kEuclid, 11.0, 0.5), NoSolution);
    double max_J = 0.0;
    const double cap = (1.0 - 1e-8) * timemap::euclidean_xi_max(1.0, 11.0);
    for (int k = 1; k <= 64; ++k)
        max_J = std::max(max_J, timemap::time_map(kEuclid, 11.0, cap * k / 64.0).value);
    CHECK(max_J < 0.5);
}

TEST_CASE("solve_amplitude against the naive oracle, Euclidean lambda = 6")
{
    const double xi = timemap::solve_amplitude(kEuclid, 6.0, 0.5);
    CHECK(xi > 0.0);
    CHECK(xi < timemap::euclidean_xi_max(1.0, 6.0));
    CHECK(std::abs(timemap::time_map(kEuclid, 6.0, xi).value - 0.5) <= 1e-10);
    CHECK(std::abs(xi - oracles::kXiStarEuclid6) < 1e-8);
    const double oracle = oracles::naive_root(
        [](double x) { return timemap::time_map(kEuclid, 6.0, x).value - 0.5; }, 1e-4,
        (1.0 - 1e-8) * timemap::euclidean_xi_max(1.0, 6.0));
    CHECK(std::abs(xi - oracle) < 1e-8);
}

TEST_CASE("solve_amplitude against the naive oracle, Minkowski lambda = 2 pi^2")
{
    const double xi = timemap::solve_amplitude(kMink, 2.0 * kPi2, 0.5);
    CHECK(xi > 0.0);
    CHECK(xi < 0.5); // amplitude bound 1/(2 sqrt(-kappa))
    CHECK(std::abs(xi - oracles::kXiStarMink2Pi2) < 1e-8);
    const double oracle = oracles::naive_root(
        [](double x) { return timemap::time_map(kMink, 2.0 * kPi2, x).value - 0.5; },
        1e-4, 0.499999);
    CHECK(std::abs(xi - oracle) < 1e-8);
}

TEST_CASE("scan finds exactly one bracket inside the interval")
{
    CHECK(timemap::scan_amplitude_brackets(kEuclid, 6.0, 0.5).size() == 1);
    CHECK(timemap::scan_amplitude_brackets(kMink, 2.0 * kPi2, 0.5).size() == 1);
}

TEST_CASE("lambda_of_xi: small-amplitude bifurcation value")
{
    const double lm = timemap::lambda_of_xi(kMink, 1e-4, 0.5);
    CHECK(std::abs(lm - kPi2) < 1e-3);
    const double le = timemap::lambda_of_xi(kEuclid, 1e-4, 0.5);
    CHECK(std::abs(le - kPi2) < 1e-3);
    // sub-critical vs super-critical bifurcation
    CHECK(le < kPi2);
    CHECK(lm > kPi2);
}

TEST_CASE("lambda_of_xi is strictly increasing in xi (Minkowski)")
{
    double prev = 0.0;
    for (double xi = 0.05; xi <= 0.451; xi += 0.05) {
        const double lambda = timemap::lambda_of_xi(kMink, xi, 0.5);
        CHECK(lambda > prev);
        CHECK(lambda > kPi2);
        prev = lambda;
    }
}

TEST_CASE("lambda_of_xi approaches 8B^2 at the Euclidean amplitude limit")
{
    const double lambda = timemap::lambda_of_xi(kEuclid, (1.0 - 1e-3) * oracles::kInvTwoB, 0.5);
    CHECK(lambda > oracles::k8B2);
    CHECK(std::abs(lambda - oracles::k8B2) < 0.05);
}

TEST_CASE("solve_amplitude inverts lambda_of_xi")
{
    for (const auto& [regime, xi] : std::vector<std::pair<Regime, double>>{
             {kMink, 0.2}, {kMink, 0.4}, {kEuclid, 0.3}, {kEuclid, 0.7}}) {
        const double lambda = timemap::lambda_of_xi(regime, xi, 0.5);
        const double back = timemap::solve_amplitude(regime, lambda, 0.5);
        CHECK(std::abs(back - xi) < 1e-8);
    }
}

TEST_CASE("lambda_of_xi refuses amplitudes beyond the reachable range")
{
    // Minkowski: J >= xi sqrt(-kappa) > 1/2 for xi > 1/2 at kappa = -1.
    CHECK_THROWS_AS(timemap::lambda_of_xi(kMink, 0.6, 0.5), NoSolution);
    // Euclidean: J >= B sqrt(kappa) xi > 1/2 beyond 1/(2B).
    CHECK_THROWS_AS(timemap::lambda_of_xi(kEuclid, oracles::kInvTwoB * 1.01, 0.5), NoSolution);
}

TEST_CASE("analytic xi-derivative: sign and small-amplitude behaviour")
{
    const double lambda = 2.0 * kPi2;
    const double analytic = timemap::time_map_derivative_xi(kMink, lambda, 0.2);
    const double fd = timemap::time_map_derivative_xi_fd(kMink, lambda, 0.2);
    CHECK(analytic > 0.0);
    CHECK(fd > 0.0);
    // The finite difference is the authoritative derivative; the analytic
    // integrand is transcribed as printed and is expected to differ in
    // magnitude. Record the ratio so the discrepancy is visible in the log.
    MESSAGE("analytic/fd derivative ratio at (2 pi^2, 0.2): ", analytic / fd);

    // d J/d xi -> 0 as xi -> 0, consistent with J - (pi/2)/sqrt(lambda) = O(xi^2):
    // the quadratic-gap coefficient from J itself predicts the derivative.
    const double limit = 0.5 * oracles::kPi / std::sqrt(lambda);
    const double coeff = (timemap::time_map(kMink, lambda, 0.01).value - limit) / (0.01 * 0.01);
    const double fd_small = timemap::time_map_derivative_xi_fd(kMink, lambda, 1e-3);
    CHECK(std::abs(fd_small - 2.0 * coeff * 1e-3) < 0.15 * std::abs(2.0 * coeff * 1e-3));
    const double analytic_small = timemap::time_map_derivative_xi(kMink, lambda, 1e-3);
    CHECK(analytic_small > 0.0);
    CHECK(analytic_small < fd_small); // the as-printed integrand vanishes faster
}

TEST_CASE("derivative argument validation")
{
    CHECK_THROWS_AS(timemap::time_map_derivative_xi(kEuclid, 6.0, 0.2), DomainViolation);
    CHECK_THROWS_AS(timemap::time_map_derivative_xi_fd(kMink, 2.0 * kPi2, 0.2, 0.3),
                    InvalidInput);
}
