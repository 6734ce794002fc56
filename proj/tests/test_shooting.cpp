#include <doctest.h>

#include <cmath>

#include "curvspec/shooting.hpp"
#include "curvspec/timemap.hpp"
#include "oracles.hpp"

using namespace curvspec;
using timemap::Regime;

namespace {
constexpr double kPi2 = oracles::kPi * oracles::kPi;
}

TEST_CASE("zero initial slope gives the zero solution")
{
    const auto traj = shooting::integrate_ivp(-1.0, 2.0 * kPi2, 0.0, 1.0);
    for (const auto& s : traj.samples) {
        CHECK(s.u == 0.0);
        CHECK(s.v == 0.0);
    }
    CHECK(shooting::find_zeros(traj).empty());
}

TEST_CASE("trajectory structure invariants")
{
    const auto traj = shooting::integrate_ivp(1.0, 6.0, 0.9, 1.0);
    CHECK(traj.samples.front().x == 0.0);
    CHECK(traj.samples.front().u == 0.0);
    CHECK(traj.samples.front().v == 0.9);
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        CHECK(traj.samples[i].x > traj.samples[i - 1].x);
    CHECK(traj.x_end() == 1.0);
}

TEST_CASE("near-linear limit matches b sin(sqrt(lambda) x)/sqrt(lambda)")
{
    for (const double kappa : {1e-12, -1e-12}) {
        const auto traj = shooting::integrate_ivp(kappa, kPi2, 1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = i / 200.0;
            worst = std::max(worst,
                             std::abs(traj.u_at(x) - oracles::linear_solution(1.0, kPi2, x)));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("energy at the anchor points")
{
    CHECK(shooting::energy(1.0, 6.0, 0.0, 0.0) == doctest::Approx(-1.0));
    CHECK(shooting::energy(-3.0, 17.0, 0.0, 0.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(shooting::energy(-1.0, 6.0, 0.0, 1.5), DomainViolation);

    // E(0, b(xi)) = E(xi, 0) when b comes from the amplitude relation.
    for (const double kappa : {1.0, -1.0}) {
        const double lambda = kappa > 0 ? 6.0 : 2.0 * kPi2;
        const double xi = 0.35;
        const double b = shooting::slope_from_amplitude(kappa, lambda, xi);
        const double at_top = shooting::energy(kappa, lambda, xi, 0.0);
        const double at_zero = shooting::energy(kappa, lambda, 0.0, b);
        CHECK(at_top == doctest::Approx(at_zero).epsilon(1e-14));
    }
}

TEST_CASE("energy drift stays below 1e-9 at step_tol = 1e-11")
{
    const auto traj = shooting::integrate_ivp(1.0, 6.0, 0.9, 1.0, 1e-11);
    CHECK(shooting::max_energy_drift(traj) < 1e-9);
    const auto traj2 = shooting::integrate_ivp(-1.0, 2.0 * kPi2, 0.9, 1.0, 1e-11);
    CHECK(shooting::max_energy_drift(traj2) < 1e-9);
}

TEST_CASE("slope_from_amplitude")
{
    CHECK(shooting::slope_from_amplitude(1.0, 6.0, 0.0) == 0.0);
    CHECK(shooting::slope_from_amplitude(1.0, 6.0, oracles::kXiStarEuclid6) ==
          doctest::Approx(oracles::kSlopeEuclid6).epsilon(1e-12));
    CHECK(shooting::slope_from_amplitude(-1.0, 2.0 * kPi2, oracles::kXiStarMink2Pi2) ==
          doctest::Approx(oracles::kSlopeMink2Pi2).epsilon(1e-12));

    // Minkowski slopes stay under the light cone for any amplitude.
    for (double xi = 0.1; xi < 5.0; xi += 0.3)
        CHECK(shooting::slope_from_amplitude(-1.0, 30.0, xi) < 1.0);

    // Euclidean slope blows up toward the amplitude cap: from the closed
    // form, b = sqrt(1/c^2 - 1) with c = 1 - (xi/cap)^2, so b ~ 50 at
    // 0.99 cap and ~ 500 at 0.999 cap.
    const double cap = timemap::euclidean_xi_max(1.0, 6.0);
    CHECK(shooting::slope_from_amplitude(1.0, 6.0, 0.99 * cap) > 40.0);
    CHECK(shooting::slope_from_amplitude(1.0, 6.0, 0.999 * cap) > 400.0);
    CHECK_THROWS_AS(shooting::slope_from_amplitude(1.0, 6.0, cap * 1.01), DomainViolation);

    // Stable down to the linear limit: b -> xi sqrt(lambda).
    CHECK(shooting::slope_from_amplitude(1e-12, kPi2, 0.3) ==
          doctest::Approx(0.3 * oracles::kPi).epsilon(1e-9));
}

TEST_CASE("find_zeros on the linear limit")
{
    const double lambda = 4.0 * kPi2; // one interior zero at x = 1/2
    const auto traj = shooting::integrate_ivp(1e-12, lambda, 1.0, 1.0);
    const auto zeros = shooting::find_zeros(traj);
    REQUIRE(zeros.size() == 1);
    CHECK(std::abs(zeros[0] - 0.5) < 1e-8);
}

TEST_CASE("time-map construction closes the boundary value problem")
{
    const Regime mink = Regime::from_kappa(-1.0);
    const double lambda = 2.0 * kPi2;
    const double xi = timemap::solve_amplitude(mink, lambda, 0.5);
    const double b = shooting::slope_from_amplitude(-1.0, lambda, xi);
    const auto traj = shooting::integrate_ivp(-1.0, lambda, b, 1.0, 1e-11);
    CHECK(std::abs(traj.samples.back().u) < 1e-8);
    CHECK(shooting::find_zeros(traj).empty());
    CHECK(shooting::max_energy_drift(traj) < 1e-9);
    // amplitude reached at the midpoint
    CHECK(std::abs(traj.u_at(0.5) - xi) < 1e-8);
}

TEST_CASE("first return to zero happens at x = 2 J(lambda, xi)")
{
    const Regime mink = Regime::from_kappa(-1.0);
    const double lambda = 3.0 * kPi2;
    const double xi = 0.2; // not a boundary-value solution; J != 1/2
    const double J = timemap::time_map(mink, lambda, xi).value;
    const double b = shooting::slope_from_amplitude(-1.0, lambda, xi);
    const auto traj = shooting::integrate_ivp(-1.0, lambda, b, std::min(1.0, 2.2 * J), 1e-11);
    const auto zeros = shooting::find_zeros(traj);
    REQUIRE(!zeros.empty());
    CHECK(std::abs(zeros.front() - 2.0 * J) < 1e-7);
}

TEST_CASE("humps are symmetric about the slope zero")
{
    const auto traj = shooting::integrate_ivp(1.0, 6.0, 0.9, 1.0, 1e-11);
    // locate the first zero of v by scanning samples, then refine on u'
    double m = -1.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        if (traj.samples[i - 1].v > 0.0 && traj.samples[i].v <= 0.0) {
            double lo = traj.samples[i - 1].x, hi = traj.samples[i].x;
            for (int k = 0; k < 60; ++k) {
                const double mid = 0.5 * (lo + hi);
                (traj.v_at(mid) > 0.0 ? lo : hi) = mid;
            }
            m = 0.5 * (lo + hi);
            break;
        }
    }
    REQUIRE(m > 0.0);
    double worst = 0.0;
    const double reach = std::min(m, traj.x_end() - m);
    for (int i = 0; i <= 100; ++i) {
        const double s = reach * i / 100.0;
        worst = std::max(worst, std::abs(traj.u_at(m - s) - traj.u_at(m + s)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("Minkowski slope constraint holds strictly")
{
    const auto traj = shooting::integrate_ivp(-1.0, 20.0, 0.97, 1.0, 1e-11);
    for (const auto& s : traj.samples)
        CHECK(std::abs(s.v) < 1.0);
}

TEST_CASE("constraint and cap violations are loud")
{
    CHECK_THROWS_AS(shooting::integrate_ivp(-1.0, 20.0, 1.0 - 1e-13, 1.0),
                    ConstraintViolation);
    CHECK_THROWS_AS(shooting::integrate_ivp(1.0, 6.0, 2e6, 1.0), GradientBlowup);
    CHECK_THROWS_AS(shooting::integrate_ivp(0.0, 6.0, 0.5, 1.0), DomainViolation);
    CHECK_THROWS_AS(shooting::integrate_ivp(1.0, -6.0, 0.5, 1.0), DomainViolation);
    CHECK_THROWS_AS(shooting::integrate_ivp(1.0, 6.0, 0.5, 0.0), DomainViolation);
    CHECK_THROWS_AS(shooting::integrate_ivp(1.0, 6.0, 0.5, 1.5), DomainViolation);
}
