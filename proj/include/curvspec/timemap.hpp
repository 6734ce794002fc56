#pragma once

#include <vector>

#include "curvspec/common.hpp"

namespace curvspec::timemap {

enum class RegimeKind { Euclidean, Minkowski };

/* Curvature regime. kappa > 0 is the Euclidean-curvature operator,
 * kappa < 0 the Minkowski-curvature operator; kappa = 0 is rejected. */
struct Regime {
    RegimeKind kind;
    double kappa;

    static Regime from_kappa(double kappa);
    bool euclidean() const { return kind == RegimeKind::Euclidean; }
    bool minkowski() const { return kind == RegimeKind::Minkowski; }
};

/* One evaluation of the time map J(lambda, xi): the half-width of the
 * symmetric hump with amplitude xi at spectral parameter lambda. */
struct TimeMapEval {
    double lambda = 0.0;
    double xi = 0.0;
    double value = 0.0;
    double error_estimate = 0.0;
};

/* The constant B = integral_0^1 dtheta / sqrt(theta^-4 - 1), the quantity
 * that fixes the lower edge 8 n^2 B^2 of the Euclidean spectral interval.
 * Computed once to ~1e-13 and cached; thread-safe. */
double compute_B();

/* Largest admissible amplitude in the Euclidean regime at given lambda:
 * xi_max = sqrt(2 / (lambda * kappa)). At xi_max the hump slope diverges
 * at the endpoints. */
double euclidean_xi_max(double kappa, double lambda);

/* J(lambda, xi).
 *
 * Both regimes reduce to the same first-integral inversion: with
 * w(s) = lambda (kappa/2) (xi^2 - s^2) the hump slope satisfies
 * v(s)^2 = w (2 - w) / (kappa (1 - w)^2), and J = integral_0^xi ds / v(s),
 * an integral with an inverse-square-root singularity at s = xi.
 *
 * Preconditions: lambda > 0, xi > 0 (InvalidInput); Euclidean additionally
 * xi <= (1 - 1e-8) xi_max, beyond which the integrand loses all precision
 * in double arithmetic (DomainViolation). The exact boundary value is
 * available analytically as B sqrt(2/lambda).
 */
TimeMapEval time_map(const Regime& regime, double lambda, double xi,
                     const Tolerances& tol = {});

/* Analytic d J / d xi in the Minkowski regime,
 *     2 sqrt(-kappa) * integral_0^1 (1-a^2)^{3/2} (1-a)^2 (a + 1/2) dtheta,
 * with a(theta) = [1 - lambda (kappa/2) xi^2 (1-theta^2)]^{-1}.
 *
 * The sign of this expression is reliable; its magnitude must be validated
 * against time_map_derivative_xi_fd, which is the authoritative value.
 * Throws DomainViolation for kappa >= 0. */
double time_map_derivative_xi(const Regime& regime, double lambda, double xi,
                              const Tolerances& tol = {});

/// Central finite difference of time_map in xi (the reference derivative).
double time_map_derivative_xi_fd(const Regime& regime, double lambda, double xi,
                                 double h = 1e-6, const Tolerances& tol = {});

/* One sign-change bracket of J(lambda, .) - target found by a uniform scan
 * of the admissible amplitude range. */
struct AmplitudeBracket {
    double xi_lo, xi_hi;
    double j_lo, j_hi; // J - target at the ends
};

/* Scans scan_points amplitudes across the admissible range and returns every
 * bracket containing a root of J(lambda, xi) = target. Euclidean scans up to
 * (1 - 1e-8) xi_max; Minkowski up to target / sqrt(-kappa), above which
 * J > xi sqrt(-kappa) >= target excludes a root. */
std::vector<AmplitudeBracket> scan_amplitude_brackets(const Regime& regime,
                                                      double lambda, double target,
                                                      int scan_points = 512,
                                                      const Tolerances& tol = {});

/* Solves J(lambda, xi) = half_width_target for the amplitude xi, to
 * |J - target| <= tol.root. A 512-point scan locates the bracket first:
 * no bracket is NoSolution (the correct outcome for lambda outside the
 * spectral interval; the message reports the sign of J - target at the
 * domain boundaries), more than one bracket is MultipleRoots (uniqueness
 * failing indicates a numerical bug and must be loud). */
double solve_amplitude(const Regime& regime, double lambda,
                       double half_width_target, const Tolerances& tol = {});

/* Solves J(lambda, xi) = half_width_target for lambda at fixed xi, to
 * |J - target| <= tol.root. J is strictly decreasing in lambda with limit
 * infinity as lambda -> 0, so the root is unique when it exists. Throws
 * NoSolution if J stays above the target up to lambda_budget (Minkowski)
 * or up to the amplitude-domain cap (Euclidean). */
double lambda_of_xi(const Regime& regime, double xi, double half_width_target,
                    double lambda_budget = 1e6, const Tolerances& tol = {});

namespace detail {
/* Fault-injection hook: compute_B returns the true value plus this offset.
 * Used by the validation suite's negative control. */
void set_B_perturbation(double delta);
double B_perturbation();
} // namespace detail

} // namespace curvspec::timemap
