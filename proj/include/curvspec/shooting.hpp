#pragma once

#include <vector>

#include "curvspec/common.hpp"

namespace curvspec::shooting {

/* Initial value problem integrated here, in first-order form:
 *     u' = v,   v' = -lambda u (1 + kappa v^2)^{3/2},
 *     u(0) = 0, v(0) = b.
 * This is the explicit recast of -(u'/sqrt(1 + kappa u'^2))' = lambda u. */

struct Sample {
    double x, u, v;
};

struct Trajectory {
    std::vector<Sample> samples; // accepted steps, x strictly increasing
    std::vector<double> accel;   // v' at each sample, for dense v output
    double lambda = 0.0;
    double kappa = 0.0;
    double b = 0.0; // initial slope u'(0)

    /// Dense output: cubic Hermite for u between accepted steps.
    double u_at(double x) const;
    /// Dense output for v = u'.
    double v_at(double x) const;
    double x_end() const { return samples.back().x; }
};

/* Integrates the IVP to x_end with an embedded Dormand-Prince 5(4) pair and
 * PI step control; every accepted step has local error <= step_tol.
 *
 * Errors: DomainViolation on bad arguments (kappa = 0, lambda <= 0, x_end
 * outside (0,1], Minkowski |b| >= 1/sqrt(-kappa)); GradientBlowup if the
 * Euclidean slope exceeds gradient_cap (the singular-branch regime, where
 * integration must stop); ConstraintViolation if a Minkowski slope reaches
 * the light-cone bound to within 1e-12 relative; StepUnderflow if the
 * controller stalls. */
Trajectory integrate_ivp(double kappa, double lambda, double b, double x_end,
                         double step_tol = 1e-11, double gradient_cap = 1e6);

/* First integral E = lambda (kappa/2) u^2 - 1/sqrt(1 + kappa v^2),
 * constant along exact trajectories. DomainViolation if 1 + kappa v^2 <= 0. */
double energy(double kappa, double lambda, double u, double v);

/// Max |E(x_i) - E(0)| over the trajectory samples.
double max_energy_drift(const Trajectory& traj);

/* The nonnegative slope b whose trajectory has hump amplitude xi:
 * from the first integral, b = xi sqrt(lambda (1 + c) / 2) / c with
 * c = 1 - lambda (kappa/2) xi^2 (a form stable for kappa of either sign
 * and for |kappa| down to the linear limit). Euclidean requires c > 0. */
double slope_from_amplitude(double kappa, double lambda, double xi);

/* All interior zero crossings of u, refined by bisection on the dense output
 * to 1e-12 in x. Crossings within edge_exclusion * span of either end are
 * attributed to the boundary and dropped (a nodal trajectory re-hits zero at
 * x_end only up to the shooting residual, which must not count as an
 * interior zero). Throws DegenerateZero if |u| and |v| are simultaneously
 * below 1e-10 at a reported zero: zeros of nontrivial solutions are simple,
 * so that signals integrator failure. */
std::vector<double> find_zeros(const Trajectory& traj, double edge_exclusion = 1e-5);

} // namespace curvspec::shooting
