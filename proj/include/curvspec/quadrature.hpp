#pragma once

#include <functional>

#include "curvspec/common.hpp"

namespace curvspec::quadrature {

/* Whether the integrand behaves like C/sqrt(distance-to-endpoint) at either
 * end of (0,1). Flagged endpoints are absorbed by a polynomial change of
 * variable before any adaptive refinement. */
struct SingularityFlags {
    bool left_singular = false;
    bool right_singular = false;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

/* Integrand on the open interval (0,1). The second argument is 1 - theta
 * evaluated to full relative precision: near a right singularity theta
 * itself has absolute precision only, and expressions like 1 - theta^2 must
 * be formed as (1 - theta)(1 + theta) to keep the inverse-square-root
 * behaviour well conditioned. Integrands that do not care may ignore it. */
using Integrand = std::function<double(double theta, double one_minus_theta)>;

/* Adaptive integration of f over (0,1) to
 *     |value - integral| <= max(abs_tol, rel_tol * |value|).
 *
 * Singular endpoints are removed first: theta = 1 - w^2 (right),
 * theta = w^2 (left) or theta = w^2(3 - 2w) (both), each of which turns an
 * inverse-square-root endpoint singularity into a smooth integrand in w.
 * The transformed integrand is then integrated by globally adaptive
 * Gauss-Kronrod 7/15 panels, always bisecting the panel with the largest
 * error estimate.
 *
 * Throws InvalidInput if f returns a non-finite value at an interior node
 * (a NaN signals a domain violation upstream and must surface), and
 * NonConvergence if the tolerance is not met within max_evaluations calls.
 */
QuadratureResult integrate(const Integrand& f, SingularityFlags flags,
                           double abs_tol = 1e-12, double rel_tol = 1e-12,
                           long max_evaluations = 1000000);

} // namespace curvspec::quadrature
