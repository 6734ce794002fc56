#include "curvspec/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace curvspec::shooting {

namespace {

struct State {
    double u, v;
};

/* Right-hand side of the first-order system. Returns NaN components when a
 * Minkowski trial state oversteps the light cone (1 + kappa v^2 < 0); the
 * step controller treats that as a rejected step. */
inline State rhs(double kappa, double lambda, const State& y)
{
    const double q = 1.0 + kappa * y.v * y.v;
    const double factor = q > 0.0 ? q * std::sqrt(q) : std::numeric_limits<double>::quiet_NaN();
    return State{y.v, -lambda * y.u * factor};
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0, e3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                 e4 = 125.0 / 192.0 - 393.0 / 640.0, e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
                 e6 = 11.0 / 84.0 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

/* Hermite cubic for f on [x0, x1] given endpoint values and derivatives. */
inline double hermite(double x, double x0, double x1, double f0, double f1,
                      double d0, double d1)
{
    const double h = x1 - x0;
    const double s = (x - x0) / h;
    const double s2 = s * s;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s2 * (3.0 - 2.0 * s);
    const double h11 = s2 * (s - 1.0);
    return h00 * f0 + h * h10 * d0 + h01 * f1 + h * h11 * d1;
}

std::size_t locate_interval(const std::vector<Sample>& samples, double x)
{
    auto it = std::upper_bound(samples.begin(), samples.end(), x,
                               [](double value, const Sample& s) { return value < s.x; });
    std::size_t idx = static_cast<std::size_t>(it - samples.begin());
    if (idx == 0)
        return 0;
    if (idx >= samples.size())
        return samples.size() - 2;
    return idx - 1;
}

} // namespace

double Trajectory::u_at(double x) const
{
    const std::size_t i = locate_interval(samples, x);
    const Sample& s0 = samples[i];
    const Sample& s1 = samples[i + 1];
    return hermite(x, s0.x, s1.x, s0.u, s1.u, s0.v, s1.v);
}

double Trajectory::v_at(double x) const
{
    const std::size_t i = locate_interval(samples, x);
    const Sample& s0 = samples[i];
    const Sample& s1 = samples[i + 1];
    return hermite(x, s0.x, s1.x, s0.v, s1.v, accel[i], accel[i + 1]);
}

double energy(double kappa, double lambda, double u, double v)
{
    const double q = 1.0 + kappa * v * v;
    if (!(q > 0.0))
        throw DomainViolation("energy: 1 + kappa v^2 must be positive");
    return 0.5 * lambda * kappa * u * u - 1.0 / std::sqrt(q);
}

double max_energy_drift(const Trajectory& traj)
{
    const double e0 = energy(traj.kappa, traj.lambda, 0.0, traj.b);
    double drift = 0.0;
    for (const Sample& s : traj.samples)
        drift = std::max(drift, std::abs(energy(traj.kappa, traj.lambda, s.u, s.v) - e0));
    return drift;
}

double slope_from_amplitude(double kappa, double lambda, double xi)
{
    if (kappa == 0.0 || !(lambda > 0.0) || xi < 0.0)
        throw InvalidInput("slope_from_amplitude requires kappa != 0, lambda > 0, xi >= 0");
    const double c = 1.0 - 0.5 * lambda * kappa * xi * xi;
    if (kappa > 0.0 && !(c > 0.0))
        throw DomainViolation("Euclidean amplitude beyond sqrt(2/(lambda kappa))");
    return std::sqrt(0.5 * lambda * xi * xi * (1.0 + c)) / c;
}

Trajectory integrate_ivp(double kappa, double lambda, double b, double x_end,
                         double step_tol, double gradient_cap)
{
    if (kappa == 0.0 || !std::isfinite(kappa))
        throw DomainViolation("integrate_ivp requires kappa != 0");
    if (!(lambda > 0.0))
        throw DomainViolation("integrate_ivp requires lambda > 0");
    if (!(x_end > 0.0) || x_end > 1.0)
        throw DomainViolation("integrate_ivp requires x_end in (0, 1]");
    if (!(step_tol > 0.0))
        throw InvalidInput("step_tol must be positive");
    const double slope_bound = kappa < 0.0 ? 1.0 / std::sqrt(-kappa)
                                           : std::numeric_limits<double>::infinity();
    if (kappa < 0.0 && std::abs(b) >= slope_bound * (1.0 - 1e-12))
        throw ConstraintViolation("initial slope at the Minkowski light-cone bound");
    if (kappa > 0.0 && std::abs(b) >= gradient_cap)
        throw GradientBlowup("initial slope at or beyond the gradient cap");

    // The controller aims at a small fraction of step_tol per step so the
    // accumulated drift over ~10^3 steps stays on the step_tol scale.
    const double tol = step_tol * 0.02;

    Trajectory traj;
    traj.lambda = lambda;
    traj.kappa = kappa;
    traj.b = b;

    State y{0.0, b};
    double x = 0.0;
    State k1 = rhs(kappa, lambda, y);
    traj.samples.push_back({x, y.u, y.v});
    traj.accel.push_back(k1.v);

    // Initial step from the scale of y' (Euler trial refinement is not
    // needed at these tolerances; the controller corrects within a step).
    const double scale0 = std::max({std::abs(b), std::abs(k1.v), 1.0});
    double h = std::min(x_end, 0.1 * std::pow(tol, 0.2) / scale0);
    h = std::max(h, 1e-10);

    double err_prev = 1.0;
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * x_end;
    int rejected_in_row = 0;

    while (x < x_end) {
        if (h < h_min)
            throw StepUnderflow("step size underflow in integrate_ivp");
        if (x + h > x_end)
            h = x_end - x;

        const State k2 = rhs(kappa, lambda, State{y.u + h * a21 * k1.u, y.v + h * a21 * k1.v});
        const State k3 = rhs(kappa, lambda,
                             State{y.u + h * (a31 * k1.u + a32 * k2.u),
                                   y.v + h * (a31 * k1.v + a32 * k2.v)});
        const State k4 = rhs(kappa, lambda,
                             State{y.u + h * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
                                   y.v + h * (a41 * k1.v + a42 * k2.v + a43 * k3.v)});
        const State k5 = rhs(kappa, lambda,
                             State{y.u + h * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
                                   y.v + h * (a51 * k1.v + a52 * k2.v + a53 * k3.v + a54 * k4.v)});
        const State k6 = rhs(kappa, lambda,
                             State{y.u + h * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u +
                                              a65 * k5.u),
                                   y.v + h * (a61 * k1.v + a62 * k2.v + a63 * k3.v + a64 * k4.v +
                                              a65 * k5.v)});
        const State y_new{
            y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
            y.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v)};
        const State k7 = rhs(kappa, lambda, y_new); // FSAL

        const double eu = h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u +
                               e7 * k7.u);
        const double ev = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v +
                               e7 * k7.v);
        const double sc_u = tol + tol * std::max(std::abs(y.u), std::abs(y_new.u));
        const double sc_v = tol + tol * std::max(std::abs(y.v), std::abs(y_new.v));
        const double err = std::sqrt(0.5 * ((eu / sc_u) * (eu / sc_u) + (ev / sc_v) * (ev / sc_v)));

        if (!std::isfinite(err) || err > 1.0) {
            // rejected: shrink and retry
            const double factor = std::isfinite(err)
                                      ? std::max(0.2, 0.9 * std::pow(err, -0.2))
                                      : 0.2;
            h *= factor;
            if (++rejected_in_row > 60)
                throw StepUnderflow("step controller stalled in integrate_ivp");
            continue;
        }
        rejected_in_row = 0;

        x += h;
        y = y_new;
        k1 = k7;
        traj.samples.push_back({x, y.u, y.v});
        traj.accel.push_back(k7.v);

        if (kappa < 0.0 && std::abs(y.v) >= slope_bound * (1.0 - 1e-12))
            throw ConstraintViolation("Minkowski slope reached the light-cone bound");
        if (kappa > 0.0 && std::abs(y.v) > gradient_cap) {
            std::ostringstream msg;
            msg << "Euclidean slope " << y.v << " exceeded the gradient cap at x = " << x;
            throw GradientBlowup(msg.str());
        }

        // PI step control (Hairer's beta = 0.04).
        const double safe_err = std::max(err, 1e-10);
        double factor = 0.9 * std::pow(safe_err, -0.17) * std::pow(err_prev, 0.04);
        factor = std::clamp(factor, 0.2, 10.0);
        h *= factor;
        err_prev = safe_err;
    }

    return traj;
}

std::vector<double> find_zeros(const Trajectory& traj, double edge_exclusion)
{
    const auto& samples = traj.samples;
    const double x0 = samples.front().x;
    const double x1 = samples.back().x;
    const double margin = edge_exclusion * (x1 - x0);

    std::vector<double> zeros;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const Sample& s0 = samples[i];
        const Sample& s1 = samples[i + 1];
        const bool crossing = (s0.u > 0.0 && s1.u < 0.0) || (s0.u < 0.0 && s1.u > 0.0) ||
                              (s1.u == 0.0 && s0.u != 0.0 && i + 2 < samples.size());
        if (!crossing)
            continue;
        // bisection on the Hermite dense output
        double lo = s0.x, hi = s1.x;
        double f_lo = s0.u;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = traj.u_at(mid);
            if (f_mid == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((f_mid > 0.0) == (f_lo > 0.0)) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        const double z = 0.5 * (lo + hi);
        if (z <= x0 + margin || z >= x1 - margin)
            continue;
        if (std::abs(traj.u_at(z)) < 1e-10 && std::abs(traj.v_at(z)) < 1e-10)
            throw DegenerateZero("simultaneous zero of u and u' located; zeros must be simple");
        zeros.push_back(z);
    }
    return zeros;
}

} // namespace curvspec::shooting
