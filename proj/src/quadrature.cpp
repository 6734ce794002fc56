#include "curvspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace curvspec::quadrature {

namespace {

/* 15-point Kronrod extension of 7-point Gauss, nodes on [-1,1].
 * Even indices of xgk are the Kronrod-only nodes, odd indices (plus the
 * centre) are the embedded Gauss nodes. Constants from the usual QK15 pair. */
constexpr double xgk[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
constexpr double wgk[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
constexpr double wg[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

struct Panel {
    double a, b;       // subinterval of the transformed variable
    double value;      // K15 estimate
    double error;      // QUADPACK-style error estimate
    bool operator<(const Panel& other) const { return error < other.error; }
};

/* Transformed integrand: g(w) with w in [0,1], plus the evaluation counter
 * and non-finite guard shared by every panel. */
class Transformed {
public:
    Transformed(const Integrand& f, SingularityFlags flags, long budget)
        : f_(f), flags_(flags), budget_(budget) {}

    double operator()(double w)
    {
        if (++evaluations_ > budget_)
            over_budget_ = true;
        double theta, one_minus_theta, weight;
        if (flags_.left_singular && flags_.right_singular) {
            // theta = w^2 (3 - 2w): quadratic contact at both endpoints.
            theta = w * w * (3.0 - 2.0 * w);
            one_minus_theta = (1.0 - w) * (1.0 - w) * (1.0 + 2.0 * w);
            weight = 6.0 * w * (1.0 - w);
        } else if (flags_.right_singular) {
            theta = 1.0 - w * w;
            one_minus_theta = w * w;
            weight = 2.0 * w;
        } else if (flags_.left_singular) {
            theta = w * w;
            one_minus_theta = (1.0 - w) * (1.0 + w);
            weight = 2.0 * w;
        } else {
            theta = w;
            one_minus_theta = 1.0 - w;
            weight = 1.0;
        }
        const double value = f_(theta, one_minus_theta) * weight;
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg << "integrand returned a non-finite value at theta = " << theta;
            throw InvalidInput(msg.str());
        }
        return value;
    }

    long evaluations() const { return evaluations_; }
    bool over_budget() const { return over_budget_; }

private:
    const Integrand& f_;
    SingularityFlags flags_;
    long budget_;
    long evaluations_ = 0;
    bool over_budget_ = false;
};

Panel gauss_kronrod(Transformed& g, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    const double fc = g(center);
    double resk = wgk[7] * fc;
    double resg = wg[3] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double lo = g(center - half * xgk[j]);
        const double hi = g(center + half * xgk[j]);
        fv[j] = lo;
        fv[14 - j] = hi;
        resk += wgk[j] * (lo + hi);
        if (j % 2 == 1)
            resg += wg[j / 2] * (lo + hi);
        resabs += wgk[j] * (std::abs(lo) + std::abs(hi));
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

    Panel panel;
    panel.a = a;
    panel.b = b;
    panel.value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double tiny = std::numeric_limits<double>::min();
    if (resabs > tiny / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);
    panel.error = err;
    return panel;
}

} // namespace

QuadratureResult integrate(const Integrand& f, SingularityFlags flags,
                           double abs_tol, double rel_tol, long max_evaluations)
{
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw InvalidInput("quadrature tolerances must be positive");
    if (max_evaluations <= 0)
        throw InvalidInput("quadrature evaluation budget must be positive");

    Transformed g(f, flags, max_evaluations);

    // Four seed panels so a symmetric integrand cannot alias a single rule.
    constexpr int kSeedPanels = 4;
    std::priority_queue<Panel> panels;
    double total = 0.0;
    double total_err = 0.0;
    for (int i = 0; i < kSeedPanels; ++i) {
        Panel p = gauss_kronrod(g, i / double(kSeedPanels), (i + 1) / double(kSeedPanels));
        total += p.value;
        total_err += p.error;
        panels.push(p);
    }

    const double min_width = 4.0 * std::numeric_limits<double>::epsilon();
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (g.over_budget() || panels.empty())
            break;
        Panel worst = panels.top();
        if (worst.b - worst.a < min_width)
            break; // cannot subdivide further in double precision
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = gauss_kronrod(g, worst.a, mid);
        Panel right = gauss_kronrod(g, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    if (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        std::ostringstream msg;
        msg << "quadrature did not reach tolerance (error estimate " << total_err
            << ", target " << std::max(abs_tol, rel_tol * std::abs(total))
            << ") within " << g.evaluations() << " evaluations";
        throw NonConvergence(msg.str());
    }
    if (!std::isfinite(total))
        throw InvalidInput("quadrature accumulated a non-finite value");

    QuadratureResult result;
    result.value = total;
    result.error_estimate = total_err;
    result.evaluations = g.evaluations();
    return result;
}

} // namespace curvspec::quadrature
