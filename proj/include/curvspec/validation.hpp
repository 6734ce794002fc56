#pragma once

#include <string>
#include <vector>

#include "curvspec/common.hpp"

namespace curvspec::validation {

struct Options {
    bool fast = false;            // reduced suite, seconds instead of minutes
    double B_perturbation = 0.0;  // fault injection: offsets the cached B
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Report {
    std::vector<CheckResult> checks;
    bool all_pass() const;
    double total_seconds() const;
};

/* Runs the quantitative validation suite: spectral-interval existence and
 * non-existence, uniqueness scans, time-map/shooting cross-validation,
 * symmetry and scaling identities, branch monotonicity, endpoint
 * asymptotics, small-amplitude bifurcation values, time-map monotonicity
 * with the analytic-vs-finite-difference derivative comparison, and the
 * near-linear limit against the explicit eigenfunctions. */
Report run(const Options& opts = {});

std::string report_to_json(const Report& report, const Options& opts);

} // namespace curvspec::validation
