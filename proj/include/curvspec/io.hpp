#pragma once

#include <string>

#include "curvspec/common.hpp"
#include "curvspec/spectrum.hpp"

namespace curvspec::io {

enum class Format { Csv, Json };

Format format_from_string(const std::string& name);
std::string extension(Format format);

/// Floats are serialised with 17 significant digits so files diff cleanly
/// and parse back to the identical double.
std::string format_double(double value);

std::string profile_to_csv(const spectrum::NodalSolution& sol, double residual_shoot,
                           const Tolerances& tol);
std::string profile_to_json(const spectrum::NodalSolution& sol, double residual_shoot,
                            const Tolerances& tol);

struct BranchFile {
    double kappa = 0.0;
    int n = 1;
    int nu = +1;
    std::vector<spectrum::BranchPoint> points;
    std::vector<double> residual_shoot; // same order as points
};

std::string branch_to_csv(const BranchFile& branch, const Tolerances& tol);
std::string branch_to_json(const BranchFile& branch, const Tolerances& tol);

/* Parsed profile file: the grid plus the metadata needed to re-check the
 * solution invariants. */
struct ProfileData {
    double kappa = 0.0;
    double lambda = 0.0;
    int n = 1;
    int nu = +1;
    double xi = 0.0;
    double b = 0.0;
    std::vector<double> x, u;
};

ProfileData read_profile(const std::string& path);
BranchFile read_branch(const std::string& path);

void write_file(const std::string& path, const std::string& contents);

} // namespace curvspec::io
