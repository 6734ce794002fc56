#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvspec/io.hpp"
#include "curvspec/quadrature.hpp"
#include "curvspec/shooting.hpp"
#include "curvspec/spectrum.hpp"
#include "curvspec/timemap.hpp"
#include "curvspec/validation.hpp"

namespace {

using namespace curvspec;

constexpr int kExitOk = 0;
constexpr int kExitNumericalFailure = 1;
constexpr int kExitNoSolution = 2;
constexpr int kExitValidationFailure = 3;

struct CommonArgs {
    double kappa = 1.0;
    int n = 1;
    std::string nu = "+";
    std::string out;
    std::string format; // empty: infer from the output extension, default csv
    Tolerances tol;
};

/* The format fixes the file extension: an explicit --format must agree with
 * the path's extension and is appended when the path has none; without
 * --format the extension decides, defaulting to CSV. */
io::Format resolve_format(CommonArgs& args)
{
    std::string path_ext;
    if (args.out.size() >= 4 && args.out.substr(args.out.size() - 4) == ".csv")
        path_ext = "csv";
    else if (args.out.size() >= 5 && args.out.substr(args.out.size() - 5) == ".json")
        path_ext = "json";

    std::string format = args.format.empty() ? (path_ext.empty() ? "csv" : path_ext)
                                             : args.format;
    const io::Format resolved = io::format_from_string(format);
    if (!args.format.empty() && !path_ext.empty() && path_ext != format)
        throw InvalidInput("--format " + format + " conflicts with the extension of " +
                           args.out);
    if (!args.out.empty() && path_ext.empty())
        args.out += io::extension(resolved);
    return resolved;
}

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol)
{
    cmd->add_option("--quad-tol", tol.quad_abs, "quadrature tolerance (absolute and relative)");
    cmd->add_option("--root-tol", tol.root, "root-solve residual tolerance on J");
    cmd->add_option("--step-tol", tol.step, "ODE local error tolerance");
}

int nu_value(const std::string& nu)
{
    if (nu == "+")
        return +1;
    if (nu == "-")
        return -1;
    throw InvalidInput("--nu must be '+' or '-'");
}

/* Effective quadrature tolerances: --quad-tol sets both absolute and
 * relative. */
Tolerances effective(const Tolerances& tol)
{
    Tolerances t = tol;
    t.quad_rel = t.quad_abs;
    return t;
}

int cmd_constants()
{
    const auto B_quad = quadrature::integrate(
        [](double theta, double one_minus_theta) {
            const double q = one_minus_theta * (1.0 + theta) * (1.0 + theta * theta);
            return theta * theta / std::sqrt(q);
        },
        {.right_singular = true}, 1e-13, 1e-13);
    const double B = timemap::compute_B();
    const double pi2 = std::numbers::pi * std::numbers::pi;
    std::printf("B      = %.12f  (quadrature error estimate %.1e)\n", B, B_quad.error_estimate);
    std::printf("8 B^2  = %.12f  (error estimate %.1e)\n", 8.0 * B * B,
                16.0 * B * B_quad.error_estimate);
    std::printf("pi^2   = %.12f\n", pi2);
    return kExitOk;
}

int cmd_interval(const CommonArgs& args)
{
    const auto interval = spectrum::spectrum_interval(args.kappa, args.n);
    if (interval.unbounded)
        std::printf("lambda interval for kappa=%g, n=%d: (%.12f, inf)\n", args.kappa, args.n,
                    interval.lambda_min);
    else
        std::printf("lambda interval for kappa=%g, n=%d: (%.12f, %.12f)\n", args.kappa, args.n,
                    interval.lambda_min, interval.lambda_max);
    return kExitOk;
}

double shooting_residual(const spectrum::NodalSolution& sol, const Tolerances& tol)
{
    const auto traj = shooting::integrate_ivp(sol.kappa, sol.lambda, sol.boundary_slope, 1.0,
                                              tol.step);
    return std::abs(traj.samples.back().u);
}

int cmd_solve(CommonArgs& args, double lambda)
{
    const Tolerances tol = effective(args.tol);
    const auto format = resolve_format(args);
    const auto sol = spectrum::solve_nodal(args.kappa, lambda,
                                           {args.n, nu_value(args.nu)}, 1024, tol);
    const double residual_shoot = shooting_residual(sol, tol);
    const std::string text = format == io::Format::Csv
                                 ? io::profile_to_csv(sol, residual_shoot, tol)
                                 : io::profile_to_json(sol, residual_shoot, tol);
    if (args.out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        io::write_file(args.out, text);
        std::fprintf(stderr, "wrote %zu samples to %s (residual_J=%.3e, residual_shoot=%.3e)\n",
                     sol.x.size(), args.out.c_str(), sol.residual_J, residual_shoot);
    }
    return kExitOk;
}

int cmd_branch(CommonArgs& args, double xi_min, double xi_max, int xi_count)
{
    if (xi_count < 2)
        throw InvalidInput("--xi-count must be at least 2");
    const Tolerances tol = effective(args.tol);
    const auto format = resolve_format(args);
    std::vector<double> grid(xi_count);
    for (int i = 0; i < xi_count; ++i)
        grid[i] = xi_min + (xi_max - xi_min) * i / (xi_count - 1);

    const auto branch = spectrum::trace_branch(args.kappa, {args.n, nu_value(args.nu)},
                                               grid, tol);
    for (const auto& skip : branch.skipped)
        std::fprintf(stderr, "skipped xi=%g: %s\n", skip.xi, skip.reason.c_str());
    if (branch.points.size() * 2 < grid.size()) {
        std::fprintf(stderr, "more than half of the grid points failed (%zu of %zu)\n",
                     grid.size() - branch.points.size(), grid.size());
        return kExitNumericalFailure;
    }

    io::BranchFile file;
    file.kappa = args.kappa;
    file.n = args.n;
    file.nu = nu_value(args.nu);
    file.points = branch.points;
    file.residual_shoot.resize(branch.points.size(), 0.0);
    parallel_for(branch.points.size(), [&](std::size_t i) {
        const auto& p = branch.points[i];
        const double b0 = file.nu * p.b;
        const auto traj = shooting::integrate_ivp(args.kappa, p.lambda, b0, 1.0, tol.step);
        file.residual_shoot[i] = std::abs(traj.samples.back().u);
    });

    const std::string text = format == io::Format::Csv ? io::branch_to_csv(file, tol)
                                                       : io::branch_to_json(file, tol);
    if (args.out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        io::write_file(args.out, text);
        std::fprintf(stderr, "wrote %zu branch points to %s\n", file.points.size(),
                     args.out.c_str());
    }
    return kExitOk;
}

/* Per-check lines go to stderr; the JSON report goes to --out when given,
 * to stdout otherwise, so `curvspec validate > report.json` stays
 * machine-readable. */
int cmd_validate(bool fast, double perturb_B, const std::string& out)
{
    validation::Options opts;
    opts.fast = fast;
    opts.B_perturbation = perturb_B;
    const auto report = validation::run(opts);
    for (const auto& c : report.checks)
        std::fprintf(stderr, "%s %-28s (%6.2f s)  %s\n", c.pass ? "PASS" : "FAIL",
                     c.name.c_str(), c.seconds, c.detail.c_str());
    std::fprintf(stderr, "%s: %zu checks, %.2f s total\n",
                 report.all_pass() ? "ALL PASS" : "FAILURES PRESENT", report.checks.size(),
                 report.total_seconds());
    const std::string json = validation::report_to_json(report, opts);
    if (out.empty())
        std::fputs(json.c_str(), stdout);
    else
        io::write_file(out, json);
    return report.all_pass() ? kExitOk : kExitValidationFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"curvspec: sign-changing solutions of the curvature eigenvalue problem\n"
                 "-(u'/sqrt(1+kappa u'^2))' = lambda u on (0,1), u(0)=u(1)=0"};
    app.require_subcommand(1);

    CommonArgs args;
    double lambda = 0.0;
    double xi_min = 0.0, xi_max = 0.0;
    int xi_count = 0;
    bool fast = false;
    double perturb_B = 0.0;
    std::string validate_out;

    app.add_subcommand("constants", "print B, 8 B^2 and pi^2");

    auto* interval = app.add_subcommand("interval", "print the spectral interval");
    interval->add_option("--kappa", args.kappa, "curvature parameter (nonzero)")->required();
    interval->add_option("--n", args.n, "number of humps")->required();

    auto* solve = app.add_subcommand("solve", "compute one nodal solution profile");
    solve->add_option("--kappa", args.kappa)->required();
    solve->add_option("--lambda", lambda, "spectral parameter")->required();
    solve->add_option("--n", args.n);
    solve->add_option("--nu", args.nu, "sign near x=0: + or -");
    solve->add_option("--out", args.out, "output path (stdout if omitted)");
    solve->add_option("--format", args.format, "csv or json");
    add_tolerance_flags(solve, args.tol);

    auto* branch = app.add_subcommand("branch", "trace a bifurcation branch over amplitudes");
    branch->add_option("--kappa", args.kappa)->required();
    branch->add_option("--n", args.n);
    branch->add_option("--nu", args.nu);
    branch->add_option("--xi-min", xi_min)->required();
    branch->add_option("--xi-max", xi_max)->required();
    branch->add_option("--xi-count", xi_count)->required();
    branch->add_option("--out", args.out);
    branch->add_option("--format", args.format);
    add_tolerance_flags(branch, args.tol);

    auto* validate = app.add_subcommand("validate", "run the validation suite");
    validate->add_flag("--fast", fast, "reduced suite (seconds instead of minutes)");
    validate->add_option("--out", validate_out, "write the JSON report here");
    validate->add_option("--perturb-B", perturb_B)->group(""); // fault-injection hook

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("constants"))
            return cmd_constants();
        if (app.got_subcommand("interval"))
            return cmd_interval(args);
        if (app.got_subcommand("solve"))
            return cmd_solve(args, lambda);
        if (app.got_subcommand("branch"))
            return cmd_branch(args, xi_min, xi_max, xi_count);
        if (app.got_subcommand("validate"))
            return cmd_validate(fast, perturb_B, validate_out);
    } catch (const NoSolution& e) {
        std::fprintf(stderr, "no solution: lambda outside spectral interval (%s)\n", e.what());
        return kExitNoSolution;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumericalFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumericalFailure;
    }
    return kExitOk;
}
