#include "curvspec/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace curvspec::io {

using nlohmann::json;

Format format_from_string(const std::string& name)
{
    if (name == "csv")
        return Format::Csv;
    if (name == "json")
        return Format::Json;
    throw InvalidInput("unknown format '" + name + "' (expected csv or json)");
}

std::string extension(Format format)
{
    return format == Format::Csv ? ".csv" : ".json";
}

std::string format_double(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::string nu_string(int nu) { return nu >= 0 ? "+" : "-"; }

int nu_from_string(const std::string& s)
{
    if (s == "+")
        return +1;
    if (s == "-")
        return -1;
    throw InvalidInput("nu must be '+' or '-'");
}

json tolerances_json(const Tolerances& tol)
{
    return json{{"quad_tol", tol.quad_abs}, {"root_tol", tol.root}, {"step_tol", tol.step}};
}

} // namespace

std::string profile_to_csv(const spectrum::NodalSolution& sol, double residual_shoot,
                           const Tolerances& tol)
{
    std::ostringstream out;
    out << "# curvspec profile v" << kVersion << "\n";
    out << "# kappa=" << format_double(sol.kappa) << " lambda=" << format_double(sol.lambda)
        << " n=" << sol.cls.n << " nu=" << nu_string(sol.cls.nu)
        << " xi=" << format_double(sol.sup_norm)
        << " b=" << format_double(sol.boundary_slope)
        << " residual_J=" << format_double(sol.residual_J)
        << " residual_shoot=" << format_double(residual_shoot) << "\n";
    out << "# quad_tol=" << format_double(tol.quad_abs)
        << " root_tol=" << format_double(tol.root)
        << " step_tol=" << format_double(tol.step) << "\n";
    out << "x,u\n";
    for (std::size_t i = 0; i < sol.x.size(); ++i)
        out << format_double(sol.x[i]) << "," << format_double(sol.u[i]) << "\n";
    return out.str();
}

std::string profile_to_json(const spectrum::NodalSolution& sol, double residual_shoot,
                            const Tolerances& tol)
{
    json j;
    j["meta"] = {{"version", kVersion},
                 {"kind", "profile"},
                 {"kappa", sol.kappa},
                 {"lambda", sol.lambda},
                 {"n", sol.cls.n},
                 {"nu", nu_string(sol.cls.nu)},
                 {"xi", sol.sup_norm},
                 {"b", sol.boundary_slope},
                 {"residual_J", sol.residual_J},
                 {"residual_shoot", residual_shoot},
                 {"tolerances", tolerances_json(tol)}};
    j["x"] = sol.x;
    j["u"] = sol.u;
    return j.dump(2) + "\n";
}

std::string branch_to_csv(const BranchFile& branch, const Tolerances& tol)
{
    std::ostringstream out;
    out << "# curvspec branch v" << kVersion << "\n";
    out << "# kappa=" << format_double(branch.kappa) << " n=" << branch.n
        << " nu=" << nu_string(branch.nu) << "\n";
    out << "# quad_tol=" << format_double(tol.quad_abs)
        << " root_tol=" << format_double(tol.root)
        << " step_tol=" << format_double(tol.step) << "\n";
    out << "xi,lambda,b,sup_norm,residual_J,residual_shoot\n";
    for (std::size_t i = 0; i < branch.points.size(); ++i) {
        const auto& p = branch.points[i];
        out << format_double(p.xi) << "," << format_double(p.lambda) << ","
            << format_double(p.b) << "," << format_double(p.xi) << ","
            << format_double(p.residual_J) << ","
            << format_double(branch.residual_shoot[i]) << "\n";
    }
    return out.str();
}

std::string branch_to_json(const BranchFile& branch, const Tolerances& tol)
{
    json j;
    j["meta"] = {{"version", kVersion},
                 {"kind", "branch"},
                 {"kappa", branch.kappa},
                 {"n", branch.n},
                 {"nu", nu_string(branch.nu)},
                 {"tolerances", tolerances_json(tol)}};
    json points = json::array();
    for (std::size_t i = 0; i < branch.points.size(); ++i) {
        const auto& p = branch.points[i];
        points.push_back({{"xi", p.xi},
                          {"lambda", p.lambda},
                          {"b", p.b},
                          {"sup_norm", p.xi},
                          {"residual_J", p.residual_J},
                          {"residual_shoot", branch.residual_shoot[i]}});
    }
    j["points"] = points;
    return j.dump(2) + "\n";
}

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool looks_like_json(const std::string& text)
{
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
            continue;
        return c == '{';
    }
    return false;
}

/* Parses "key=value" tokens out of the CSV comment header. */
double meta_number(const std::string& header, const std::string& key)
{
    const std::string needle = key + "=";
    const auto pos = header.find(needle);
    if (pos == std::string::npos)
        throw InvalidInput("missing metadata key " + key);
    return std::stod(header.substr(pos + needle.size()));
}

std::string meta_token(const std::string& header, const std::string& key)
{
    const std::string needle = key + "=";
    const auto pos = header.find(needle);
    if (pos == std::string::npos)
        throw InvalidInput("missing metadata key " + key);
    const auto start = pos + needle.size();
    auto end = header.find_first_of(" \n", start);
    if (end == std::string::npos)
        end = header.size();
    return header.substr(start, end - start);
}

} // namespace

ProfileData read_profile(const std::string& path)
{
    const std::string text = slurp(path);
    ProfileData data;
    if (looks_like_json(text)) {
        const json j = json::parse(text);
        const auto& meta = j.at("meta");
        data.kappa = meta.at("kappa").get<double>();
        data.lambda = meta.at("lambda").get<double>();
        data.n = meta.at("n").get<int>();
        data.nu = nu_from_string(meta.at("nu").get<std::string>());
        data.xi = meta.at("xi").get<double>();
        data.b = meta.at("b").get<double>();
        data.x = j.at("x").get<std::vector<double>>();
        data.u = j.at("u").get<std::vector<double>>();
        return data;
    }
    data.kappa = meta_number(text, "kappa");
    data.lambda = meta_number(text, "lambda");
    data.n = int(meta_number(text, "n"));
    data.nu = nu_from_string(meta_token(text, "nu"));
    data.xi = meta_number(text, "xi");
    data.b = meta_number(text, "b");
    std::istringstream lines(text);
    std::string line;
    bool in_rows = false;
    while (std::getline(lines, line)) {
        if (!in_rows) {
            if (line == "x,u")
                in_rows = true;
            continue;
        }
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidInput("malformed profile row: " + line);
        data.x.push_back(std::stod(line.substr(0, comma)));
        data.u.push_back(std::stod(line.substr(comma + 1)));
    }
    if (data.x.empty())
        throw InvalidInput("profile file has no rows");
    return data;
}

BranchFile read_branch(const std::string& path)
{
    const std::string text = slurp(path);
    BranchFile branch;
    if (looks_like_json(text)) {
        const json j = json::parse(text);
        const auto& meta = j.at("meta");
        branch.kappa = meta.at("kappa").get<double>();
        branch.n = meta.at("n").get<int>();
        branch.nu = nu_from_string(meta.at("nu").get<std::string>());
        for (const auto& p : j.at("points")) {
            spectrum::BranchPoint point;
            point.xi = p.at("xi").get<double>();
            point.lambda = p.at("lambda").get<double>();
            point.b = p.at("b").get<double>();
            point.residual_J = p.at("residual_J").get<double>();
            branch.points.push_back(point);
            branch.residual_shoot.push_back(p.at("residual_shoot").get<double>());
        }
        return branch;
    }
    branch.kappa = meta_number(text, "kappa");
    branch.n = int(meta_number(text, "n"));
    branch.nu = nu_from_string(meta_token(text, "nu"));
    std::istringstream lines(text);
    std::string line;
    bool in_rows = false;
    while (std::getline(lines, line)) {
        if (!in_rows) {
            if (line == "xi,lambda,b,sup_norm,residual_J,residual_shoot")
                in_rows = true;
            continue;
        }
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> values;
        while (std::getline(row, field, ','))
            values.push_back(std::stod(field));
        if (values.size() != 6)
            throw InvalidInput("malformed branch row: " + line);
        spectrum::BranchPoint point;
        point.xi = values[0];
        point.lambda = values[1];
        point.b = values[2];
        point.residual_J = values[4];
        branch.points.push_back(point);
        branch.residual_shoot.push_back(values[5]);
    }
    return branch;
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidInput("cannot write " + path);
    out << contents;
}

} // namespace curvspec::io
