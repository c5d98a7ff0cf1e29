#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "dslkit/angles.hpp"
#include "dslkit/common.hpp"
#include "dslkit/envelope.hpp"
#include "dslkit/grid.hpp"
#include "dslkit/matrix.hpp"
#include "dslkit/suites.hpp"

namespace dslkit {

inline constexpr const char* kSchemaTag = "dslkit/1";

using json = nlohmann::json;

/// Matrix JSON: {"n": int, "rows": [[...], ...]}. Loading validates exact
/// symmetry and rejects any |a_ij - a_ji| > 0.
inline SymMatrix matrix_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("rows"))
        throw std::invalid_argument("matrix JSON: need fields 'n' and 'rows'");
    const int n = j.at("n").get<int>();
    auto rows = j.at("rows").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != n)
        throw std::invalid_argument("matrix JSON: row count does not match n");
    return SymMatrix::from_rows(rows);
}

inline json matrix_to_json(const SymMatrix& A) {
    return json{{"n", A.dim()}, {"rows", A.to_rows()}};
}

inline SymMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    json j;
    in >> j;
    return matrix_from_json(j);
}

/// Grid CSV: header "t,x,value" (or "tau,x,value"), row-major by the first
/// axis then x, 17 significant digits.
inline void write_grid_csv(std::ostream& out, const GridFunction2D& u,
                           const std::string& first_axis = "t") {
    out << first_axis << ",x,value\n";
    char buf[96];
    for (int it = 0; it < u.nt(); ++it)
        for (int ix = 0; ix < u.nx(); ++ix) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", u.ts[static_cast<size_t>(it)],
                          u.xs[static_cast<size_t>(ix)], u.at(it, ix));
            out << buf;
        }
}

inline GridFunction2D read_grid_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("grid CSV: empty input");
    std::vector<double> ts, xs, values;
    std::vector<std::array<double, 3>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, 3> r{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r[0], &r[1], &r[2]) != 3)
            throw std::invalid_argument("grid CSV: malformed row: " + line);
        rows.push_back(r);
    }
    if (rows.empty()) throw std::invalid_argument("grid CSV: no data rows");
    for (const auto& r : rows) {
        if (ts.empty() || r[0] != ts.back()) {
            if (ts.empty() || r[0] > ts.back()) ts.push_back(r[0]);
        }
    }
    const size_t nx = rows.size() / ts.size();
    if (nx * ts.size() != rows.size())
        throw std::invalid_argument("grid CSV: row count is not a full grid");
    for (size_t i = 0; i < nx; ++i) xs.push_back(rows[i][1]);
    values.reserve(rows.size());
    for (const auto& r : rows) values.push_back(r[2]);
    return GridFunction2D(std::move(ts), std::move(xs), std::move(values));
}

inline void write_grid1d_csv(std::ostream& out, const GridFunction1D& g) {
    out << "x,value\n";
    char buf[64];
    for (size_t i = 0; i < g.xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.xs[i], g.values[i]);
        out << buf;
    }
}

/// Dirichlet problem JSON:
/// {"c":..., "domain":{"xl":...,"xr":...}, "grid":{"nt":...,"nx":...,"ntau":...},
///  "boundary":{"g0":[...],"g1":[...],"gl":[...],"gr":[...]}}
inline DslDirichletProblem problem_from_json(const json& j) {
    DslDirichletProblem p;
    p.c = j.at("c").get<double>();
    p.xl = j.at("domain").at("xl").get<double>();
    p.xr = j.at("domain").at("xr").get<double>();
    p.nt = j.at("grid").at("nt").get<int>();
    p.nx = j.at("grid").at("nx").get<int>();
    p.ntau = j.at("grid").value("ntau", 0);
    const auto& b = j.at("boundary");
    const auto tg = linspace(0.0, 1.0, p.nt);
    const auto xg = linspace(p.xl, p.xr, p.nx);
    p.g = BoundaryData{GridFunction1D(xg, b.at("g0").get<std::vector<double>>()),
                       GridFunction1D(xg, b.at("g1").get<std::vector<double>>()),
                       GridFunction1D(tg, b.at("gl").get<std::vector<double>>()),
                       GridFunction1D(tg, b.at("gr").get<std::vector<double>>())};
    return p;
}

inline json problem_to_json(const DslDirichletProblem& p) {
    return json{{"schema", kSchemaTag},
                {"c", p.c},
                {"domain", {{"xl", p.xl}, {"xr", p.xr}}},
                {"grid", {{"nt", p.nt}, {"nx", p.nx}, {"ntau", p.ntau}}},
                {"boundary",
                 {{"g0", p.g.g0.values},
                  {"g1", p.g.g1.values},
                  {"gl", p.g.gl.values},
                  {"gr", p.g.gr.values}}}};
}

inline json angle_to_json(const AngleValue& v) {
    json j{{"radians", v.radians}, {"path", to_string(v.path)}, {"near_singular", v.near_singular}};
    if (v.certified_interval)
        j["certified_interval"] = {(*v.certified_interval)[0], (*v.certified_interval)[1]};
    return j;
}

inline json report_to_json(const VerificationReport& r) {
    json j{{"schema", kSchemaTag},
           {"suite", r.spec.name},
           {"dims", r.spec.dims},
           {"samples", r.spec.samples},
           {"seed", r.spec.seed},
           {"pass", r.pass},
           {"violations", r.violations},
           {"near_singular_excluded", r.near_singular_excluded},
           {"runtime_ms", r.runtime_ms}};
    if (!r.spec.tolerances.empty()) j["tolerances"] = r.spec.tolerances;
    if (r.worst)
        j["worst"] = {{"input_digest", r.worst->input_digest},
                      {"measured", r.worst->measured},
                      {"threshold", r.worst->threshold}};
    return j;
}

inline json verification_to_json(const SolutionVerification& v) {
    return json{
        {"schema", kSchemaTag},
        {"boundary_residual", v.boundary_residual},
        {"theta_quantiles",
         {{"min", v.theta_min},
          {"p01", v.theta_p01},
          {"p05", v.theta_p05},
          {"p25", v.theta_p25},
          {"median", v.theta_median},
          {"p75", v.theta_p75},
          {"max", v.theta_max}}},
        {"subsolution_rate", v.subsolution_rate},
        {"tol_pde", v.tol_pde},
        {"certificates",
         {{"time_convexity", v.time_convexity_ok},
          {"joint_convexity", v.joint_convexity_ok},
          {"sheared_slices", v.sheared_slices_ok},
          {"min_principle",
           {{"pass", v.min_principle.pass},
            {"min_second_diff", v.min_principle.min_second_diff},
            {"threshold", v.min_principle.threshold}}}}},
        {"convexity",
         {{"min_second_diff_t", v.convexity.min_second_diff_t},
          {"min_second_diff_x", v.convexity.min_second_diff_x},
          {"min_joint_hessian_eig", v.convexity.min_joint_hessian_eig},
          {"min_plane_laplacian", v.convexity.min_plane_laplacian}}}};
}

}  // namespace dslkit
