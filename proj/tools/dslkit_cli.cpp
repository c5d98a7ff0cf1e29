// Command-line front end: angle and membership queries, envelope and
// Dirichlet solves, solution verification, and the named property suites.
// All output is machine-readable JSON or CSV. Exit codes: 0 pass, 1
// property violation or numerical fault, 2 usage / IO error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dslkit/angles.hpp"
#include "dslkit/envelope.hpp"
#include "dslkit/io.hpp"
#include "dslkit/subequations.hpp"
#include "dslkit/suites.hpp"

using dslkit::json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write file: " + out_path);
        out << j.dump(2) << "\n";
    }
}

int cmd_angle(const std::string& matrix_path, const std::string& out_path) {
    const dslkit::SymMatrix full = dslkit::load_matrix(matrix_path);
    json j{{"schema", dslkit::kSchemaTag}, {"n", full.dim()}};
    j["theta_tilde"] = dslkit::angle_to_json(dslkit::lifted_angle(full));
    if (full.dim() >= 2) {
        const auto st = dslkit::SpaceTimeMatrix::split(full);
        json big{{"n_space", st.space_dim()}};
        big["value"] = dslkit::angle_to_json(dslkit::spacetime_angle(st));
        big["singular_class"] = dslkit::in_singular_class(st, dslkit::defaults::singular_class_tol);
        if (!big["singular_class"].get<bool>()) {
            big["spectral"] = dslkit::angle_to_json(dslkit::spacetime_angle_spectral(st));
            big["schur"] = dslkit::angle_to_json(dslkit::spacetime_angle_schur(st));
        }
        j["Theta_tilde"] = big;
    }
    emit(j, out_path);
    return 0;
}

int cmd_check(const std::string& matrix_path, double c, double tol, const std::string& out_path) {
    const dslkit::SymMatrix full = dslkit::load_matrix(matrix_path);
    if (full.dim() < 2) throw std::runtime_error("check: need a matrix of dimension >= 2");
    const auto st = dslkit::SpaceTimeMatrix::split(full);
    const int n = st.space_dim();
    const dslkit::DslBranch branch(n, c);

    json j{{"schema", dslkit::kSchemaTag}, {"n_space", n}, {"c", c}, {"tier", to_string(branch.tier)}};
    j["Fcal_c"] = dslkit::in_Fcal(st, branch, tol);
    if (branch.tier != dslkit::DslTier::Inner) {
        const auto star = dslkit::in_star_product(st, branch);
        j["star_product"] = {{"member", star.member},
                             {"time_clause_ok", star.time_clause_ok},
                             {"inf_estimate", star.inf_estimate},
                             {"witness", star.witness}};
    }
    const dslkit::SlBranch full_branch(full.dim(), c);
    j["F_c"] = dslkit::in_F(full, full_branch, tol);
    j["dual_F_c"] = dslkit::in_dual_F(full, full_branch, tol);
    const auto cons = dslkit::eigenvalue_consequences(full);
    json preds{{"P", dslkit::in_P(full)},
               {"T", dslkit::in_T(full)},
               {"eigenvalue_consequences",
                {{"top_branch_psd_ok", cons.top_branch_psd_ok},
                 {"second_branch_dominance_ok", cons.second_branch_dominance_ok},
                 {"theta_tilde_full", cons.theta}}}};
    if (branch.tier != dslkit::DslTier::Inner && j["Fcal_c"].get<bool>()) {
        const auto sign = dslkit::time_slot_sign(st, branch, tol);
        preds["time_slot_sign"] = {{"a00_nonneg", sign.a00_nonneg},
                                   {"a00_pos_given_avec", sign.a00_pos_given_avec}};
    }
    j["predicates"] = preds;
    emit(j, out_path);
    return 0;
}

int cmd_envelope(const std::string& config_path, const std::string& out_path) {
    const json cfg = load_json_file(config_path);
    dslkit::RooftopProblem p;
    p.a = cfg.at("a").get<double>();
    p.xl = cfg.at("domain").at("xl").get<double>();
    p.xr = cfg.at("domain").at("xr").get<double>();
    p.h = dslkit::GridFunction1D(cfg.at("h").at("xs").get<std::vector<double>>(),
                                 cfg.at("h").at("values").get<std::vector<double>>());
    const auto f = cfg.at("f").get<std::vector<double>>();
    if (f.size() != 2) throw std::runtime_error("envelope: 'f' must hold the two endpoint caps");
    p.f_left = f[0];
    p.f_right = f[1];
    const dslkit::GridFunction1D w = dslkit::rooftop_envelope(p);
    if (out_path.empty()) {
        dslkit::write_grid1d_csv(std::cout, w);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write file: " + out_path);
        dslkit::write_grid1d_csv(out, w);
        std::cout << json{{"schema", dslkit::kSchemaTag}, {"written", out_path},
                          {"nodes", w.xs.size()}}
                         .dump(2)
                  << "\n";
    }
    return 0;
}

int cmd_solve(const std::string& config_path, const std::string& out_path,
              const std::string& report_path) {
    const dslkit::DslDirichletProblem p = dslkit::problem_from_json(load_json_file(config_path));
    const dslkit::GridFunction2D u = dslkit::solve_dsl_dirichlet(p);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write file: " + out_path);
        dslkit::write_grid_csv(out, u);
    }
    const dslkit::SolutionVerification v = dslkit::verify_dsl_solution(u, p.c, p.g);
    json rep = dslkit::verification_to_json(v);
    rep["grid_csv"] = out_path;
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot write file: " + report_path);
        out << rep.dump(2) << "\n";
    }
    std::cout << rep.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& config_path, const std::string& grid_path, double tol_pde,
               double min_rate, double tol_boundary, const std::string& out_path) {
    const dslkit::DslDirichletProblem p = dslkit::problem_from_json(load_json_file(config_path));
    std::ifstream in(grid_path);
    if (!in) throw std::runtime_error("cannot open grid file: " + grid_path);
    const dslkit::GridFunction2D u = dslkit::read_grid_csv(in);
    const dslkit::SolutionVerification v = dslkit::verify_dsl_solution(u, p.c, p.g, tol_pde);
    if (tol_boundary <= 0.0) tol_boundary = 10.0 * (u.dt() + u.dx());
    const bool pass = v.boundary_residual <= tol_boundary && v.subsolution_rate >= min_rate &&
                      v.time_convexity_ok && v.sheared_slices_ok && v.joint_convexity_ok &&
                      v.min_principle.pass;
    json rep = dslkit::verification_to_json(v);
    rep["pass"] = pass;
    rep["tol_boundary"] = tol_boundary;
    rep["min_rate"] = min_rate;
    emit(rep, out_path);
    return pass ? 0 : 1;
}

int cmd_suite(const std::string& name, const std::vector<int>& dims, long samples, uint64_t seed,
              std::optional<double> tol, const std::string& out_path) {
    dslkit::SuiteSpec spec;
    spec.name = name;
    if (!dims.empty()) spec.dims = dims;
    spec.samples = samples;
    spec.seed = seed;
    if (tol) spec.tolerances["tol"] = *tol;
    const dslkit::VerificationReport report = dslkit::run_suite(spec);
    emit(dslkit::report_to_json(report), out_path);
    return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dslkit: angle computation, branch membership, envelopes, and the Dirichlet "
                 "solver for the degenerate special Lagrangian toolkit"};
    app.require_subcommand(1);

    std::string matrix_path, config_path, grid_path, out_path, report_path, suite_name;
    std::vector<int> dims;
    long samples = 1000;
    uint64_t seed = 42;
    double c = 0.0, tol = dslkit::defaults::angle_tol;
    double tol_pde = 0.0, min_rate = 0.99, tol_boundary = 0.0;
    std::optional<double> suite_tol;
    bool json_flag = false;  // accepted for compatibility; output is JSON already

    auto* angle = app.add_subcommand("angle", "lifted angles of a matrix JSON, both paths");
    angle->add_option("--matrix", matrix_path, "matrix JSON path")->required();
    angle->add_option("--out", out_path, "write JSON here instead of stdout");
    angle->add_flag("--json", json_flag, "emit JSON (default)");

    auto* check = app.add_subcommand("check", "branch membership report for a matrix JSON");
    check->add_option("--matrix", matrix_path, "matrix JSON path")->required();
    check->add_option("--c", c, "branch phase")->required();
    check->add_option("--tol", tol, "membership tolerance");
    check->add_option("--out", out_path, "write JSON here instead of stdout");
    check->add_flag("--json", json_flag, "emit JSON (default)");

    auto* envelope = app.add_subcommand("envelope", "rooftop envelope of an obstacle config");
    envelope->add_option("--config", config_path, "rooftop problem JSON")->required();
    envelope->add_option("--out", out_path, "write CSV here instead of stdout");

    auto* solve = app.add_subcommand("solve", "solve the Dirichlet problem from a config JSON");
    solve->add_option("--config", config_path, "problem JSON")->required();
    solve->add_option("--out", out_path, "write the solution grid CSV here");
    solve->add_option("--report", report_path, "also write the verification report JSON here");

    auto* verify = app.add_subcommand("verify", "verify a solution grid against a problem config");
    verify->add_option("--config", config_path, "problem JSON")->required();
    verify->add_option("--grid", grid_path, "solution grid CSV")->required();
    verify->add_option("--tol", tol_pde, "interior angle tolerance (default 10*dx)");
    verify->add_option("--min-rate", min_rate, "required subsolution rate");
    verify->add_option("--tol-boundary", tol_boundary, "boundary residual bound (default 10*(dt+dx))");
    verify->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* suite = app.add_subcommand("suite", "run a named verification suite");
    suite->add_option("--name", suite_name, "suite name")->required();
    suite->add_option("--dim", dims, "space dimension(s), repeatable");
    suite->add_option("--samples", samples, "sample count");
    suite->add_option("--seed", seed, "seed");
    suite->add_option("--tol", [&suite_tol](const std::vector<std::string>& v) {
        suite_tol = std::stod(v.front());
        return true;
    }, "main tolerance override");
    suite->add_option("--out", out_path, "write JSON here instead of stdout");
    suite->add_flag("--json", json_flag, "emit JSON (default)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (angle->parsed()) return cmd_angle(matrix_path, out_path);
        if (check->parsed()) return cmd_check(matrix_path, c, tol, out_path);
        if (envelope->parsed()) return cmd_envelope(config_path, out_path);
        if (solve->parsed()) return cmd_solve(config_path, out_path, report_path);
        if (verify->parsed())
            return cmd_verify(config_path, grid_path, tol_pde, min_rate, tol_boundary, out_path);
        if (suite->parsed()) return cmd_suite(suite_name, dims, samples, seed, suite_tol, out_path);
    } catch (const dslkit::CrossCheckMismatch& e) {
        std::cerr << json{{"error", "cross-check-mismatch"}, {"what", e.what()}}.dump() << "\n";
        return 1;
    } catch (const dslkit::NonConvergence& e) {
        std::cerr << json{{"error", "non-convergence"}, {"what", e.what()}}.dump() << "\n";
        return 1;
    } catch (const dslkit::BranchCutViolation& e) {
        std::cerr << json{{"error", "branch-cut"}, {"what", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "usage-or-io"}, {"what", e.what()}}.dump() << "\n";
        return 2;
    }
    return 2;
}
