// Solves one Dirichlet problem in the second branch with boundary data from
// a known global quadratic, then prints how well the solution verifies.

#include <cmath>
#include <cstdio>

#include "dslkit/envelope.hpp"
#include "dslkit/grid.hpp"

using namespace dslkit;

int main() {
    // u0(t,x) = eta t^2/2 + q x^2/2 is a global solution with constant
    // space-time angle pi/2 + arctan(q); q < 0 puts it in the second branch.
    const double eta = 1.0;
    const double q = -1.0;
    const double c = kHalfPi + std::atan(q);

    DslDirichletProblem p;
    p.xl = -1.0;
    p.xr = 1.0;
    p.c = c;
    p.nt = 65;
    p.nx = 65;
    auto u0 = [&](double t, double x) { return 0.5 * (eta * t * t + q * x * x); };

    const auto tg = linspace(0.0, 1.0, p.nt);
    const auto xg = linspace(p.xl, p.xr, p.nx);
    std::vector<double> g0(xg.size()), g1(xg.size()), gl(tg.size()), gr(tg.size());
    for (size_t i = 0; i < xg.size(); ++i) {
        g0[i] = u0(0.0, xg[i]);
        g1[i] = u0(1.0, xg[i]);
    }
    for (size_t k = 0; k < tg.size(); ++k) {
        gl[k] = u0(tg[k], p.xl);
        gr[k] = u0(tg[k], p.xr);
    }
    p.g = BoundaryData{GridFunction1D(xg, g0), GridFunction1D(xg, g1), GridFunction1D(tg, gl),
                       GridFunction1D(tg, gr)};

    const GridFunction2D u = solve_dsl_dirichlet(p);

    double err = 0.0;
    for (int it = 0; it < u.nt(); ++it)
        for (int ix = 0; ix < u.nx(); ++ix)
            err = std::max(err, std::abs(u.at(it, ix) - u0(u.ts[(size_t)it], u.xs[(size_t)ix])));

    const SolutionVerification v = verify_dsl_solution(u, c, p.g);
    std::printf("phase c                 : %.6f (second branch)\n", c);
    std::printf("max error vs quadratic  : %.3e\n", err);
    std::printf("boundary residual       : %.3e\n", v.boundary_residual);
    std::printf("subsolution rate        : %.4f (tol %.4f)\n", v.subsolution_rate, v.tol_pde);
    std::printf("time convexity          : %s\n", v.time_convexity_ok ? "ok" : "FAIL");
    std::printf("sheared slice bound     : %s\n", v.sheared_slices_ok ? "ok" : "FAIL");
    std::printf("min principle           : %s (min v'' = %.3e, threshold %.3e)\n",
                v.min_principle.pass ? "ok" : "FAIL", v.min_principle.min_second_diff,
                v.min_principle.threshold);
    return 0;
}
