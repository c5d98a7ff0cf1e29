#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dslkit/angles.hpp"
#include "dslkit/common.hpp"
#include "dslkit/grid.hpp"
#include "dslkit/transforms.hpp"

namespace dslkit {

/// Largest convex function below the given points, evaluated at the data
/// abscissae. Lower hull by monotone chain, then linear evaluation.
inline GridFunction1D convex_envelope_1d(const std::vector<double>& xs,
                                         const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("convex_envelope_1d: need matching sizes >= 2");
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("convex_envelope_1d: abscissae must strictly increase");

    auto cross = [&](size_t o, size_t a, double bx, double by) {
        return (xs[a] - xs[o]) * (by - ys[o]) - (ys[a] - ys[o]) * (bx - xs[o]);
    };
    std::vector<size_t> hull;
    for (size_t i = 0; i < xs.size(); ++i) {
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], hull.back(), xs[i], ys[i]) <= 0.0)
            hull.pop_back();
        hull.push_back(i);
    }

    std::vector<double> env(xs.size());
    size_t seg = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        while (seg + 1 < hull.size() && xs[hull[seg + 1]] < xs[i]) ++seg;
        const size_t a = hull[seg];
        const size_t b = hull[std::min(seg + 1, hull.size() - 1)];
        if (a == b || xs[i] <= xs[a]) {
            env[i] = ys[a];
        } else {
            const double w = (xs[i] - xs[a]) / (xs[b] - xs[a]);
            env[i] = (1.0 - w) * ys[a] + w * ys[b];
        }
    }
    return GridFunction1D(xs, env);
}

/// Obstacle problem data for one branch of the 1-d equation: interior
/// obstacle h, endpoint caps f, and the branch phase a. In one space
/// dimension membership in the branch is the semiconvexity w'' >= tan(a),
/// which makes the envelope exactly computable.
struct RooftopProblem {
    double xl = 0.0;
    double xr = 1.0;
    GridFunction1D h;   // on interior nodes, strictly inside (xl, xr)
    double f_left = 0.0;
    double f_right = 0.0;
    double a = 0.0;     // strictly inside (-pi/2, pi/2)

    void validate() const {
        if (!(xl < xr)) throw std::invalid_argument("RooftopProblem: xl < xr required");
        if (!(std::abs(a) < kHalfPi))
            throw std::invalid_argument("RooftopProblem: phase outside (-pi/2, pi/2)");
        if (!(h.xs.front() > xl) || !(h.xs.back() < xr))
            throw std::invalid_argument("RooftopProblem: obstacle nodes must be interior");
        for (double v : h.values)
            if (!std::isfinite(v)) throw std::invalid_argument("RooftopProblem: non-finite obstacle");
    }
};

/// The rooftop envelope: largest branch member below the obstacle and the
/// endpoint caps. Computed as m x^2/2 plus the convex envelope of the data
/// shifted by -m x^2/2, m = tan(a). Result lives on {xl} + interior + {xr}.
inline GridFunction1D rooftop_envelope(const RooftopProblem& p) {
    p.validate();
    const double m = std::tan(p.a);
    const size_t count = p.h.xs.size() + 2;
    std::vector<double> xs(count), ys(count);
    xs.front() = p.xl;
    ys.front() = p.f_left - 0.5 * m * p.xl * p.xl;
    for (size_t i = 0; i < p.h.xs.size(); ++i) {
        xs[i + 1] = p.h.xs[i];
        ys[i + 1] = p.h.values[i] - 0.5 * m * p.h.xs[i] * p.h.xs[i];
    }
    xs.back() = p.xr;
    ys.back() = p.f_right - 0.5 * m * p.xr * p.xr;

    GridFunction1D hull = convex_envelope_1d(xs, ys);
    for (size_t i = 0; i < hull.values.size(); ++i)
        hull.values[i] += 0.5 * m * hull.xs[i] * hull.xs[i];
    return hull;
}

/// Continuous boundary traces on the four sides of [0,1] x [xl,xr].
struct BoundaryData {
    GridFunction1D g0;  // t = 0, on the x-grid
    GridFunction1D g1;  // t = 1, on the x-grid
    GridFunction1D gl;  // x = xl, on the t-grid
    GridFunction1D gr;  // x = xr, on the t-grid

    void validate_corners(double tol = defaults::corner_tol) const {
        const double c00 = std::abs(g0.values.front() - gl.values.front());
        const double c01 = std::abs(g0.values.back() - gr.values.front());
        const double c10 = std::abs(g1.values.front() - gl.values.back());
        const double c11 = std::abs(g1.values.back() - gr.values.back());
        if (std::max({c00, c01, c10, c11}) > tol)
            throw CornerMismatch("BoundaryData: traces disagree at a corner");
    }
};

/// The Dirichlet problem for the degenerate equation on [0,1] x [xl,xr] in
/// one space dimension, phase c in [0, pi) (top two branches for n = 1).
struct DslDirichletProblem {
    double xl = 0.0;
    double xr = 1.0;
    double c = kHalfPi;
    int nt = 65;
    int nx = 65;
    int ntau = 0;  // 0: default 4*nt, rounded up to odd
    BoundaryData g;

    void validate() const {
        if (!(xl < xr)) throw std::invalid_argument("DslDirichletProblem: xl < xr required");
        if (!(c >= 0.0) || !(c < kPi))
            throw std::invalid_argument("DslDirichletProblem: phase outside [0, pi)");
        if (c == 0.0)
            throw std::invalid_argument(
                "DslDirichletProblem: phase 0 puts the envelope branch at its excluded endpoint");
        if (nt < 3 || nx < 3) throw std::invalid_argument("DslDirichletProblem: grids too coarse");
        if (g.g0.size() != nx || g.g1.size() != nx || g.gl.size() != nt || g.gr.size() != nt)
            throw std::invalid_argument("DslDirichletProblem: trace lengths do not match grids");
        g.validate_corners();
    }
};

namespace detail {

/// Max discrete time-slope of the boundary data; the optimal dual variable
/// in the sup is a time subgradient, bounded by this.
inline double data_time_lipschitz(const DslDirichletProblem& p) {
    double lip = 0.0;
    const double dt = 1.0 / (p.nt - 1);
    for (int k = 0; k + 1 < p.nt; ++k) {
        lip = std::max(lip, std::abs(p.g.gl.values[static_cast<size_t>(k) + 1] -
                                     p.g.gl.values[static_cast<size_t>(k)]) / dt);
        lip = std::max(lip, std::abs(p.g.gr.values[static_cast<size_t>(k) + 1] -
                                     p.g.gr.values[static_cast<size_t>(k)]) / dt);
    }
    for (int i = 0; i < p.nx; ++i)
        lip = std::max(lip, std::abs(p.g.g1.values[static_cast<size_t>(i)] -
                                     p.g.g0.values[static_cast<size_t>(i)]));
    return lip;
}

/// Symmetric uniform grid on [-span, span] with an odd point count, so that
/// zero is always a grid point (flat time profiles reconstruct exactly).
inline std::vector<double> symmetric_odd_grid(double span, int count) {
    if (count % 2 == 0) ++count;
    count = std::max(count, 5);
    return linspace(-span, span, count);
}

}  // namespace detail

/// Solves the Dirichlet problem through the dual family of rooftop obstacle
/// problems: for each dual value tau, the obstacle min(g0, g1 - tau) with
/// endpoint caps min_t [g(t,.) - t*tau] is enveloped in branch c - pi/2, and
/// the solution is the upward transform of that family. Time endpoints carry
/// the data directly.
inline GridFunction2D solve_dsl_dirichlet(const DslDirichletProblem& p) {
    p.validate();
    const std::vector<double> tgrid = linspace(0.0, 1.0, p.nt);
    const std::vector<double> xgrid = linspace(p.xl, p.xr, p.nx);
    const double lip = detail::data_time_lipschitz(p);
    const int ntau = p.ntau > 0 ? p.ntau : 4 * p.nt;
    const std::vector<double> taus = detail::symmetric_odd_grid(lip + 1.0, ntau);

    GridFunction2D u(tgrid, xgrid);
    for (auto& v : u.values) v = -std::numeric_limits<double>::infinity();

    const int interior = p.nx - 2;
    if (interior < 1) throw std::invalid_argument("solve_dsl_dirichlet: nx too small");
    std::vector<double> hx(xgrid.begin() + 1, xgrid.end() - 1);

    for (double tau : taus) {
        std::vector<double> hv(static_cast<size_t>(interior));
        for (int i = 0; i < interior; ++i)
            hv[static_cast<size_t>(i)] = std::min(p.g.g0.values[static_cast<size_t>(i) + 1],
                                                  p.g.g1.values[static_cast<size_t>(i) + 1] - tau);
        double fl = std::numeric_limits<double>::infinity();
        double fr = std::numeric_limits<double>::infinity();
        for (int k = 0; k < p.nt; ++k) {
            const double t = tgrid[static_cast<size_t>(k)];
            fl = std::min(fl, p.g.gl.values[static_cast<size_t>(k)] - t * tau);
            fr = std::min(fr, p.g.gr.values[static_cast<size_t>(k)] - t * tau);
        }
        RooftopProblem rp{p.xl, p.xr, GridFunction1D(hx, hv), fl, fr, p.c - kHalfPi};
        const GridFunction1D w = rooftop_envelope(rp);

        for (int it = 1; it + 1 < p.nt; ++it) {
            const double t = tgrid[static_cast<size_t>(it)];
            for (int ix = 0; ix < p.nx; ++ix) {
                const double cand = w.values[static_cast<size_t>(ix)] + t * tau;
                if (cand > u.at(it, ix)) u.at(it, ix) = cand;
            }
        }
    }

    for (int ix = 0; ix < p.nx; ++ix) {
        u.at(0, ix) = p.g.g0.values[static_cast<size_t>(ix)];
        u.at(p.nt - 1, ix) = p.g.g1.values[static_cast<size_t>(ix)];
    }
    return u;
}

/// Certificate that the time infimum of a solution lands in the shifted
/// 1-d branch: discrete second differences of v bounded below by tan(c-pi/2)
/// up to rounding noise.
struct MinPrincipleReport {
    double min_second_diff = std::numeric_limits<double>::infinity();
    double threshold = 0.0;
    bool pass = false;
};

/// v(x) = min over the interior time grid of u(t, x), with its certificate.
inline std::pair<GridFunction1D, MinPrincipleReport> extract_min_principle(
    const GridFunction2D& u, double c, double tol = defaults::second_diff_tol) {
    if (u.nt() < 3) throw std::invalid_argument("extract_min_principle: need interior time nodes");
    std::vector<double> v(static_cast<size_t>(u.nx()));
    for (int ix = 0; ix < u.nx(); ++ix) {
        double best = std::numeric_limits<double>::infinity();
        for (int it = 1; it + 1 < u.nt(); ++it) best = std::min(best, u.at(it, ix));
        v[static_cast<size_t>(ix)] = best;
    }
    MinPrincipleReport rep;
    const double dx = u.dx();
    rep.threshold = std::tan(c - kHalfPi) - tol / (dx * dx);
    for (int ix = 1; ix + 1 < u.nx(); ++ix)
        rep.min_second_diff = std::min(
            rep.min_second_diff,
            (v[static_cast<size_t>(ix) + 1] - 2.0 * v[static_cast<size_t>(ix)] + v[static_cast<size_t>(ix) - 1]) /
                (dx * dx));
    rep.pass = rep.min_second_diff >= rep.threshold;
    return {GridFunction1D(u.xs, std::move(v)), rep};
}

/// Full verification record for a candidate solution grid.
struct SolutionVerification {
    double boundary_residual = 0.0;
    // Distribution of the space-time angle of the discrete Hessian over
    // interior nodes.
    double theta_min = 0.0, theta_p01 = 0.0, theta_p05 = 0.0, theta_p25 = 0.0;
    double theta_median = 0.0, theta_p75 = 0.0, theta_max = 0.0;
    double subsolution_rate = 0.0;
    double tol_pde = 0.0;
    ConvexityReport convexity;
    bool time_convexity_ok = false;
    bool joint_convexity_ok = true;    // required only for c >= pi/2
    bool sheared_slices_ok = true;
    MinPrincipleReport min_principle;
};

/// Checks a grid function against the Dirichlet problem: boundary residual,
/// the distribution of the discrete space-time angle over interior nodes,
/// the subsolution rate at tolerance tol_pde (default 10*dx, matching the
/// first-order consistency of the discrete Hessian at envelope kinks), and
/// the structural certificates.
inline SolutionVerification verify_dsl_solution(const GridFunction2D& u, double c,
                                                const BoundaryData& g, double tol_pde = 0.0,
                                                double tol = defaults::second_diff_tol) {
    SolutionVerification rep;
    const double dt = u.dt();
    const double dx = u.dx();
    rep.tol_pde = tol_pde > 0.0 ? tol_pde : 10.0 * dx;

    double br = 0.0;
    for (int ix = 0; ix < u.nx(); ++ix) {
        br = std::max(br, std::abs(u.at(0, ix) - g.g0.values[static_cast<size_t>(ix)]));
        br = std::max(br, std::abs(u.at(u.nt() - 1, ix) - g.g1.values[static_cast<size_t>(ix)]));
    }
    for (int it = 0; it < u.nt(); ++it) {
        br = std::max(br, std::abs(u.at(it, 0) - g.gl.values[static_cast<size_t>(it)]));
        br = std::max(br, std::abs(u.at(it, u.nx() - 1) - g.gr.values[static_cast<size_t>(it)]));
    }
    rep.boundary_residual = br;

    std::vector<double> thetas;
    thetas.reserve(static_cast<size_t>(std::max(0, (u.nt() - 2) * (u.nx() - 2))));
    long subsolution = 0;
    for (int it = 1; it + 1 < u.nt(); ++it)
        for (int ix = 1; ix + 1 < u.nx(); ++ix) {
            const double utt = (u.at(it + 1, ix) - 2.0 * u.at(it, ix) + u.at(it - 1, ix)) / (dt * dt);
            const double uxx = (u.at(it, ix + 1) - 2.0 * u.at(it, ix) + u.at(it, ix - 1)) / (dx * dx);
            const double utx = (u.at(it + 1, ix + 1) - u.at(it + 1, ix - 1) - u.at(it - 1, ix + 1) +
                                u.at(it - 1, ix - 1)) /
                               (4.0 * dt * dx);
            SymMatrix spatial(1);
            spatial(0, 0) = uxx;
            const SpaceTimeMatrix hess{utt, {utx}, spatial};
            const double theta = spacetime_angle(hess).radians;
            thetas.push_back(theta);
            if (theta >= c - rep.tol_pde) ++subsolution;
        }
    if (!thetas.empty()) {
        std::sort(thetas.begin(), thetas.end());
        auto quantile = [&](double q) {
            const double pos = q * (static_cast<double>(thetas.size()) - 1.0);
            const size_t lo = static_cast<size_t>(pos);
            const size_t hi = std::min(lo + 1, thetas.size() - 1);
            const double w = pos - static_cast<double>(lo);
            return (1.0 - w) * thetas[lo] + w * thetas[hi];
        };
        rep.theta_min = thetas.front();
        rep.theta_p01 = quantile(0.01);
        rep.theta_p05 = quantile(0.05);
        rep.theta_p25 = quantile(0.25);
        rep.theta_median = quantile(0.50);
        rep.theta_p75 = quantile(0.75);
        rep.theta_max = thetas.back();
        rep.subsolution_rate = static_cast<double>(subsolution) / static_cast<double>(thetas.size());
    }

    // Sheared sections through mid-times, slopes chosen to stay inside the
    // time interval across the whole spatial extent.
    std::vector<AffineSlice> sections;
    const double width = u.xs.back() - u.xs.front();
    for (double t0 : {0.3, 0.5, 0.7}) {
        const double vmax = 0.9 * std::min(t0, 1.0 - t0) / width;
        for (double f : {-1.0, -0.5, 0.5, 1.0}) {
            // shift so the slice passes through t0 at the domain midpoint
            const double v = f * vmax;
            sections.push_back(AffineSlice{t0 - v * 0.5 * (u.xs.front() + u.xs.back()), {v}});
        }
    }
    rep.convexity = discrete_convexity_report(u, sections);

    rep.time_convexity_ok = rep.convexity.min_second_diff_t >= -tol / (dt * dt);
    const double dmin = std::min(dt, dx);
    if (c >= kHalfPi)
        rep.joint_convexity_ok = rep.convexity.min_joint_hessian_eig >= -tol / (dmin * dmin);
    rep.sheared_slices_ok =
        rep.convexity.min_plane_laplacian >= std::tan(c - kHalfPi) - tol / (dx * dx);

    rep.min_principle = extract_min_principle(u, c, tol).second;
    return rep;
}

}  // namespace dslkit
