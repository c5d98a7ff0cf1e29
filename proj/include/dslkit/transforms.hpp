#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dslkit/common.hpp"
#include "dslkit/grid.hpp"
#include "dslkit/linalg.hpp"
#include "dslkit/matrix.hpp"

namespace dslkit {

/// The affine slice map x -> (t0 + V.x, x) embedding space into space-time.
struct AffineSlice {
    double t0 = 0.0;
    std::vector<double> V;
};

/// Pullback of a space-time matrix under the slice map with direction V:
///   a00 V V^T + V a^T + a V^T + A+.
inline SymMatrix pullback_slice(const SpaceTimeMatrix& A, std::span<const double> V) {
    const int n = A.space_dim();
    if (static_cast<int>(V.size()) != n)
        throw std::invalid_argument("pullback_slice: V dimension mismatch");
    SymMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            r(i, j) = A.a00 * V[static_cast<size_t>(i)] * V[static_cast<size_t>(j)] +
                      V[static_cast<size_t>(i)] * A.a_vec[static_cast<size_t>(j)] +
                      A.a_vec[static_cast<size_t>(i)] * V[static_cast<size_t>(j)] + A.a_plus(i, j);
    return r;
}

/// Conjugation by the time shear [[1,0],[V,I]]: keeps a00, maps the coupling
/// vector to a00 V + a, and the spatial block to the slice pullback. The
/// spatial block shares arithmetic with pullback_slice bit for bit.
inline SpaceTimeMatrix shear_conjugate(const SpaceTimeMatrix& A, std::span<const double> V) {
    const int n = A.space_dim();
    if (static_cast<int>(V.size()) != n)
        throw std::invalid_argument("shear_conjugate: V dimension mismatch");
    std::vector<double> coupled(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        coupled[static_cast<size_t>(i)] = A.a00 * V[static_cast<size_t>(i)] + A.a_vec[static_cast<size_t>(i)];
    return SpaceTimeMatrix{A.a00, std::move(coupled), pullback_slice(A, V)};
}

/// A twice differentiable function of (t, x) together with its analytic
/// Hessian, for consistency checks of the pullback formula.
struct C2Function {
    std::function<double(double, std::span<const double>)> value;
    std::function<SpaceTimeMatrix(double, std::span<const double>)> hessian;
};

/// Max-norm discrepancy between the finite-difference Hessian of the sliced
/// function u(t0 + V.x, x) and the slice pullback of the analytic Hessian.
/// O(h^2) for smooth u, exact (up to rounding) for quadratics.
inline double hessian_pullback_check(const C2Function& u, double t0, std::span<const double> V,
                                     std::span<const double> x, double h) {
    const int n = static_cast<int>(x.size());
    if (static_cast<int>(V.size()) != n)
        throw std::invalid_argument("hessian_pullback_check: V dimension mismatch");

    auto sliced = [&](std::span<const double> p) {
        double t = t0;
        for (int i = 0; i < n; ++i) t += V[static_cast<size_t>(i)] * p[static_cast<size_t>(i)];
        return u.value(t, p);
    };

    std::vector<double> p(x.begin(), x.end());
    const double base = sliced(p);
    SymMatrix fd(n);
    for (int i = 0; i < n; ++i) {
        p[static_cast<size_t>(i)] += h;
        const double up = sliced(p);
        p[static_cast<size_t>(i)] -= 2.0 * h;
        const double dn = sliced(p);
        p[static_cast<size_t>(i)] += h;
        fd(i, i) = (up - 2.0 * base + dn) / (h * h);
        for (int j = 0; j < i; ++j) {
            p[static_cast<size_t>(i)] += h;
            p[static_cast<size_t>(j)] += h;
            const double pp = sliced(p);
            p[static_cast<size_t>(j)] -= 2.0 * h;
            const double pm = sliced(p);
            p[static_cast<size_t>(i)] -= 2.0 * h;
            const double mm = sliced(p);
            p[static_cast<size_t>(j)] += 2.0 * h;
            const double mp = sliced(p);
            p[static_cast<size_t>(i)] += h;
            p[static_cast<size_t>(j)] -= h;
            fd(i, j) = (pp - pm - mp + mm) / (4.0 * h * h);
        }
    }

    double t = t0;
    for (int i = 0; i < n; ++i) t += V[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    const SymMatrix analytic = pullback_slice(u.hessian(t, x), V);

    double err = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) err = std::max(err, std::abs(fd(i, j) - analytic(i, j)));
    return err;
}

/// Downward partial Legendre transform u*(tau, x) = min_t [u(t, x) - t*tau],
/// minimized exactly over the discrete t-grid. Output axes are (tau, x).
inline GridFunction2D legendre_down(const GridFunction2D& u, std::vector<double> taus) {
    GridFunction2D out(std::move(taus), u.xs);
    for (int k = 0; k < out.nt(); ++k) {
        const double tau = out.ts[static_cast<size_t>(k)];
        for (int ix = 0; ix < u.nx(); ++ix) {
            double best = std::numeric_limits<double>::infinity();
            for (int it = 0; it < u.nt(); ++it)
                best = std::min(best, u.at(it, ix) - u.ts[static_cast<size_t>(it)] * tau);
            out.at(k, ix) = best;
        }
    }
    return out;
}

/// Upward transform v*(t, x) = max_tau [v(tau, x) + t*tau] over the discrete
/// tau-grid; inverse of legendre_down on t-convex data up to grid error.
inline GridFunction2D legendre_up(const GridFunction2D& v, std::vector<double> ts) {
    GridFunction2D out(std::move(ts), v.xs);
    for (int it = 0; it < out.nt(); ++it) {
        const double t = out.ts[static_cast<size_t>(it)];
        for (int ix = 0; ix < v.nx(); ++ix) {
            double best = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < v.nt(); ++k)
                best = std::max(best, v.at(k, ix) + t * v.ts[static_cast<size_t>(k)]);
            out.at(it, ix) = best;
        }
    }
    return out;
}

/// Discrete curvature summary of a grid function. All entries are second
/// derivative estimates (already divided by the squared step), so convexity
/// certificates compare them against thresholds of the form m - tol/dx^2.
struct ConvexityReport {
    double min_second_diff_t = std::numeric_limits<double>::infinity();
    double min_second_diff_x = std::numeric_limits<double>::infinity();
    double min_joint_hessian_eig = std::numeric_limits<double>::infinity();
    /// Min second difference along supplied sheared sections x -> u(t0+v*x, x),
    /// the discrete form of restriction to a non-time-like plane section.
    double min_plane_laplacian = std::numeric_limits<double>::infinity();
};

inline ConvexityReport discrete_convexity_report(const GridFunction2D& u,
                                                 std::span<const AffineSlice> sections = {}) {
    ConvexityReport r;
    const double dt = u.dt();
    const double dx = u.dx();

    for (int it = 1; it + 1 < u.nt(); ++it)
        for (int ix = 0; ix < u.nx(); ++ix)
            r.min_second_diff_t = std::min(
                r.min_second_diff_t, (u.at(it + 1, ix) - 2.0 * u.at(it, ix) + u.at(it - 1, ix)) / (dt * dt));

    for (int it = 0; it < u.nt(); ++it)
        for (int ix = 1; ix + 1 < u.nx(); ++ix)
            r.min_second_diff_x = std::min(
                r.min_second_diff_x, (u.at(it, ix + 1) - 2.0 * u.at(it, ix) + u.at(it, ix - 1)) / (dx * dx));

    for (int it = 1; it + 1 < u.nt(); ++it)
        for (int ix = 1; ix + 1 < u.nx(); ++ix) {
            const double utt = (u.at(it + 1, ix) - 2.0 * u.at(it, ix) + u.at(it - 1, ix)) / (dt * dt);
            const double uxx = (u.at(it, ix + 1) - 2.0 * u.at(it, ix) + u.at(it, ix - 1)) / (dx * dx);
            const double utx = (u.at(it + 1, ix + 1) - u.at(it + 1, ix - 1) - u.at(it - 1, ix + 1) +
                                u.at(it - 1, ix - 1)) /
                               (4.0 * dt * dx);
            const double mean = 0.5 * (utt + uxx);
            const double gap = std::sqrt(0.25 * (utt - uxx) * (utt - uxx) + utx * utx);
            r.min_joint_hessian_eig = std::min(r.min_joint_hessian_eig, mean - gap);
        }

    for (const AffineSlice& s : sections) {
        if (s.V.size() != 1)
            throw std::invalid_argument("discrete_convexity_report: sections need scalar direction");
        const double v = s.V.front();
        for (int ix = 1; ix + 1 < u.nx(); ++ix) {
            const double xm = u.xs[static_cast<size_t>(ix - 1)];
            const double x0 = u.xs[static_cast<size_t>(ix)];
            const double xp = u.xs[static_cast<size_t>(ix + 1)];
            const double tm = s.t0 + v * xm;
            const double t0 = s.t0 + v * x0;
            const double tp = s.t0 + v * xp;
            if (tm < u.ts.front() || tm > u.ts.back() || tp < u.ts.front() || tp > u.ts.back() ||
                t0 < u.ts.front() || t0 > u.ts.back())
                continue;
            const double second =
                (u.eval(tp, xp) - 2.0 * u.eval(t0, x0) + u.eval(tm, xm)) / (dx * dx);
            r.min_plane_laplacian = std::min(r.min_plane_laplacian, second);
        }
    }
    return r;
}

}  // namespace dslkit
