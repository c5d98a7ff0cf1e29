#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "dslkit/angles.hpp"
#include "dslkit/common.hpp"
#include "dslkit/rng.hpp"
#include "dslkit/transforms.hpp"

namespace dslkit {

/// One branch of the special Lagrangian equation in dimension n: the set of
/// symmetric matrices with lifted angle >= c.
struct SlBranch {
    int n;
    double c;

    SlBranch(int n_, double c_) : n(n_), c(c_) {
        if (n < 1) throw std::invalid_argument("SlBranch: n must be >= 1");
        if (!(std::abs(c) < n * kHalfPi))
            throw std::invalid_argument("SlBranch: phase outside (-n*pi/2, n*pi/2)");
    }
};

enum class DslTier { Top, Second, Inner };

inline const char* to_string(DslTier t) {
    switch (t) {
        case DslTier::Top: return "top";
        case DslTier::Second: return "second";
        case DslTier::Inner: return "inner";
    }
    return "?";
}

/// One branch of the degenerate equation on space-time matrices, with the
/// tier (top / second / inner) derived from the phase.
struct DslBranch {
    int n;
    double c;
    DslTier tier;

    DslBranch(int n_, double c_) : n(n_), c(c_), tier(DslTier::Inner) {
        if (n < 1) throw std::invalid_argument("DslBranch: n must be >= 1");
        if (!(std::abs(c) < (n + 1) * kHalfPi))
            throw std::invalid_argument("DslBranch: phase outside (-(n+1)*pi/2, (n+1)*pi/2)");
        if (c >= n * kHalfPi)
            tier = DslTier::Top;
        else if (c >= (n - 1) * kHalfPi)
            tier = DslTier::Second;
    }
};

inline bool in_F(const SymMatrix& A, const SlBranch& b, double tol = defaults::angle_tol) {
    if (A.dim() != b.n) throw std::invalid_argument("in_F: dimension mismatch");
    return lifted_angle(A).radians >= b.c - tol;
}

inline bool in_Fcal(const SpaceTimeMatrix& A, const DslBranch& b, double tol = defaults::angle_tol) {
    if (A.space_dim() != b.n) throw std::invalid_argument("in_Fcal: dimension mismatch");
    return spacetime_angle(A).radians >= b.c - tol;
}

/// Dirichlet dual of an SL branch. Closed form: the dual of {angle >= c} is
/// {angle >= -c}, by oddness of the lifted angle.
inline bool in_dual_F(const SymMatrix& A, const SlBranch& b, double tol = defaults::angle_tol) {
    if (A.dim() != b.n) throw std::invalid_argument("in_dual_F: dimension mismatch");
    return lifted_angle(A).radians >= -b.c - tol;
}

/// Positive semidefiniteness, via the smallest eigenvalue.
inline bool in_P(const SymMatrix& A, double tol = defaults::angle_tol) {
    return eig_sym(A).back() >= -tol;
}

/// Non-negative trace. The trace is exact arithmetic on stored entries.
inline bool in_T(const SymMatrix& A) { return A.trace() >= 0.0; }

/// Conclusions of the two eigenvalue implications for the top branches:
/// angle >= (n-1)pi/2 forces all eigenvalues nonnegative, and
/// angle >= (n-2)pi/2 forces the second smallest to dominate |smallest|.
/// Each flag is vacuously true when its hypothesis fails.
struct EigenvalueConsequences {
    bool top_branch_psd_ok = true;
    bool second_branch_dominance_ok = true;
    double theta = 0.0;
};

inline EigenvalueConsequences eigenvalue_consequences(const SymMatrix& A,
                                                      double tol = defaults::angle_tol) {
    const int n = A.dim();
    const auto eigs = eig_sym(A);
    EigenvalueConsequences r;
    r.theta = 0.0;
    for (double lam : eigs) r.theta += std::atan(lam);
    if (r.theta >= (n - 1) * kHalfPi) r.top_branch_psd_ok = eigs.back() >= -tol;
    if (n >= 2 && r.theta >= (n - 2) * kHalfPi)
        r.second_branch_dominance_ok = eigs[static_cast<size_t>(n) - 2] >= std::abs(eigs.back()) - tol;
    return r;
}

/// Sign of the time-time slot for members of the top two branches:
/// a00 is nonnegative, and strictly positive when the coupling vector is
/// appreciably nonzero.
struct TimeSlotSign {
    bool a00_nonneg = false;
    bool a00_pos_given_avec = false;
};

inline TimeSlotSign time_slot_sign(const SpaceTimeMatrix& A, const DslBranch& b,
                                   double tol = defaults::angle_tol,
                                   double avec_threshold = 1e-6) {
    if (b.tier == DslTier::Inner)
        throw std::invalid_argument("time_slot_sign: branch must be in the top two tiers");
    if (!in_Fcal(A, b, tol))
        throw HypothesisViolation("time_slot_sign: matrix is not a branch member");
    TimeSlotSign r;
    r.a00_nonneg = A.a00 >= -tol;
    r.a00_pos_given_avec = (A.avec_two_norm() <= avec_threshold) || (A.a00 > tol);
    return r;
}

/// Search effort for the slice-infimum approximation in in_star_product.
struct StarSearchBudget {
    int local_starts = 8;
    int local_iters = 120;
    int box_samples = 512;
    int ray_steps = 40;
};

/// Outcome of a star-product membership test. The infimum over slice
/// directions is approximated by search, so `member == false` comes with a
/// violating witness and is a certificate, while `member == true` is
/// one-sided (the search may have missed a lower slice).
struct StarProductResult {
    bool member = false;
    bool time_clause_ok = false;
    double inf_estimate = 0.0;
    std::vector<double> witness;
};

namespace detail {

inline double slice_angle(const SpaceTimeMatrix& A, std::span<const double> V) {
    return lifted_angle(pullback_slice(A, V)).radians;
}

/// Nelder-Mead on the slice angle, small and derivative free.
inline void nelder_mead_min(const SpaceTimeMatrix& A, std::vector<double> start, double scale,
                            int iters, double& best_value, std::vector<double>& best_arg) {
    const int n = static_cast<int>(start.size());
    std::vector<std::vector<double>> simplex(static_cast<size_t>(n) + 1, start);
    for (int i = 0; i < n; ++i) simplex[static_cast<size_t>(i) + 1][static_cast<size_t>(i)] += scale;
    std::vector<double> value(static_cast<size_t>(n) + 1);
    for (size_t i = 0; i < simplex.size(); ++i) value[i] = slice_angle(A, simplex[i]);

    auto record = [&](double v, const std::vector<double>& arg) {
        if (v < best_value) {
            best_value = v;
            best_arg = arg;
        }
    };
    for (size_t i = 0; i < simplex.size(); ++i) record(value[i], simplex[i]);

    for (int it = 0; it < iters; ++it) {
        // order: lo best, hi worst
        size_t lo = 0, hi = 0, hi2 = 0;
        for (size_t i = 1; i < value.size(); ++i) {
            if (value[i] < value[lo]) lo = i;
            if (value[i] > value[hi]) hi = i;
        }
        for (size_t i = 0; i < value.size(); ++i)
            if (i != hi && value[i] > value[hi2]) hi2 = i;

        std::vector<double> centroid(static_cast<size_t>(n), 0.0);
        for (size_t i = 0; i < simplex.size(); ++i) {
            if (i == hi) continue;
            for (int k = 0; k < n; ++k) centroid[static_cast<size_t>(k)] += simplex[i][static_cast<size_t>(k)];
        }
        for (int k = 0; k < n; ++k) centroid[static_cast<size_t>(k)] /= n;

        auto blend = [&](double w) {
            std::vector<double> p(static_cast<size_t>(n));
            for (int k = 0; k < n; ++k)
                p[static_cast<size_t>(k)] = centroid[static_cast<size_t>(k)] +
                                            w * (centroid[static_cast<size_t>(k)] - simplex[hi][static_cast<size_t>(k)]);
            return p;
        };

        const auto reflected = blend(1.0);
        const double fr = slice_angle(A, reflected);
        record(fr, reflected);
        if (fr < value[lo]) {
            const auto expanded = blend(2.0);
            const double fe = slice_angle(A, expanded);
            record(fe, expanded);
            simplex[hi] = fe < fr ? expanded : reflected;
            value[hi] = std::min(fe, fr);
        } else if (fr < value[hi2]) {
            simplex[hi] = reflected;
            value[hi] = fr;
        } else {
            const auto contracted = blend(-0.5);
            const double fc = slice_angle(A, contracted);
            record(fc, contracted);
            if (fc < value[hi]) {
                simplex[hi] = contracted;
                value[hi] = fc;
            } else {
                for (size_t i = 0; i < simplex.size(); ++i) {
                    if (i == lo) continue;
                    for (int k = 0; k < n; ++k)
                        simplex[i][static_cast<size_t>(k)] =
                            0.5 * (simplex[i][static_cast<size_t>(k)] + simplex[lo][static_cast<size_t>(k)]);
                    value[i] = slice_angle(A, simplex[i]);
                    record(value[i], simplex[i]);
                }
            }
        }
        if (std::abs(value[hi] - value[lo]) < 1e-13) break;
    }
}

}  // namespace detail

/// Membership in the product branch P_1 * F_{c - pi/2}: the time-time slot
/// must be nonnegative, and every slice pullback must land in the shifted
/// SL branch. The quantifier over slice directions is approximated by the
/// critical direction -a/a00 (exact when a00 > 0), ray probes along the
/// coupling vector, box sampling, and multistart local minimization; see
/// StarProductResult for the resulting one-sidedness.
inline StarProductResult in_star_product(const SpaceTimeMatrix& A, const DslBranch& b,
                                         const StarSearchBudget& budget = {},
                                         uint64_t seed = 0x57a2ULL,
                                         double tol = defaults::angle_tol) {
    if (A.space_dim() != b.n) throw std::invalid_argument("in_star_product: dimension mismatch");
    if (b.tier == DslTier::Inner)
        throw std::invalid_argument("in_star_product: branch must be in the top two tiers");

    StarProductResult r;
    r.time_clause_ok = A.a00 >= -tol;
    if (!r.time_clause_ok) {
        r.member = false;
        r.inf_estimate = std::numeric_limits<double>::quiet_NaN();
        return r;
    }

    const int n = A.space_dim();
    const double target = b.c - kHalfPi;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_arg(static_cast<size_t>(n), 0.0);

    auto consider = [&](std::span<const double> V) {
        const double v = detail::slice_angle(A, V);
        if (v < best) {
            best = v;
            best_arg.assign(V.begin(), V.end());
        }
    };

    const std::vector<double> origin(static_cast<size_t>(n), 0.0);
    consider(origin);

    // Critical direction: for a00 > 0 the shear by V* = -a/a00 block
    // diagonalizes and the infimum is attained there exactly.
    if (A.a00 > 0.0) {
        std::vector<double> vstar(static_cast<size_t>(n));
        double vmax = 0.0;
        for (int i = 0; i < n; ++i) {
            vstar[static_cast<size_t>(i)] = -A.a_vec[static_cast<size_t>(i)] / A.a00;
            vmax = std::max(vmax, std::abs(vstar[static_cast<size_t>(i)]));
        }
        if (vmax <= 1e12) consider(vstar);
    }

    const double norm = std::max(A.assemble().frobenius_norm(), 1e-12);
    const double radius = std::min(norm / std::max(A.a00, tol), 1e12);

    // Ray probes along the coupling vector; for a00 near zero the infimum is
    // approached along -a at large scale.
    const double an = A.avec_two_norm();
    if (an > 0.0) {
        double s = 1.0;
        for (int k = 0; k < budget.ray_steps && s <= radius; ++k, s *= 2.0) {
            std::vector<double> v(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = -s * A.a_vec[static_cast<size_t>(i)] / an;
            consider(v);
            for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = -v[static_cast<size_t>(i)];
            consider(v);
        }
    }

    Rng rng(seed);
    for (int k = 0; k < budget.box_samples; ++k) {
        std::vector<double> v(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = rng.uniform(-radius, radius);
        consider(v);
    }

    const double start_scale = 1.0 + norm;
    for (int s = 0; s < budget.local_starts; ++s) {
        std::vector<double> start(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) start[static_cast<size_t>(i)] = start_scale * rng.gaussian();
        detail::nelder_mead_min(A, std::move(start), 0.5 * start_scale, budget.local_iters, best,
                                best_arg);
    }
    // Polish around the best point found, at a scale matched to where it is.
    double best_mag = 0.0;
    for (double v : best_arg) best_mag = std::max(best_mag, std::abs(v));
    detail::nelder_mead_min(A, best_arg, 0.25 * best_mag + 1e-3, 2 * budget.local_iters, best,
                            best_arg);

    r.inf_estimate = best;
    r.witness = best_arg;
    r.member = best >= target - tol;
    return r;
}

/// A 2-dimensional affine plane in R x R^n, given by a base point and two
/// spanning vectors (t, x) with linearly independent directions.
struct AffinePlane2D {
    double t_base = 0.0;
    std::vector<double> x_base;
    double t1 = 0.0;
    std::vector<double> x1;
    double t2 = 0.0;
    std::vector<double> x2;
};

/// Slice coordinates (t0, V) with the plane contained in the graph
/// {(t0 + V.x, x)}.
struct SliceCoords {
    double t0 = 0.0;
    std::vector<double> V;
};

/// Finds slice coordinates for a plane, or nothing when the spatial parts of
/// the spanning vectors are (numerically) dependent -- exactly the planes
/// containing a pure time line, which admit no such graph. V is the
/// minimum-norm solution of the underdetermined 2 x n system, a canonical
/// deterministic choice.
inline std::optional<SliceCoords> plane_to_slice(const AffinePlane2D& H,
                                                 double dependence_tol = 1e-12,
                                                 double residual_tol = 1e-10) {
    const size_t n = H.x1.size();
    if (H.x2.size() != n || H.x_base.size() != n)
        throw std::invalid_argument("plane_to_slice: inconsistent dimensions");

    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        g11 += H.x1[i] * H.x1[i];
        g12 += H.x1[i] * H.x2[i];
        g22 += H.x2[i] * H.x2[i];
    }
    const double det = g11 * g22 - g12 * g12;
    if (!(det > dependence_tol * dependence_tol * std::max(g11 * g22, 1e-300)))
        return std::nullopt;

    // V = X^T (X X^T)^{-1} (t1, t2) for X with rows x1, x2.
    const double c1 = (g22 * H.t1 - g12 * H.t2) / det;
    const double c2 = (g11 * H.t2 - g12 * H.t1) / det;
    SliceCoords sc;
    sc.V.resize(n);
    for (size_t i = 0; i < n; ++i) sc.V[i] = c1 * H.x1[i] + c2 * H.x2[i];

    double vnorm = 0.0;
    for (double v : sc.V) vnorm = std::max(vnorm, std::abs(v));
    const double scale = std::max({1.0, std::abs(H.t1), std::abs(H.t2),
                                   vnorm * std::sqrt(std::max(g11, g22))});
    double r1 = -H.t1, r2 = -H.t2;
    for (size_t i = 0; i < n; ++i) {
        r1 += sc.V[i] * H.x1[i];
        r2 += sc.V[i] * H.x2[i];
    }
    if (std::abs(r1) > residual_tol * scale || std::abs(r2) > residual_tol * scale)
        return std::nullopt;  // too close to containing a time line

    double dot = 0.0;
    for (size_t i = 0; i < n; ++i) dot += sc.V[i] * H.x_base[i];
    sc.t0 = H.t_base - dot;
    return sc;
}

}  // namespace dslkit
