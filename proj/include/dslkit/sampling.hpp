#pragma once

#include <cmath>
#include <string_view>
#include <vector>

#include "dslkit/angles.hpp"
#include "dslkit/common.hpp"
#include "dslkit/linalg.hpp"
#include "dslkit/matrix.hpp"
#include "dslkit/rng.hpp"
#include "dslkit/subequations.hpp"

namespace dslkit {

enum class MatrixFamily { Gaussian, BlockDiagonal, RankOneCoupled, NearSingularClass };

inline const char* to_string(MatrixFamily f) {
    switch (f) {
        case MatrixFamily::Gaussian: return "gaussian";
        case MatrixFamily::BlockDiagonal: return "block-diagonal";
        case MatrixFamily::RankOneCoupled: return "rank-one-coupled";
        case MatrixFamily::NearSingularClass: return "near-singular-class";
    }
    return "?";
}

namespace detail {

inline SymMatrix goe(int n, Rng& rng, double scale = 1.0) {
    SymMatrix A(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) A(i, j) = scale * rng.gaussian();
    return A;
}

}  // namespace detail

/// Deterministic draw: the same (n, seed, family, index) always produces the
/// same matrix, regardless of what else was sampled.
inline SymMatrix sample_sym(int n, uint64_t seed, MatrixFamily family = MatrixFamily::Gaussian,
                            uint64_t index = 0) {
    Rng rng(mix_seed(seed, to_string(family), index));
    switch (family) {
        case MatrixFamily::Gaussian:
            return detail::goe(n, rng);
        case MatrixFamily::BlockDiagonal: {
            SymMatrix A(n);
            for (int i = 0; i < n; ++i) A(i, i) = rng.gaussian();
            return A;
        }
        case MatrixFamily::RankOneCoupled: {
            SymMatrix A = detail::goe(n, rng);
            std::vector<double> v(static_cast<size_t>(n));
            for (auto& x : v) x = rng.gaussian();
            const double w = rng.gaussian();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) A(i, j) += w * v[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
            return A;
        }
        case MatrixFamily::NearSingularClass:
            return detail::goe(n, rng, 1e-8);
    }
    throw std::logic_error("sample_sym: unknown family");
}

inline SpaceTimeMatrix sample_spacetime(int n, uint64_t seed,
                                        MatrixFamily family = MatrixFamily::Gaussian,
                                        uint64_t index = 0) {
    Rng rng(mix_seed(seed, to_string(family), index ^ 0x9144ULL));
    SpaceTimeMatrix A(n);
    switch (family) {
        case MatrixFamily::Gaussian:
            A.a00 = rng.gaussian();
            for (auto& v : A.a_vec) v = rng.gaussian();
            A.a_plus = detail::goe(n, rng);
            return A;
        case MatrixFamily::BlockDiagonal:
            A.a00 = rng.gaussian();
            A.a_plus = detail::goe(n, rng);
            return A;  // coupling vector exactly zero
        case MatrixFamily::RankOneCoupled: {
            A.a00 = rng.gaussian();
            for (auto& v : A.a_vec) v = 2.0 * rng.gaussian();
            A.a_plus = detail::goe(n, rng);
            const double w = rng.gaussian();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j)
                    A.a_plus(i, j) += w * A.a_vec[static_cast<size_t>(i)] * A.a_vec[static_cast<size_t>(j)];
            return A;
        }
        case MatrixFamily::NearSingularClass:
            // Just outside the singular class: tiny time-time entry and
            // coupling, to stress the discontinuity there.
            A.a00 = rng.signed_log_uniform(1e-10, 1e-6);
            for (auto& v : A.a_vec) v = rng.signed_log_uniform(1e-10, 1e-6);
            A.a_plus = detail::goe(n, rng);
            return A;
    }
    throw std::logic_error("sample_spacetime: unknown family");
}

/// Haar-ish random orthogonal matrix from Gram-Schmidt on a Gaussian matrix,
/// row-major storage.
inline std::vector<double> random_orthogonal(int n, Rng& rng) {
    std::vector<double> q(static_cast<size_t>(n) * n);
    for (auto& v : q) v = rng.gaussian();
    auto col = [&](int j, int i) -> double& { return q[static_cast<size_t>(i) * n + j]; };
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < j; ++k) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += col(k, i) * col(j, i);
            for (int i = 0; i < n; ++i) col(j, i) -= dot * col(k, i);
        }
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += col(j, i) * col(j, i);
        norm = std::sqrt(norm);
        if (norm < 1e-12) {  // retry this column from fresh noise
            for (int i = 0; i < n; ++i) col(j, i) = rng.gaussian();
            --j;
            continue;
        }
        for (int i = 0; i < n; ++i) col(j, i) /= norm;
    }
    return q;
}

namespace detail {

/// Fast space-time angle for the shift bisection: the rank-one update path
/// plus the defining one-sided value on the singular class. I + iA+ has
/// eigenvalue moduli >= 1, so the solve cannot fail.
inline double spacetime_angle_for_shift(const SpaceTimeMatrix& A) {
    if (in_singular_class(A, defaults::singular_class_tol))
        return lifted_angle(A.a_plus).radians + kHalfPi;
    return spacetime_angle_schur(A).radians;
}

}  // namespace detail

/// Draws a branch member by shifting a Gaussian draw along the identity:
/// s -> angle(A0 + s I) is monotone, so bisection to a target just inside
/// the branch lands the angle in [c, c + 0.5].
inline SpaceTimeMatrix sample_in_branch(const DslBranch& b, uint64_t seed, uint64_t index = 0) {
    SpaceTimeMatrix A0 = sample_spacetime(b.n, seed, MatrixFamily::Gaussian, index);
    const double upper = (b.n + 1) * kHalfPi;
    const double target = b.c + std::min(0.25, 0.5 * (upper - b.c));

    auto angle_at = [&](double s) {
        SpaceTimeMatrix A = A0;
        A.a00 += s;
        A.a_plus.shift_diagonal(s);
        return detail::spacetime_angle_for_shift(A);
    };

    double lo = 0.0, hi = 0.0;
    const double f0 = angle_at(0.0);
    if (f0 < target) {
        double step = 1.0;
        int k = 0;
        for (; k < 200 && angle_at(step) < target; ++k) step *= 2.0;
        if (k == 200) throw BisectionFailure("sample_in_branch: no upper bracket");
        lo = k == 0 ? 0.0 : step / 2.0;
        hi = step;
    } else {
        double step = -1.0;
        int k = 0;
        for (; k < 200 && angle_at(step) >= target; ++k) step *= 2.0;
        if (k == 200) throw BisectionFailure("sample_in_branch: no lower bracket");
        lo = step;
        hi = k == 0 ? 0.0 : step / 2.0;
    }
    for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        (angle_at(mid) < target ? lo : hi) = mid;
    }

    A0.a00 += hi;
    A0.a_plus.shift_diagonal(hi);
    return A0;
}

/// Same construction for the 1-block branches of the non-degenerate
/// equation: shift until the lifted angle reaches just inside the branch.
inline SymMatrix sample_sym_in_branch(const SlBranch& b, uint64_t seed, uint64_t index = 0) {
    SymMatrix A0 = sample_sym(b.n, seed, MatrixFamily::Gaussian, index ^ 0x51ULL);
    const double upper = b.n * kHalfPi;
    const double target = b.c + std::min(0.25, 0.5 * (upper - b.c));

    auto angle_at = [&](double s) {
        SymMatrix A = A0;
        A.shift_diagonal(s);
        return lifted_angle(A).radians;
    };

    double lo = 0.0, hi = 0.0;
    if (angle_at(0.0) < target) {
        double step = 1.0;
        int k = 0;
        for (; k < 200 && angle_at(step) < target; ++k) step *= 2.0;
        if (k == 200) throw BisectionFailure("sample_sym_in_branch: no upper bracket");
        lo = k == 0 ? 0.0 : step / 2.0;
        hi = step;
    } else {
        double step = -1.0;
        int k = 0;
        for (; k < 200 && angle_at(step) >= target; ++k) step *= 2.0;
        if (k == 200) throw BisectionFailure("sample_sym_in_branch: no lower bracket");
        lo = step;
        hi = k == 0 ? 0.0 : step / 2.0;
    }
    for (int it = 0; it < 48; ++it) {
        const double mid = 0.5 * (lo + hi);
        (angle_at(mid) < target ? lo : hi) = mid;
    }
    A0.shift_diagonal(hi);
    return A0;
}

}  // namespace dslkit
