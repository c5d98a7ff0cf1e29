#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "dslkit/common.hpp"
#include "dslkit/linalg.hpp"
#include "dslkit/matrix.hpp"

namespace dslkit {

enum class AnglePath { Spectral, Schur, SingularClass };

inline const char* to_string(AnglePath p) {
    switch (p) {
        case AnglePath::Spectral: return "spectral";
        case AnglePath::Schur: return "schur";
        case AnglePath::SingularClass: return "singular-class";
    }
    return "?";
}

/// A computed lifted angle: the value, which computation path produced it,
/// and (when two independent paths ran) an interval bracketing both.
/// `near_singular` marks inputs inside the warning band around the singular
/// class, where the angle is discontinuous and equality-style tests should
/// not trust the value.
struct AngleValue {
    double radians = 0.0;
    AnglePath path = AnglePath::Spectral;
    std::optional<std::array<double, 2>> certified_interval;
    bool near_singular = false;
};

/// The lifted Lagrangian angle: sum of arctangents of the eigenvalues,
/// valued strictly inside (-n*pi/2, n*pi/2).
inline AngleValue lifted_angle(const SymMatrix& A) {
    double sum = 0.0;
    for (double lam : eig_sym(A)) sum += std::atan(lam);
    return AngleValue{sum, AnglePath::Spectral, std::nullopt, false};
}

/// Membership in the singular class {diag(0, A+)}: both the time-time entry
/// and the coupling vector vanish to within tol.
inline bool in_singular_class(const SpaceTimeMatrix& A, double tol) {
    if (tol < 0.0) throw std::invalid_argument("in_singular_class: tol must be >= 0");
    return std::abs(A.a00) <= tol && A.avec_inf_norm() <= tol;
}

/// True when the input sits in the warning band just outside the singular
/// class: close enough that the discontinuity of the space-time angle makes
/// equality tests unreliable, but not close enough to classify as singular.
inline bool near_singular_class(const SpaceTimeMatrix& A,
                                double class_tol = defaults::singular_class_tol,
                                double band = defaults::near_singular_band) {
    const double m = std::max(std::abs(A.a00), A.avec_inf_norm());
    return m >= class_tol && m < band;
}

/// Lifted space-time Lagrangian angle via the spectrum of diag(0,1,..,1)+iA.
/// Inputs classified as singular use the defining one-sided convention
/// theta_tilde(A+) + pi/2 instead.
inline AngleValue spacetime_angle_spectral(const SpaceTimeMatrix& A) {
    if (in_singular_class(A, defaults::singular_class_tol)) {
        AngleValue v = lifted_angle(A.a_plus);
        v.radians += kHalfPi;
        v.path = AnglePath::SingularClass;
        return v;
    }
    const ComplexSpectrum spec = eig_complex_spacetime(A);
    double sum = 0.0;
    for (const auto& lam : spec.values) sum += principal_arg(lam);
    return AngleValue{sum, AnglePath::Spectral, std::nullopt, near_singular_class(A)};
}

/// Lifted space-time Lagrangian angle via the rank-one update formula:
/// theta_tilde(A+) + arg(i*a00 + a^T (I + i A+)^{-1} a). Rejects singular
/// class inputs, where the formula does not apply.
inline AngleValue spacetime_angle_schur(const SpaceTimeMatrix& A) {
    if (in_singular_class(A, defaults::singular_class_tol))
        throw SingularClassInput("spacetime_angle_schur: input is in the singular class");
    const int n = A.space_dim();
    ComplexMatrix M(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) M(i, j) = std::complex<double>(0.0, A.a_plus(i, j));
        M(i, i) += 1.0;
    }
    std::vector<std::complex<double>> b(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) b[static_cast<size_t>(i)] = A.a_vec[static_cast<size_t>(i)];
    const auto y = solve_complex_linear(M, b);
    std::complex<double> w{0.0, A.a00};
    for (int i = 0; i < n; ++i) w += A.a_vec[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];

    AngleValue base = lifted_angle(A.a_plus);
    // The difference lives in (-pi/2, pi/2]; the block-diagonal case with
    // a00 != 0 attains +/- pi/2 exactly via arg(i*a00).
    const double diff = principal_arg(w);
    return AngleValue{base.radians + diff, AnglePath::Schur, std::nullopt, near_singular_class(A)};
}

/// Dispatcher over the two definitional cases. Off the singular class it
/// computes both independent paths, uses them as cross-checks for each
/// other, and returns the Schur value (cheaper and better conditioned) with
/// the bracketing interval attached. A disagreement beyond cross_check_tol
/// is a numerical fault and raises rather than resolving silently.
inline AngleValue spacetime_angle(const SpaceTimeMatrix& A,
                                  double mismatch_tol = defaults::cross_check_tol) {
    if (in_singular_class(A, defaults::singular_class_tol)) {
        AngleValue v = lifted_angle(A.a_plus);
        v.radians += kHalfPi;
        v.path = AnglePath::SingularClass;
        v.certified_interval = std::array<double, 2>{v.radians, v.radians};
        return v;
    }

    std::optional<AngleValue> schur;
    try {
        schur = spacetime_angle_schur(A);
    } catch (const SingularSystem&) {
        // I + iA+ too ill-conditioned for the solve; spectral path only.
    }
    const AngleValue spectral = spacetime_angle_spectral(A);
    if (!schur) return spectral;

    const double lo = std::min(schur->radians, spectral.radians);
    const double hi = std::max(schur->radians, spectral.radians);
    if (hi - lo > mismatch_tol)
        throw CrossCheckMismatch("spacetime_angle: spectral and Schur paths disagree");
    AngleValue v = *schur;
    v.certified_interval = std::array<double, 2>{lo, hi};
    return v;
}

}  // namespace dslkit
