#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace dslkit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Module-level tolerance defaults. Functions that compare against a
/// tolerance take it as a parameter with one of these as default, so
/// callers can tighten or relax per call site.
namespace defaults {
inline constexpr double angle_tol = 1e-9;          // angle comparisons
inline constexpr double eigen_residual = 1e-12;    // polynomial eigensolver backward error
inline constexpr double cross_check_tol = 1e-7;    // spectral vs Schur mismatch fault level
inline constexpr double certified_width = 1e-8;    // expected |spectral - Schur|
inline constexpr double singular_class_tol = 1e-12;// below: classified as the singular class
inline constexpr double near_singular_band = 1e-8; // [singular_class_tol, band): flagged
inline constexpr double linear_solve_tol = 1e-10;  // relative residual of complex solves
inline constexpr double second_diff_tol = 1e-8;    // convexity certificates, scaled by 1/dx^2
inline constexpr double corner_tol = 1e-9;         // boundary-data corner compatibility
}  // namespace defaults

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct BranchCutViolation : std::runtime_error {
    explicit BranchCutViolation(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct SingularClassInput : std::runtime_error {
    explicit SingularClassInput(const std::string& what) : std::runtime_error(what) {}
};

struct CrossCheckMismatch : std::runtime_error {
    explicit CrossCheckMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct HypothesisViolation : std::runtime_error {
    explicit HypothesisViolation(const std::string& what) : std::runtime_error(what) {}
};

struct CornerMismatch : std::runtime_error {
    explicit CornerMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct BisectionFailure : std::runtime_error {
    explicit BisectionFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dslkit
