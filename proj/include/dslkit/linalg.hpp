#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "dslkit/common.hpp"
#include "dslkit/matrix.hpp"
#include "dslkit/polyroots.hpp"

namespace dslkit {

/// Eigenvalues of a real symmetric matrix, sorted descending.
///
/// Cyclic Jacobi sweeps until the off-diagonal Frobenius norm falls below
/// 1e-14 * ||A||_F. Unconditionally convergent and accurate at small n.
inline std::vector<double> eig_sym(const SymMatrix& A) {
    const int n = A.dim();
    std::vector<double> m(static_cast<size_t>(n) * n);
    auto at = [&](int i, int j) -> double& { return m[static_cast<size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) at(i, j) = A(i, j);

    const double norm = A.frobenius_norm();
    const double threshold = 1e-14 * std::max(norm, 1e-300);

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2.0 * at(i, j) * at(i, j);
        if (std::sqrt(off) <= threshold) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eigs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eigs[static_cast<size_t>(i)] = at(i, i);
    std::sort(eigs.begin(), eigs.end(), std::greater<>());
    return eigs;
}

/// Small dense complex matrix, row major. Only what the kit needs:
/// LU solves, determinants, and the characteristic polynomial.
class ComplexMatrix {
public:
    explicit ComplexMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

    int dim() const { return n_; }
    std::complex<double>& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    std::complex<double> operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double max_abs() const {
        double v = 0.0;
        for (const auto& z : a_) v = std::max(v, std::abs(z));
        return v;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        const int n = a.n_;
        ComplexMatrix r(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const std::complex<double> aik = a(i, k);
                if (aik == std::complex<double>{0.0, 0.0}) continue;
                for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    std::complex<double> trace() const {
        std::complex<double> t{0.0, 0.0};
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    int n_;
    std::vector<std::complex<double>> a_;
};

namespace detail {

struct ComplexLu {
    ComplexMatrix lu;
    std::vector<int> perm;
    int sign = 1;
};

inline ComplexLu lu_factor(ComplexMatrix m) {
    const int n = m.dim();
    ComplexLu f{std::move(m), std::vector<int>(static_cast<size_t>(n)), 1};
    for (int i = 0; i < n; ++i) f.perm[static_cast<size_t>(i)] = i;
    const double scale = std::max(f.lu.max_abs(), 1e-300);

    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(f.lu(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best <= 1e-14 * scale)
            throw SingularSystem("complex LU: pivot below threshold, matrix near singular");
        if (pivot != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(pivot, j));
            std::swap(f.perm[static_cast<size_t>(k)], f.perm[static_cast<size_t>(pivot)]);
            f.sign = -f.sign;
        }
        for (int i = k + 1; i < n; ++i) {
            const std::complex<double> mult = f.lu(i, k) / f.lu(k, k);
            f.lu(i, k) = mult;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= mult * f.lu(k, j);
        }
    }
    return f;
}

inline std::vector<std::complex<double>> lu_solve(const ComplexLu& f,
                                                  std::span<const std::complex<double>> b) {
    const int n = f.lu.dim();
    std::vector<std::complex<double>> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(f.perm[static_cast<size_t>(i)])];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= f.lu(i, i);
    }
    return x;
}

}  // namespace detail

/// Solves M x = b for complex M. Throws SingularSystem when a pivot
/// collapses or the residual check fails; callers treat that as a signal to
/// fall back to another computation path.
inline std::vector<std::complex<double>> solve_complex_linear(
    const ComplexMatrix& M, std::span<const std::complex<double>> b,
    double rel_tol = defaults::linear_solve_tol) {
    const int n = M.dim();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve_complex_linear: size mismatch");
    const auto f = detail::lu_factor(M);
    auto x = detail::lu_solve(f, b);

    double bnorm = 0.0;
    for (const auto& v : b) bnorm = std::max(bnorm, std::abs(v));
    double rnorm = 0.0;
    for (int i = 0; i < n; ++i) {
        std::complex<double> r = b[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j) r -= M(i, j) * x[static_cast<size_t>(j)];
        rnorm = std::max(rnorm, std::abs(r));
    }
    if (rnorm > rel_tol * std::max(bnorm, 1e-300))
        throw SingularSystem("solve_complex_linear: residual above tolerance");
    return x;
}

/// Determinant by LU; the independent cross-check for the spectral path.
inline std::complex<double> det_complex(const ComplexMatrix& M) {
    try {
        const auto f = detail::lu_factor(M);
        std::complex<double> det{static_cast<double>(f.sign), 0.0};
        for (int i = 0; i < M.dim(); ++i) det *= f.lu(i, i);
        return det;
    } catch (const SingularSystem&) {
        return {0.0, 0.0};
    }
}

/// Characteristic polynomial coefficients of M (monic, degree n) by the
/// Faddeev-LeVerrier recurrence in complex arithmetic. Returned as
/// c[0] + c[1] z + ... + c[n] z^n with c[n] = 1.
inline std::vector<std::complex<double>> char_poly(const ComplexMatrix& M) {
    const int n = M.dim();
    std::vector<std::complex<double>> c(static_cast<size_t>(n) + 1);
    c[static_cast<size_t>(n)] = 1.0;
    ComplexMatrix work = ComplexMatrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        work = M * work;
        const std::complex<double> ck = -work.trace() / static_cast<double>(k);
        c[static_cast<size_t>(n - k)] = ck;
        for (int i = 0; i < n; ++i) work(i, i) += ck;
    }
    return c;
}

/// Principal argument of z, valued in the open interval (-pi, pi).
/// Inputs on the closed negative real axis (or with negligible modulus)
/// are the degenerate case adjacent to the singular class; the caller has
/// to handle those, so they raise BranchCutViolation instead of guessing.
inline double principal_arg(std::complex<double> z, double min_modulus = 1e-300) {
    if (std::imag(z) == 0.0 && std::real(z) <= 0.0)
        throw BranchCutViolation("principal_arg: input on the branch cut (-inf, 0]");
    if (std::abs(z) <= min_modulus)
        throw BranchCutViolation("principal_arg: modulus below underflow threshold");
    return std::arg(z);
}

/// Spectrum of diag(0,1,...,1) + i*A for a space-time matrix A, via the
/// characteristic polynomial and Aberth-Ehrlich roots. The determinant
/// cross-check comes free: the product of the returned values equals the
/// constant coefficient up to sign.
inline ComplexSpectrum eig_complex_spacetime(const SpaceTimeMatrix& A) {
    const SymMatrix full = A.assemble();
    const int d = full.dim();
    ComplexMatrix B(d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) B(i, j) = std::complex<double>(0.0, full(i, j));
        if (i > 0) B(i, i) += 1.0;
    }
    const auto coeffs = char_poly(B);
    auto roots = aberth_roots(coeffs);
    ComplexSpectrum spec{std::move(roots.roots), roots.residual};
    if (spec.residual > defaults::eigen_residual)
        throw NonConvergence("eig_complex_spacetime: root residual above tolerance");
    return spec;
}

/// U^T A U for a general square U given in row-major storage.
inline SymMatrix conjugate(const SymMatrix& A, const std::vector<double>& U) {
    const int n = A.dim();
    if (static_cast<int>(U.size()) != n * n)
        throw std::invalid_argument("conjugate: size mismatch");
    auto u = [&](int i, int j) { return U[static_cast<size_t>(i) * n + j]; };
    // W = A U
    std::vector<double> w(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = A(i, k);
            for (int j = 0; j < n; ++j) w[static_cast<size_t>(i) * n + j] += aik * u(k, j);
        }
    SymMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += u(k, i) * w[static_cast<size_t>(k) * n + j];
            r(i, j) = s;
        }
    return r;
}

}  // namespace dslkit
