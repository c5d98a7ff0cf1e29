#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dslkit/common.hpp"

namespace dslkit {

/// Dense real symmetric matrix with packed lower-triangle storage, so
/// a(i,j) and a(j,i) are the same memory slot and symmetry holds exactly
/// by construction. Sized for desk scale (n <= 16 in practice, not enforced).
class SymMatrix {
public:
    explicit SymMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * (n + 1) / 2, 0.0) {
        if (n < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
    }

    static SymMatrix identity(int n) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static SymMatrix diagonal(std::span<const double> d) {
        SymMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<size_t>(i)];
        return m;
    }

    /// Builds from full row storage; rejects any exact asymmetry.
    static SymMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        const int n = static_cast<int>(rows.size());
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n)
                throw std::invalid_argument("SymMatrix::from_rows: ragged rows");
            for (int j = 0; j <= i; ++j) {
                const double lo = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
                const double hi = rows[static_cast<size_t>(j)][static_cast<size_t>(i)];
                if (lo != hi)
                    throw std::invalid_argument("SymMatrix::from_rows: input not exactly symmetric");
                m(i, j) = lo;
            }
        }
        return m;
    }

    int dim() const { return n_; }

    double& operator()(int i, int j) { return a_[index(i, j)]; }
    double operator()(int i, int j) const { return a_[index(i, j)]; }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    SymMatrix& operator+=(const SymMatrix& other) {
        check_same_dim(other);
        for (size_t k = 0; k < a_.size(); ++k) a_[k] += other.a_[k];
        return *this;
    }

    friend SymMatrix operator+(SymMatrix lhs, const SymMatrix& rhs) {
        lhs += rhs;
        return lhs;
    }

    friend SymMatrix operator-(const SymMatrix& m) {
        SymMatrix r(m.n_);
        for (size_t k = 0; k < m.a_.size(); ++k) r.a_[k] = -m.a_[k];
        return r;
    }

    friend SymMatrix operator*(double s, SymMatrix m) {
        for (double& v : m.a_) v *= s;
        return m;
    }

    /// A + s*I in place.
    void shift_diagonal(double s) {
        for (int i = 0; i < n_; ++i) (*this)(i, i) += s;
    }

    std::vector<std::vector<double>> to_rows() const {
        std::vector<std::vector<double>> rows(static_cast<size_t>(n_),
                                              std::vector<double>(static_cast<size_t>(n_)));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = (*this)(i, j);
        return rows;
    }

    std::span<const double> packed() const { return a_; }

private:
    size_t index(int i, int j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("SymMatrix index");
        if (i < j) std::swap(i, j);
        return static_cast<size_t>(i) * (i + 1) / 2 + static_cast<size_t>(j);
    }

    void check_same_dim(const SymMatrix& other) const {
        if (other.n_ != n_) throw std::invalid_argument("SymMatrix: dimension mismatch");
    }

    int n_;
    std::vector<double> a_;
};

/// An (n+1)x(n+1) real symmetric matrix viewed through its space-time blocks:
/// scalar time-time entry a00, time-space coupling vector, and the n x n
/// spatial block. Reassembly into the full matrix is lossless.
struct SpaceTimeMatrix {
    double a00 = 0.0;
    std::vector<double> a_vec;
    SymMatrix a_plus;

    SpaceTimeMatrix(double a00_, std::vector<double> a_vec_, SymMatrix a_plus_)
        : a00(a00_), a_vec(std::move(a_vec_)), a_plus(std::move(a_plus_)) {
        if (static_cast<int>(a_vec.size()) != a_plus.dim())
            throw std::invalid_argument("SpaceTimeMatrix: coupling vector / block size mismatch");
    }

    explicit SpaceTimeMatrix(int n) : a_vec(static_cast<size_t>(n), 0.0), a_plus(n) {}

    int space_dim() const { return a_plus.dim(); }

    SymMatrix assemble() const {
        const int n = space_dim();
        SymMatrix full(n + 1);
        full(0, 0) = a00;
        for (int i = 0; i < n; ++i) {
            full(i + 1, 0) = a_vec[static_cast<size_t>(i)];
            for (int j = 0; j <= i; ++j) full(i + 1, j + 1) = a_plus(i, j);
        }
        return full;
    }

    static SpaceTimeMatrix split(const SymMatrix& full) {
        if (full.dim() < 2)
            throw std::invalid_argument("SpaceTimeMatrix::split: need dimension >= 2");
        const int n = full.dim() - 1;
        SpaceTimeMatrix st(n);
        st.a00 = full(0, 0);
        for (int i = 0; i < n; ++i) {
            st.a_vec[static_cast<size_t>(i)] = full(i + 1, 0);
            for (int j = 0; j <= i; ++j) st.a_plus(i, j) = full(i + 1, j + 1);
        }
        return st;
    }

    double avec_inf_norm() const {
        double m = 0.0;
        for (double v : a_vec) m = std::max(m, std::abs(v));
        return m;
    }

    double avec_two_norm() const {
        double s = 0.0;
        for (double v : a_vec) s += v * v;
        return std::sqrt(s);
    }
};

/// Eigenvalues of a complex matrix with a backward-error estimate attached.
/// `residual` is the max over roots of |p(root)| relative to the size of the
/// evaluated terms; below defaults::eigen_residual on success.
struct ComplexSpectrum {
    std::vector<std::complex<double>> values;
    double residual = 0.0;
};

}  // namespace dslkit
