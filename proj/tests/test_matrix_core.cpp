#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>

#include "dslkit/linalg.hpp"
#include "dslkit/matrix.hpp"
#include "dslkit/sampling.hpp"

using namespace dslkit;
using Catch::Approx;

namespace {

// Independent determinant oracle for the spectral path: LU on the assembled
// complex matrix.
ComplexMatrix complex_spacetime(const SpaceTimeMatrix& A) {
    const SymMatrix full = A.assemble();
    ComplexMatrix B(full.dim());
    for (int i = 0; i < full.dim(); ++i) {
        for (int j = 0; j < full.dim(); ++j) B(i, j) = std::complex<double>(0.0, full(i, j));
        if (i > 0) B(i, i) += 1.0;
    }
    return B;
}

// Greedy nearest matching of two spectra as multisets; robust against the
// arbitrary ordering of cluster members.
double multiset_distance(std::vector<std::complex<double>> got,
                         std::vector<std::complex<double>> expected) {
    REQUIRE(got.size() == expected.size());
    double worst = 0.0;
    for (const auto& e : expected) {
        size_t best = 0;
        double best_d = std::abs(got[0] - e);
        for (size_t i = 1; i < got.size(); ++i) {
            const double d = std::abs(got[i] - e);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        worst = std::max(worst, best_d);
        got.erase(got.begin() + static_cast<long>(best));
    }
    return worst;
}

}  // namespace

TEST_CASE("eig_sym on diagonal and zero matrices") {
    const double d[] = {3.0, 1.0};
    auto eigs = eig_sym(SymMatrix::diagonal(d));
    REQUIRE(eigs.size() == 2);
    CHECK(eigs[0] == Approx(3.0).margin(1e-14));
    CHECK(eigs[1] == Approx(1.0).margin(1e-14));

    for (double lam : eig_sym(SymMatrix(4))) CHECK(lam == Approx(0.0).margin(1e-15));
}

TEST_CASE("eig_sym off-diagonal 2x2") {
    // [[0,1],[1,0]]: characteristic polynomial l^2 - 1, roots +/-1.
    SymMatrix A(2);
    A(0, 1) = 1.0;
    auto eigs = eig_sym(A);
    CHECK(eigs[0] == Approx(1.0).margin(1e-14));
    CHECK(eigs[1] == Approx(-1.0).margin(1e-14));
}

TEST_CASE("eig_sym is invariant under orthogonal conjugation") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        const SymMatrix A = sample_sym(n, 77, MatrixFamily::Gaussian, static_cast<uint64_t>(trial));
        const auto U = random_orthogonal(n, rng);
        const auto a = eig_sym(A);
        const auto b = eig_sym(conjugate(A, U));
        for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
    }
}

TEST_CASE("complex space-time spectrum of the diagonal quadratic family") {
    // diag(eta, tan(t0) I_{n-1}, tan(t1)) has spectrum
    // {i eta, 1 + i tan(t0) (n-1 times), 1 + i tan(t1)}.
    const int n = 3;
    const double eta = 0.7, t0 = 1.2, t1 = -0.4;
    SpaceTimeMatrix A(n);
    A.a00 = eta;
    A.a_plus(0, 0) = std::tan(t0);
    A.a_plus(1, 1) = std::tan(t0);
    A.a_plus(2, 2) = std::tan(t1);

    const auto spec = eig_complex_spacetime(A);
    REQUIRE(spec.values.size() == 4);
    CHECK(spec.residual < defaults::eigen_residual);

    // The double root at 1 + i tan(t0) splits into a cluster with forward
    // accuracy ~sqrt(eps); backward error stays at rounding level.
    CHECK(multiset_distance(spec.values, {{0.0, eta},
                                          {1.0, std::tan(t0)},
                                          {1.0, std::tan(t0)},
                                          {1.0, std::tan(t1)}}) < 1e-6);
}

TEST_CASE("complex space-time spectrum of the zero matrix") {
    const auto spec = eig_complex_spacetime(SpaceTimeMatrix(3));
    // The eigenvalue 1 has multiplicity 3; the cluster limits forward
    // accuracy to ~eps^(1/3).
    CHECK(multiset_distance(spec.values, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}}) < 1e-4);
}

TEST_CASE("complex space-time spectrum: pure coupling in 1+1 dims") {
    // a00 = 0, a = (1), A+ = (0): det(B - l I) = l^2 - l + 1, roots
    // (1 +/- i sqrt3)/2 by hand.
    SpaceTimeMatrix A(1);
    A.a_vec[0] = 1.0;
    const auto spec = eig_complex_spacetime(A);
    const double s3 = std::sqrt(3.0);
    CHECK(multiset_distance(spec.values, {{0.5, -0.5 * s3}, {0.5, 0.5 * s3}}) < 1e-12);
}

TEST_CASE("space-time spectrum eigenvalue sign facts on random draws") {
    for (uint64_t i = 0; i < 400; ++i) {
        const int n = 1 + static_cast<int>(i % 3);
        const SpaceTimeMatrix A = sample_spacetime(n, 99, MatrixFamily::Gaussian, i);
        const auto spec = eig_complex_spacetime(A);
        for (const auto& lam : spec.values) {
            CHECK(lam.real() >= -1e-10);
            if (A.avec_two_norm() > 1e-8) CHECK(lam.real() > 0.0);
            if (std::abs(A.a00) > 1e-8) CHECK(std::abs(lam) > 1e-10);
        }
    }
}

TEST_CASE("spectrum product matches the LU determinant") {
    for (uint64_t i = 0; i < 300; ++i) {
        const int n = 1 + static_cast<int>(i % 4);
        const SpaceTimeMatrix A = sample_spacetime(n, 123, MatrixFamily::Gaussian, i);
        const auto spec = eig_complex_spacetime(A);
        std::complex<double> prod{1.0, 0.0};
        for (const auto& lam : spec.values) prod *= lam;
        const std::complex<double> det = det_complex(complex_spacetime(A));
        CHECK(std::abs(prod - det) <= 1e-8 * std::max(1.0, std::abs(det)));
    }
}

TEST_CASE("principal_arg basics and failures") {
    CHECK(principal_arg({1.0, 0.0}) == 0.0);
    CHECK(principal_arg({0.0, 2.5}) == Approx(kHalfPi).margin(1e-15));
    const double s3 = std::sqrt(3.0);
    CHECK(principal_arg({0.5, 0.5 * s3}) == Approx(kPi / 3.0).margin(1e-15));
    CHECK_THROWS_AS(principal_arg({-1.0, 0.0}), BranchCutViolation);
    CHECK_THROWS_AS(principal_arg({0.0, 0.0}), BranchCutViolation);
}

TEST_CASE("solve_complex_linear basics") {
    // Identity.
    ComplexMatrix I = ComplexMatrix::identity(3);
    std::vector<std::complex<double>> b{{1.0, 2.0}, {-0.5, 0.25}, {3.0, -1.0}};
    auto x = solve_complex_linear(I, b);
    for (size_t i = 0; i < b.size(); ++i) CHECK(std::abs(x[i] - b[i]) < 1e-14);

    // Scalar division.
    ComplexMatrix M(1);
    M(0, 0) = {1.0, 1.0};
    auto y = solve_complex_linear(M, std::vector<std::complex<double>>{{1.0, 1.0}});
    CHECK(std::abs(y[0] - 1.0) < 1e-14);

    // Diagonal solve against e1.
    const double lams[] = {0.3, -1.2, 2.0};
    ComplexMatrix D(3);
    for (int i = 0; i < 3; ++i) D(i, i) = std::complex<double>(1.0, lams[i]);
    std::vector<std::complex<double>> e1{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    auto z = solve_complex_linear(D, e1);
    CHECK(std::abs(z[0] - 1.0 / std::complex<double>(1.0, lams[0])) < 1e-14);
    CHECK(std::abs(z[1]) < 1e-14);
    CHECK(std::abs(z[2]) < 1e-14);
}

TEST_CASE("solve_complex_linear rejects singular systems") {
    ComplexMatrix M(2);
    M(0, 0) = {1.0, 0.0};
    M(0, 1) = {2.0, 0.0};
    M(1, 0) = {2.0, 0.0};
    M(1, 1) = {4.0, 0.0};
    std::vector<std::complex<double>> b{{1.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(solve_complex_linear(M, b), SingularSystem);
}

TEST_CASE("residual check solves against random systems") {
    Rng rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        ComplexMatrix M(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M(i, j) = {rng.gaussian(), rng.gaussian()};
        std::vector<std::complex<double>> b(static_cast<size_t>(n));
        for (auto& v : b) v = {rng.gaussian(), rng.gaussian()};
        const auto x = solve_complex_linear(M, b);
        double rnorm = 0.0, bnorm = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> r = b[static_cast<size_t>(i)];
            for (int j = 0; j < n; ++j) r -= M(i, j) * x[static_cast<size_t>(j)];
            rnorm = std::max(rnorm, std::abs(r));
            bnorm = std::max(bnorm, std::abs(b[static_cast<size_t>(i)]));
        }
        CHECK(rnorm <= defaults::linear_solve_tol * std::max(bnorm, 1e-300));
    }
}

TEST_CASE("space-time block view reassembles losslessly") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 5);
        const SpaceTimeMatrix A = sample_spacetime(n, 4, MatrixFamily::Gaussian,
                                                   static_cast<uint64_t>(trial));
        const SpaceTimeMatrix back = SpaceTimeMatrix::split(A.assemble());
        CHECK(back.a00 == A.a00);
        for (int i = 0; i < n; ++i) {
            CHECK(back.a_vec[static_cast<size_t>(i)] == A.a_vec[static_cast<size_t>(i)]);
            for (int j = 0; j <= i; ++j) CHECK(back.a_plus(i, j) == A.a_plus(i, j));
        }
    }
}

TEST_CASE("exact symmetry is enforced on construction from rows") {
    std::vector<std::vector<double>> rows{{1.0, 2.0}, {2.0 + 1e-15, 3.0}};
    CHECK_THROWS_AS(SymMatrix::from_rows(rows), std::invalid_argument);
    rows[1][0] = 2.0;
    CHECK_NOTHROW(SymMatrix::from_rows(rows));
}
