#include <catch_amalgamated.hpp>

#include <cmath>

#include "dslkit/angles.hpp"
#include "dslkit/sampling.hpp"
#include "dslkit/suites.hpp"

using namespace dslkit;
using Catch::Approx;

TEST_CASE("lifted angle basics") {
    CHECK(lifted_angle(SymMatrix(3)).radians == Approx(0.0).margin(1e-15));
    CHECK(lifted_angle(SymMatrix::identity(2)).radians == Approx(kHalfPi).margin(1e-14));

    // diag(tan(t0) I_{n-1}, tan(t1)) -> (n-1) t0 + t1.
    const int n = 3;
    const double t0 = kHalfPi - 0.025, t1 = 0.15 - kHalfPi;
    SymMatrix D(n);
    D(0, 0) = std::tan(t0);
    D(1, 1) = std::tan(t0);
    D(2, 2) = std::tan(t1);
    CHECK(lifted_angle(D).radians == Approx(2.0 * t0 + t1).margin(1e-12));
}

TEST_CASE("lifted angle stays strictly inside its range") {
    for (uint64_t i = 0; i < 300; ++i) {
        const int n = 1 + static_cast<int>(i % 4);
        const auto fam = static_cast<MatrixFamily>(i % 3);
        const double theta = lifted_angle(sample_sym(n, 31, fam, i)).radians;
        CHECK(std::abs(theta) < n * kHalfPi);
    }
}

TEST_CASE("singular class membership") {
    SpaceTimeMatrix S(2);
    S.a_plus(0, 0) = 5.0;
    S.a_plus(1, 0) = -1.0;
    CHECK(in_singular_class(S, 0.0));

    SpaceTimeMatrix A = S;
    A.a00 = 1e-3;
    CHECK_FALSE(in_singular_class(A, 1e-12));

    SpaceTimeMatrix B = S;
    B.a_vec[0] = 1.0;  // the coupling vector also has to vanish
    CHECK_FALSE(in_singular_class(B, 1e-12));
}

TEST_CASE("spectral path: defining cases") {
    SECTION("singular class uses the one-sided value") {
        SpaceTimeMatrix S(2);
        S.a_plus(0, 0) = 1.0;
        S.a_plus(1, 1) = -2.0;
        const AngleValue v = spacetime_angle_spectral(S);
        CHECK(v.path == AnglePath::SingularClass);
        CHECK(v.radians == Approx(lifted_angle(S.a_plus).radians + kHalfPi).margin(1e-14));
    }
    SECTION("diagonal quadratic family") {
        const int n = 3;
        const double eps = 0.05, delta = 0.1, eta = 1.0;
        const SpaceTimeMatrix A = golden_quadratic_hessian(n, eps, delta, eta);
        const double t0 = kHalfPi - eps / (n - 1), t1 = eps + delta - kHalfPi;
        CHECK(spacetime_angle_spectral(A).radians ==
              Approx(kHalfPi + (n - 1) * t0 + t1).margin(1e-9));
    }
    SECTION("pure coupling in 1+1 dims sums to zero") {
        SpaceTimeMatrix A(1);
        A.a_vec[0] = 1.0;
        CHECK(spacetime_angle_spectral(A).radians == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("schur path: defining cases") {
    SymMatrix P(2);
    P(0, 0) = 0.4;
    P(0, 1) = -0.3;
    P(1, 1) = 1.1;
    const double base = lifted_angle(P).radians;

    SECTION("pure time entry adds +- pi/2") {
        SpaceTimeMatrix A(2);
        A.a_plus = P;
        A.a00 = 1.0;
        CHECK(spacetime_angle_schur(A).radians == Approx(base + kHalfPi).margin(1e-13));
        A.a00 = -1.0;
        CHECK(spacetime_angle_schur(A).radians == Approx(base - kHalfPi).margin(1e-13));
    }
    SECTION("pure coupling in 1+1 dims") {
        SpaceTimeMatrix A(1);
        A.a_vec[0] = 1.0;
        CHECK(spacetime_angle_schur(A).radians == Approx(0.0).margin(1e-14));
    }
    SECTION("rejects the singular class") {
        SpaceTimeMatrix S(2);
        S.a_plus = P;
        CHECK_THROWS_AS(spacetime_angle_schur(S), SingularClassInput);
    }
}

TEST_CASE("dispatcher cross-checks the two paths") {
    for (uint64_t i = 0; i < 400; ++i) {
        const int n = 1 + static_cast<int>(i % 4);
        const SpaceTimeMatrix A = sample_spacetime(n, 7, detail::mixed_family(i % 3), i);
        const AngleValue v = spacetime_angle(A);
        REQUIRE(v.certified_interval.has_value());
        CHECK((*v.certified_interval)[1] - (*v.certified_interval)[0] <= defaults::certified_width);
        CHECK(v.path == AnglePath::Schur);
    }
}

TEST_CASE("dispatcher on the singular class and the fixture") {
    SpaceTimeMatrix S(3);
    S.a_plus(0, 0) = 0.3;
    S.a_plus(1, 1) = -0.7;
    S.a_plus(2, 2) = 2.0;
    const AngleValue v = spacetime_angle(S);
    CHECK(v.path == AnglePath::SingularClass);
    CHECK(v.radians == Approx(lifted_angle(S.a_plus).radians + kHalfPi).margin(1e-14));

    // 2+1 dimensional fixture with unit time curvature.
    const double eps = 0.1, delta = 0.1, eta = 1.0;
    const SpaceTimeMatrix A = golden_quadratic_hessian(2, eps, delta, eta);
    const double t0 = kHalfPi - eps, t1 = eps + delta - kHalfPi;
    CHECK(spacetime_angle(A).radians == Approx(kHalfPi + t0 + t1).margin(1e-9));
}

TEST_CASE("rotation invariance of both angles") {
    Rng rng(171);
    for (uint64_t i = 0; i < 200; ++i) {
        const int n = 1 + static_cast<int>(i % 4);
        const SymMatrix B = sample_sym(n, 5, MatrixFamily::Gaussian, i);
        const auto U = random_orthogonal(n, rng);
        CHECK(std::abs(lifted_angle(conjugate(B, U)).radians - lifted_angle(B).radians) < 1e-9);

        const SpaceTimeMatrix A = sample_spacetime(n, 5, MatrixFamily::Gaussian, i);
        const SpaceTimeMatrix R = detail::rotate_spacetime(A, U);
        CHECK(std::abs(spacetime_angle(R).radians - spacetime_angle(A).radians) < 1e-9);
    }
}

TEST_CASE("oddness off the singular class") {
    for (uint64_t i = 0; i < 300; ++i) {
        const int n = 1 + static_cast<int>(i % 3);
        const SpaceTimeMatrix A = sample_spacetime(n, 29, MatrixFamily::Gaussian, i);
        SpaceTimeMatrix N(n);
        N.a00 = -A.a00;
        for (int k = 0; k < n; ++k) N.a_vec[static_cast<size_t>(k)] = -A.a_vec[static_cast<size_t>(k)];
        N.a_plus = -A.a_plus;
        CHECK(std::abs(spacetime_angle(N).radians + spacetime_angle(A).radians) < 1e-9);
    }
}

TEST_CASE("monotonicity under positive semidefinite shifts") {
    Rng rng(404);
    for (uint64_t i = 0; i < 200; ++i) {
        const int n = 1 + static_cast<int>(i % 3);
        const SpaceTimeMatrix A = sample_spacetime(n, 61, MatrixFamily::Gaussian, i);
        // P = G^T G is positive semidefinite.
        std::vector<double> G(static_cast<size_t>(n + 1) * (n + 1));
        for (auto& g : G) g = rng.gaussian();
        SymMatrix P(n + 1);
        for (int r = 0; r < n + 1; ++r)
            for (int c = 0; c <= r; ++c) {
                double s = 0.0;
                for (int k = 0; k < n + 1; ++k)
                    s += G[static_cast<size_t>(k) * (n + 1) + r] * G[static_cast<size_t>(k) * (n + 1) + c];
                P(r, c) = s;
            }
        const SymMatrix shifted = A.assemble() + P;
        CHECK(spacetime_angle(SpaceTimeMatrix::split(shifted)).radians >=
              spacetime_angle(A).radians - 1e-9);
    }
}

TEST_CASE("one-sided continuity at the singular class") {
    for (uint64_t i = 0; i < 60; ++i) {
        const int n = 1 + static_cast<int>(i % 3);
        const SymMatrix Aplus = sample_sym(n, 83, MatrixFamily::Gaussian, i);
        const double base = lifted_angle(Aplus).radians;
        for (int k = 4; k <= 8; ++k) {
            const double eps = std::pow(10.0, -k);
            SpaceTimeMatrix up(n);
            up.a_plus = Aplus;
            up.a00 = eps;
            CHECK(std::abs(spacetime_angle(up).radians - (base + kHalfPi)) < 1e-6);
            up.a00 = -eps;
            CHECK(std::abs(spacetime_angle(up).radians - (base - kHalfPi)) < 1e-6);
        }
        // The value at the class itself is the upper one-sided limit.
        SpaceTimeMatrix at(n);
        at.a_plus = Aplus;
        CHECK(spacetime_angle(at).radians == Approx(base + kHalfPi).margin(1e-14));
    }
}

TEST_CASE("near-singular band flagging") {
    SpaceTimeMatrix A(2);
    A.a_plus(0, 0) = 1.0;
    A.a00 = 1e-10;  // inside [1e-12, 1e-8)
    CHECK(near_singular_class(A));
    CHECK(spacetime_angle(A).near_singular);
    A.a00 = 1e-6;  // outside the band
    CHECK_FALSE(near_singular_class(A));
    A.a00 = 1e-13;  // below: classified as singular instead
    CHECK_FALSE(near_singular_class(A));
    CHECK(in_singular_class(A, defaults::singular_class_tol));
}
