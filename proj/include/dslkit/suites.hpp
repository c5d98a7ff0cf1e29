#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dslkit/angles.hpp"
#include "dslkit/common.hpp"
#include "dslkit/envelope.hpp"
#include "dslkit/sampling.hpp"
#include "dslkit/subequations.hpp"
#include "dslkit/transforms.hpp"

namespace dslkit {

/// Named property suites. Each name runs one invariant of the kit over
/// seeded random draws and reports violations instead of throwing.
inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "rotation-invariance", "shear-invariance", "affine-slice-bound", "eigenvalue-lemma",
        "time-slot-sign",      "star-product",     "usc-at-S",           "legendre-involution",
        "rooftop-props",       "solve-and-verify", "min-principle",      "joint-convexity"};
    return names;
}

struct SuiteSpec {
    std::string name;
    std::vector<int> dims = {2};
    long samples = 1000;
    uint64_t seed = 42;
    std::map<std::string, double> tolerances;  // per-suite overrides

    double tol(const std::string& key, double fallback) const {
        auto it = tolerances.find(key);
        return it == tolerances.end() ? fallback : it->second;
    }
};

struct WorstCase {
    std::string input_digest;
    double measured = 0.0;
    double threshold = 0.0;
};

struct VerificationReport {
    SuiteSpec spec;
    bool pass = true;
    long violations = 0;
    std::optional<WorstCase> worst;
    long near_singular_excluded = 0;
    double runtime_ms = 0.0;
};

namespace detail {

inline std::string hex_digest(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string digest_of(const SymMatrix& A, uint64_t index) {
    uint64_t h = fnv1a(&index, sizeof index);
    const auto p = A.packed();
    h = fnv1a(p.data(), p.size() * sizeof(double), h);
    return hex_digest(h);
}

inline std::string digest_of(const SpaceTimeMatrix& A, uint64_t index) {
    return digest_of(A.assemble(), index);
}

/// Collects "measured must not exceed threshold" style checks, tracking the
/// single worst margin. All violations are recorded; no early abort, so the
/// tolerance calibration stays data driven.
struct Accumulator {
    long violations = 0;
    long excluded = 0;
    std::optional<WorstCase> worst;

    void check_upper(const std::string& digest, double measured, double threshold) {
        note(digest, measured, threshold, measured - threshold);
    }
    void check_lower(const std::string& digest, double measured, double threshold) {
        note(digest, measured, threshold, threshold - measured);
    }
    void require(const std::string& digest, bool ok) {
        note(digest, ok ? 1.0 : 0.0, 0.5, ok ? -1.0 : 1.0);
    }

private:
    void note(const std::string& digest, double measured, double threshold, double excess) {
        if (excess > 0.0) ++violations;
        if (!worst || excess > worst_excess_) {
            worst = WorstCase{digest, measured, threshold};
            worst_excess_ = excess;
        }
    }
    double worst_excess_ = -std::numeric_limits<double>::infinity();
};

inline std::vector<double> gaussian_vector(int n, Rng& rng, double scale = 1.0) {
    std::vector<double> v(static_cast<size_t>(n));
    for (auto& x : v) x = scale * rng.gaussian();
    return v;
}

inline SpaceTimeMatrix rotate_spacetime(const SpaceTimeMatrix& A, const std::vector<double>& U) {
    const int n = A.space_dim();
    std::vector<double> W(static_cast<size_t>(n + 1) * (n + 1), 0.0);
    W[0] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            W[static_cast<size_t>(i + 1) * (n + 1) + (j + 1)] = U[static_cast<size_t>(i) * n + j];
    return SpaceTimeMatrix::split(conjugate(A.assemble(), W));
}

inline MatrixFamily mixed_family(uint64_t index) {
    switch (index % 4) {
        case 0: return MatrixFamily::Gaussian;
        case 1: return MatrixFamily::BlockDiagonal;
        case 2: return MatrixFamily::RankOneCoupled;
        default: return MatrixFamily::NearSingularClass;
    }
}

}  // namespace detail

/// Diagonal quadratic Hessian with n-1 steep positive directions and one
/// shallow negative one; its space-time angle is pi/2 + (n-1)*theta0 + theta1
/// in closed form, which makes it the golden numeric fixture.
inline SpaceTimeMatrix golden_quadratic_hessian(int n, double eps, double delta, double eta) {
    if (n < 2) throw std::invalid_argument("golden_quadratic_hessian: need n >= 2");
    const double theta0 = kHalfPi - eps / (n - 1);
    const double theta1 = eps + delta - kHalfPi;
    SpaceTimeMatrix A(n);
    A.a00 = eta;
    for (int i = 0; i + 1 < n; ++i) A.a_plus(i, i) = std::tan(theta0);
    A.a_plus(n - 1, n - 1) = std::tan(theta1);
    return A;
}

inline VerificationReport run_suite(const SuiteSpec& spec) {
    const auto t_start = std::chrono::steady_clock::now();
    VerificationReport report;
    report.spec = spec;
    detail::Accumulator acc;

    auto dim_for = [&](long i) {
        return spec.dims[static_cast<size_t>(i) % spec.dims.size()];
    };

    if (spec.name == "rotation-invariance") {
        const double tol = spec.tol("tol", defaults::angle_tol);
        for (long i = 0; i < spec.samples; ++i) {
            const int n = dim_for(i);
            Rng rng(mix_seed(spec.seed, spec.name, static_cast<uint64_t>(i)));
            const SymMatrix B = sample_sym(n, spec.seed, MatrixFamily::Gaussian, static_cast<uint64_t>(i));
            const auto U = random_orthogonal(n, rng);
            acc.check_upper(detail::digest_of(B, static_cast<uint64_t>(i)),
                            std::abs(lifted_angle(conjugate(B, U)).radians - lifted_angle(B).radians), tol);

            const SpaceTimeMatrix A =
                sample_spacetime(n, spec.seed, MatrixFamily::Gaussian, static_cast<uint64_t>(i));
            if (near_singular_class(A)) {
                ++acc.excluded;
                continue;
            }
            const SpaceTimeMatrix rotated = detail::rotate_spacetime(A, U);
            acc.check_upper(detail::digest_of(A, static_cast<uint64_t>(i)),
                            std::abs(spacetime_angle(rotated).radians - spacetime_angle(A).radians), tol);
        }
    } else if (spec.name == "shear-invariance") {
        const double tol = spec.tol("tol", defaults::certified_width);
        for (long i = 0; i < spec.samples; ++i) {
            const int n = dim_for(i);
            Rng rng(mix_seed(spec.seed, spec.name, static_cast<uint64_t>(i)));
            const SpaceTimeMatrix A =
                sample_spacetime(n, spec.seed, detail::mixed_family(static_cast<uint64_t>(i) % 3),
                                 static_cast<uint64_t>(i));
            const auto V = detail::gaussian_vector(n, rng, 2.0);
            const SpaceTimeMatrix sheared = shear_conjugate(A, V);
            if (near_singular_class(A) || near_singular_class(sheared)) {
                ++acc.excluded;
                continue;
            }
            acc.check_upper(detail::digest_of(A, static_cast<uint64_t>(i)),
                            std::abs(spacetime_angle(sheared).radians - spacetime_angle(A).radians), tol);
        }
    } else if (spec.name == "affine-slice-bound") {
        const double tol = spec.tol("tol", defaults::certified_width);
        for (long i = 0; i < spec.samples; ++i) {
            const int n = dim_for(i);
            const double c = (i % 2 == 0) ? (n - 1) * kHalfPi : n * kHalfPi;
            const DslBranch b(n, c);
            const SpaceTimeMatrix A = sample_in_branch(b, spec.seed, static_cast<uint64_t>(i));
            Rng rng(mix_seed(spec.seed, spec.name, static_cast<uint64_t>(i)));
            const auto V = detail::gaussian_vector(n, rng, 1.5);
            const double theta_slice = lifted_angle(pullback_slice(A, V)).radians;
            const double bound = spacetime_angle(A).radians - kHalfPi;
            acc.check_lower(detail::digest_of(A, static_cast<uint64_t>(i)), theta_slice, bound - tol);
        }
    } else if (spec.name == "eigenvalue-lemma") {
        const double tol = spec.tol("tol", defaults::angle_tol);
        for (long i = 0; i < spec.samples; ++i) {
            const int n = dim_for(i);
            const bool top = (i % 2 == 0) || n == 1;
            const double c = top ? (n - 1) * kHalfPi : (n - 2) * kHalfPi;
            const SymMatrix A = sample_sym_in_branch(SlBranch(n, c), spec.seed, static_cast<uint64_t>(i));
            const auto eigs = eig_sym(A);
            const std::string digest = detail::digest_of(A, static_cast<uint64_t>(i));
            if (top) {
                acc.check_lower(digest, eigs.back(), -tol);
            } else {
                acc.check_lower(digest, eigs[static_cast<size_t>(n) - 2] - std::abs(eigs.back()), -tol);
            }
        }
    } else if (spec.name == "time-slot-sign") {
        const double tol = spec.tol("tol", defaults::angle_tol);
        for (long i = 0; i < spec.samples; ++i) {
            const int n = dim_for(i);
            const double c = (i % 2 == 0) ? (n - 1) * kHalfPi : n * kHalfPi;
            const DslBranch b(n, c);
            const SpaceTimeMatrix A = sample_in_branch(b, spec.seed, static_cast<uint64_t>(i));
            const std::string digest = detail::digest_of(A, static_cast<uint64_t>(i));
            acc.check_lower(digest, A.a00, -tol);
            if (A.avec_two_norm() > 1e-6) acc.check_lower(digest, A.a00, tol);
        }
    } else if (spec.name == "star-product") {
        const double tol = spec.tol("tol", defaults::angle_tol);
        const double band = spec.tol("band", 1e-6);
        for (long i = 0; i < spec.samples; ++i) {
            const int n = dim_for(i);
            const double phases[4] = {(n - 1) * kHalfPi, (n - 1) * kHalfPi + 0.3, n * kHalfPi,
                                      n * kHalfPi + 0.3};
            const DslBranch b(n, phases[(i / 4) % 4]);
            const SpaceTimeMatrix A = sample_spacetime(n, spec.seed, detail::mixed_family(static_cast<uint64_t>(i)),
                                                       static_cast<uint64_t>(i));
            if (near_singular_class(A)) {
                ++acc.excluded;
                continue;
            }
            const double theta = spacetime_angle(A).radians;
            if (std::abs(theta - b.c) < band) {
                ++acc.excluded;
                continue;
            }
            const bool expected = theta >= b.c;
            const auto star = in_star_product(A, b, StarSearchBudget{}, mix_seed(spec.seed, "star-search", static_cast<uint64_t>(i)), tol);
            acc.require(detail::digest_of(A, static_cast<uint64_t>(i)), star.member == expected);
        }
    } else if (spec.name == "usc-at-S") {
        const double tol = spec.tol("tol", 1e-6);
        const double eps = spec.tol("eps", 1e-7);
        for (long i = 0; i < spec.samples; ++i) {
            const int n = dim_for(i);
            const SymMatrix Aplus = sample_sym(n, spec.seed, MatrixFamily::Gaussian, static_cast<uint64_t>(i));
            const double base = lifted_angle(Aplus).radians;
            SpaceTimeMatrix up(n);
            up.a_plus = Aplus;
            up.a00 = eps;
            SpaceTimeMatrix down = up;
            down.a00 = -eps;
            SpaceTimeMatrix at = up;
            at.a00 = 0.0;
            const std::string digest = detail::digest_of(Aplus, static_cast<uint64_t>(i));
            acc.check_upper(digest, std::abs(spacetime_angle(up).radians - (base + kHalfPi)), tol);
            acc.check_upper(digest, std::abs(spacetime_angle(down).radians - (base - kHalfPi)), tol);
            acc.check_upper(digest, std::abs(spacetime_angle(at).radians - (base + kHalfPi)), tol);
        }
    } else if (spec.name == "legendre-involution") {
        for (long i = 0; i < spec.samples; ++i) {
            Rng rng(mix_seed(spec.seed, spec.name, static_cast<uint64_t>(i)));
            const int nt = 33, nx = 9;
            GridFunction2D u(linspace(0.0, 1.0, nt), linspace(-1.0, 1.0, nx));
            for (int ix = 0; ix < nx; ++ix) {
                const double curv = rng.uniform(0.0, 3.0);
                const double center = rng.uniform(0.0, 1.0);
                const double slope = rng.uniform(-2.0, 2.0);
                const double level = rng.uniform(-1.0, 1.0);
                for (int it = 0; it < nt; ++it) {
                    const double t = u.ts[static_cast<size_t>(it)];
                    u.at(it, ix) = curv * (t - center) * (t - center) + slope * t + level;
                }
            }
            double lip = 0.0;
            const double dt = u.dt();
            for (int ix = 0; ix < nx; ++ix)
                for (int it = 0; it + 1 < nt; ++it)
                    lip = std::max(lip, std::abs(u.at(it + 1, ix) - u.at(it, ix)) / dt);
            const auto taus = detail::symmetric_odd_grid(lip + 1.0, 4 * nt);
            const double dtau = taus[1] - taus[0];
            const GridFunction2D back = legendre_up(legendre_down(u, taus), u.ts);
            double err = 0.0;
            for (size_t k = 0; k < u.values.size(); ++k)
                err = std::max(err, std::abs(back.values[k] - u.values[k]));
            uint64_t h = fnv1a(u.values.data(), u.values.size() * sizeof(double));
            acc.check_upper(detail::hex_digest(h), err, 2.0 * (dt + dtau) * std::max(lip, 1.0));
        }
    } else if (spec.name == "rooftop-props") {
        const double tol = spec.tol("tol", defaults::second_diff_tol);
        for (long i = 0; i < spec.samples; ++i) {
            Rng rng(mix_seed(spec.seed, spec.name, static_cast<uint64_t>(i)));
            const int nx = 65;
            const double a = rng.uniform(-1.2, 1.2);
            const double m = std::tan(a);
            const auto xs = linspace(-1.0, 1.0, nx);
            std::vector<double> hx(xs.begin() + 1, xs.end() - 1);
            std::vector<double> hv(hx.size());
            const double amp = rng.uniform(0.2, 1.5);
            const double freq = rng.uniform(1.0, 4.0);
            const double quad = rng.uniform(-2.0, 2.0);
            for (size_t k = 0; k < hx.size(); ++k)
                hv[k] = amp * std::sin(freq * hx[k]) + quad * hx[k] * hx[k];
            RooftopProblem p{-1.0, 1.0, GridFunction1D(hx, hv), rng.uniform(-1.0, 1.0),
                             rng.uniform(-1.0, 1.0), a};
            const GridFunction1D w = rooftop_envelope(p);
            const double dx = xs[1] - xs[0];
            const std::string digest =
                detail::hex_digest(fnv1a(hv.data(), hv.size() * sizeof(double)));

            acc.check_upper(digest, w.values.front() - p.f_left, 1e-12);
            acc.check_upper(digest, w.values.back() - p.f_right, 1e-12);
            double obstacle_excess = -std::numeric_limits<double>::infinity();
            for (size_t k = 0; k < hx.size(); ++k)
                obstacle_excess = std::max(obstacle_excess, w.values[k + 1] - hv[k]);
            acc.check_upper(digest, obstacle_excess, 1e-12);
            double min_d2 = std::numeric_limits<double>::infinity();
            for (size_t k = 1; k + 1 < w.values.size(); ++k)
                min_d2 = std::min(min_d2,
                                  (w.values[k + 1] - 2.0 * w.values[k] + w.values[k - 1]) / (dx * dx));
            acc.check_lower(digest, min_d2, m - tol / (dx * dx));

            // Maximality: bumping any interior node must break an obstacle
            // or the curvature constraint.
            const double bump = 10.0 * tol * dx * dx;
            for (int trial = 0; trial < 32; ++trial) {
                const size_t j = 1 + static_cast<size_t>(rng.next_u64() % (w.values.size() - 2));
                std::vector<double> wb = w.values;
                wb[j] += bump;
                bool violated = wb[j] > (j == 0 ? p.f_left : (j + 1 == w.values.size() ? p.f_right : hv[j - 1]));
                for (size_t k = std::max<size_t>(1, j - 1); !violated && k <= std::min(w.values.size() - 2, j + 1); ++k)
                    violated = (wb[k + 1] - 2.0 * wb[k] + wb[k - 1]) / (dx * dx) < m - tol;
                acc.require(digest, violated);
            }
        }
    } else if (spec.name == "solve-and-verify" || spec.name == "min-principle") {
        for (long i = 0; i < spec.samples; ++i) {
            Rng rng(mix_seed(spec.seed, spec.name, static_cast<uint64_t>(i)));
            const bool top = (i % 2 == 0);
            const double c = top ? rng.uniform(kHalfPi + 0.1, kPi - 0.2)
                                 : rng.uniform(0.15, kHalfPi - 0.1);
            const int nt = 49, nx = 49;
            // Data from a time-convex potential: curvature in t plus a
            // smooth spatial profile and a t-linear spatial modulation.
            const double curv = rng.uniform(0.3, 2.0);
            const double center = rng.uniform(0.2, 0.8);
            const double amp = rng.uniform(0.2, 1.0);
            const double freq = rng.uniform(1.0, 3.0);
            const double mod = rng.uniform(-0.5, 0.5);
            auto data = [&](double t, double x) {
                return curv * (t - center) * (t - center) + amp * std::sin(freq * x) +
                       mod * t * std::cos(x) + 0.5 * x * x;
            };
            DslDirichletProblem p;
            p.xl = -1.0;
            p.xr = 1.0;
            p.c = c;
            p.nt = nt;
            p.nx = nx;
            const auto tg = linspace(0.0, 1.0, nt);
            const auto xg = linspace(p.xl, p.xr, nx);
            std::vector<double> g0(static_cast<size_t>(nx)), g1(static_cast<size_t>(nx));
            std::vector<double> gl(static_cast<size_t>(nt)), gr(static_cast<size_t>(nt));
            for (int k = 0; k < nx; ++k) {
                g0[static_cast<size_t>(k)] = data(0.0, xg[static_cast<size_t>(k)]);
                g1[static_cast<size_t>(k)] = data(1.0, xg[static_cast<size_t>(k)]);
            }
            for (int k = 0; k < nt; ++k) {
                gl[static_cast<size_t>(k)] = data(tg[static_cast<size_t>(k)], p.xl);
                gr[static_cast<size_t>(k)] = data(tg[static_cast<size_t>(k)], p.xr);
            }
            p.g = BoundaryData{GridFunction1D(xg, g0), GridFunction1D(xg, g1),
                               GridFunction1D(tg, gl), GridFunction1D(tg, gr)};
            const GridFunction2D u = solve_dsl_dirichlet(p);
            const std::string digest =
                detail::hex_digest(fnv1a(u.values.data(), u.values.size() * sizeof(double)));
            if (spec.name == "min-principle") {
                acc.require(digest, extract_min_principle(u, c).second.pass);
            } else {
                const SolutionVerification v = verify_dsl_solution(u, c, p.g);
                acc.check_lower(digest, v.subsolution_rate, 0.99);
                acc.require(digest, v.time_convexity_ok);
                if (c >= kHalfPi) acc.require(digest, v.joint_convexity_ok);
                acc.require(digest, v.sheared_slices_ok);
                acc.require(digest, v.min_principle.pass);
            }
        }
    } else if (spec.name == "joint-convexity") {
        const double tol = spec.tol("tol", defaults::angle_tol);
        for (long i = 0; i < spec.samples; ++i) {
            const int n = dim_for(i);
            const DslBranch b(n, n * kHalfPi + 0.2);
            const SpaceTimeMatrix A = sample_in_branch(b, spec.seed, static_cast<uint64_t>(i));
            acc.check_lower(detail::digest_of(A, static_cast<uint64_t>(i)),
                            eig_sym(A.assemble()).back(), -tol);
        }
    } else {
        throw std::invalid_argument("run_suite: unknown suite name '" + spec.name + "'");
    }

    report.violations = acc.violations;
    report.near_singular_excluded = acc.excluded;
    report.worst = acc.worst;
    report.pass = acc.violations == 0;
    report.runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t_start)
                            .count();
    return report;
}

}  // namespace dslkit
