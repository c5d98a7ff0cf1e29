#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "dslkit/common.hpp"

namespace dslkit {

/// All simultaneous roots of a complex-coefficient polynomial
///   p(z) = c[0] + c[1] z + ... + c[d] z^d
/// by Aberth-Ehrlich iteration with Newton polishing. Degrees here stay
/// small (d <= 17), where the method is fast and reliable.
struct PolyRootResult {
    std::vector<std::complex<double>> roots;
    double residual = 0.0;  // max relative backward evaluation error over roots
    int iterations = 0;
};

namespace detail {

/// Horner evaluation of p and p' at z.
inline void horner(const std::vector<std::complex<double>>& c, std::complex<double> z,
                   std::complex<double>& p, std::complex<double>& dp) {
    p = c.back();
    dp = {0.0, 0.0};
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
        dp = dp * z + p;
        p = p * z + c[static_cast<size_t>(k)];
    }
}

/// Magnitude of the evaluated terms, the scale against which |p(z)| is a
/// backward error.
inline double horner_scale(const std::vector<std::complex<double>>& c, std::complex<double> z) {
    const double az = std::abs(z);
    double s = std::abs(c.back());
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k)
        s = s * az + std::abs(c[static_cast<size_t>(k)]);
    return s;
}

}  // namespace detail

inline PolyRootResult aberth_roots(std::vector<std::complex<double>> coeffs, int max_iter = 400) {
    // Strip (exactly) zero leading coefficients.
    while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    if (coeffs.size() <= 1) throw std::invalid_argument("aberth_roots: zero polynomial");

    PolyRootResult result;

    // Factor out exact roots at the origin so tiny residual roots of the
    // underlying problem are not polluted by them.
    size_t zero_roots = 0;
    while (zero_roots + 1 < coeffs.size() && std::abs(coeffs[zero_roots]) == 0.0) ++zero_roots;
    for (size_t k = 0; k < zero_roots; ++k) result.roots.emplace_back(0.0, 0.0);
    if (zero_roots > 0) coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(zero_roots));

    const int d = static_cast<int>(coeffs.size()) - 1;
    if (d == 0) return result;

    // Initial guesses on a circle of Cauchy-bound radius around the root
    // centroid, with an angular offset to break symmetry.
    const std::complex<double> center = -coeffs[static_cast<size_t>(d) - 1] /
                                        (static_cast<double>(d) * coeffs.back());
    double radius = 0.0;
    for (int k = 0; k < d; ++k)
        radius = std::max(radius, std::pow(std::abs(coeffs[static_cast<size_t>(k)] / coeffs.back()),
                                           1.0 / (d - k)));
    radius = std::max(radius, 1e-30);

    std::vector<std::complex<double>> z(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double ang = 2.0 * kPi * i / d + 0.35;
        z[static_cast<size_t>(i)] = center + radius * std::complex<double>(std::cos(ang), std::sin(ang));
    }

    // A root is done when its backward evaluation error hits rounding level;
    // multiple roots split into clusters whose members all satisfy this even
    // though their forward accuracy is limited to ~eps^(1/multiplicity).
    constexpr double eps = 2.220446049250313e-16;
    std::vector<bool> done(static_cast<size_t>(d), false);
    int iter = 0;
    bool all_done = false;
    for (; iter < max_iter && !all_done; ++iter) {
        all_done = true;
        double max_step = 0.0;
        for (int i = 0; i < d; ++i) {
            if (done[static_cast<size_t>(i)]) continue;
            std::complex<double> p, dp;
            detail::horner(coeffs, z[static_cast<size_t>(i)], p, dp);
            if (std::abs(p) <=
                4.0 * d * eps * detail::horner_scale(coeffs, z[static_cast<size_t>(i)])) {
                done[static_cast<size_t>(i)] = true;
                continue;
            }
            all_done = false;
            std::complex<double> newton = (dp != std::complex<double>{0.0, 0.0})
                                              ? p / dp
                                              : std::complex<double>{1e-8, 1e-8};
            std::complex<double> repulsion{0.0, 0.0};
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                const std::complex<double> diff = z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)];
                if (std::abs(diff) > 0.0) repulsion += 1.0 / diff;
            }
            const std::complex<double> denom = 1.0 - newton * repulsion;
            const std::complex<double> step =
                (std::abs(denom) > 0.0) ? newton / denom : newton;
            z[static_cast<size_t>(i)] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[static_cast<size_t>(i)])));
        }
        if (!all_done && max_step < 1e-16) break;  // stagnated at rounding level
    }
    if (iter == max_iter && !all_done)
        throw NonConvergence("aberth_roots: no convergence after max iterations");

    // Newton polish; clusters from multiple roots keep machine-level
    // backward error even when forward accuracy is limited.
    for (auto& root : z) {
        for (int k = 0; k < 3; ++k) {
            std::complex<double> p, dp;
            detail::horner(coeffs, root, p, dp);
            if (std::abs(dp) == 0.0) break;
            const std::complex<double> step = p / dp;
            if (!(std::abs(step) < 1.0 + std::abs(root))) break;
            root -= step;
        }
    }

    double residual = 0.0;
    for (const auto& root : z) {
        std::complex<double> p, dp;
        detail::horner(coeffs, root, p, dp);
        const double scale = detail::horner_scale(coeffs, root);
        if (scale > 0.0) residual = std::max(residual, std::abs(p) / scale);
    }

    result.roots.insert(result.roots.end(), z.begin(), z.end());
    result.residual = residual;
    result.iterations = iter;
    return result;
}

}  // namespace dslkit
