#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dslkit/common.hpp"

namespace dslkit {

inline std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 2) throw std::invalid_argument("linspace: need at least 2 points");
    std::vector<double> v(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        v[static_cast<size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    v.back() = hi;
    return v;
}

/// Values on strictly increasing abscissae.
struct GridFunction1D {
    std::vector<double> xs;
    std::vector<double> values;

    GridFunction1D() = default;
    GridFunction1D(std::vector<double> xs_, std::vector<double> values_)
        : xs(std::move(xs_)), values(std::move(values_)) {
        if (xs.size() != values.size() || xs.size() < 2)
            throw std::invalid_argument("GridFunction1D: need matching sizes >= 2");
        for (size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i] > xs[i - 1]))
                throw std::invalid_argument("GridFunction1D: abscissae must strictly increase");
    }

    int size() const { return static_cast<int>(xs.size()); }

    /// Piecewise-linear evaluation, clamped to the end values.
    double eval(double x) const {
        if (x <= xs.front()) return values.front();
        if (x >= xs.back()) return values.back();
        size_t hi = 1;
        while (xs[hi] < x) ++hi;
        const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
        return (1.0 - w) * values[hi - 1] + w * values[hi];
    }
};

/// Real values on a uniform rectangular grid, stored row-major with the
/// first axis (time or its Legendre-dual variable) outermost.
struct GridFunction2D {
    std::vector<double> ts;
    std::vector<double> xs;
    std::vector<double> values;  // values[it * xs.size() + ix]

    GridFunction2D() = default;
    GridFunction2D(std::vector<double> ts_, std::vector<double> xs_)
        : ts(std::move(ts_)), xs(std::move(xs_)),
          values(ts.size() * xs.size(), 0.0) {
        validate_axes();
    }
    GridFunction2D(std::vector<double> ts_, std::vector<double> xs_, std::vector<double> values_)
        : ts(std::move(ts_)), xs(std::move(xs_)), values(std::move(values_)) {
        validate_axes();
        if (values.size() != ts.size() * xs.size())
            throw std::invalid_argument("GridFunction2D: value count mismatch");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("GridFunction2D: non-finite value");
    }

    int nt() const { return static_cast<int>(ts.size()); }
    int nx() const { return static_cast<int>(xs.size()); }
    double dt() const { return (ts.back() - ts.front()) / (nt() - 1); }
    double dx() const { return (xs.back() - xs.front()) / (nx() - 1); }

    double& at(int it, int ix) { return values[static_cast<size_t>(it) * xs.size() + static_cast<size_t>(ix)]; }
    double at(int it, int ix) const { return values[static_cast<size_t>(it) * xs.size() + static_cast<size_t>(ix)]; }

    /// Bilinear interpolation, clamped to the domain.
    double eval(double t, double x) const {
        const double ft = std::clamp((t - ts.front()) / dt(), 0.0, static_cast<double>(nt() - 1));
        const double fx = std::clamp((x - xs.front()) / dx(), 0.0, static_cast<double>(nx() - 1));
        const int it = std::min(static_cast<int>(ft), nt() - 2);
        const int ix = std::min(static_cast<int>(fx), nx() - 2);
        const double wt = ft - it;
        const double wx = fx - ix;
        return (1.0 - wt) * ((1.0 - wx) * at(it, ix) + wx * at(it, ix + 1)) +
               wt * ((1.0 - wx) * at(it + 1, ix) + wx * at(it + 1, ix + 1));
    }

private:
    void validate_axes() const {
        // The first axis may be a single point (degenerate transform
        // families); the spatial axis needs at least two.
        if (ts.empty()) throw std::invalid_argument("GridFunction2D: first axis empty");
        if (ts.size() >= 2) check_uniform(ts, "first axis");
        check_uniform(xs, "second axis");
    }

    static void check_uniform(std::span<const double> g, const char* name) {
        if (g.size() < 2) throw std::invalid_argument(std::string("GridFunction2D: ") + name + " too short");
        const double step = (g.back() - g.front()) / static_cast<double>(g.size() - 1);
        if (!(step > 0.0)) throw std::invalid_argument(std::string("GridFunction2D: ") + name + " not increasing");
        const double scale = std::max({std::abs(g.front()), std::abs(g.back()), 1.0});
        for (size_t i = 1; i < g.size(); ++i)
            if (std::abs(g[i] - g[i - 1] - step) > 1e-12 * scale)
                throw std::invalid_argument(std::string("GridFunction2D: ") + name + " not uniform");
    }
};

}  // namespace dslkit
