#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "dslkit/common.hpp"

namespace dslkit {

/// Deterministic 64-bit generator (splitmix64 core) with the handful of
/// distributions the samplers need. Self-contained so that reports are
/// reproducible across standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double gaussian() {
        double u1 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    /// Log-uniform magnitude in [lo, hi] with random sign.
    double signed_log_uniform(double lo, double hi) {
        const double mag = std::exp(uniform(std::log(lo), std::log(hi)));
        return (next_u64() & 1u) ? mag : -mag;
    }

private:
    uint64_t state_;
};

/// FNV-1a over raw bytes; used both for content digests in reports and for
/// deriving independent per-sample streams.
inline uint64_t fnv1a(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
    return fnv1a(s.data(), s.size(), h);
}

/// Stream seed for sample `index` of a named suite: execution order cannot
/// change any sample, so fan-out across workers is safe.
inline uint64_t mix_seed(uint64_t seed, std::string_view stream, uint64_t index) {
    uint64_t h = fnv1a(stream);
    h = fnv1a(&seed, sizeof(seed), h);
    h = fnv1a(&index, sizeof(index), h);
    return h;
}

}  // namespace dslkit
