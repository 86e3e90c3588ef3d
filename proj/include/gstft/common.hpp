#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gstft {

using Vec = std::vector<double>;
using Cplx = std::complex<double>;
using MultiIndex = std::vector<int>;

/// Thrown for malformed configs / violated preconditions (CLI exit 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical guard trips (quadrature non-convergence,
/// tail-mass check failure, enlarge-box failure; CLI exit 3).
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec operator*(double c, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline Vec negate(const Vec& a) { return -1.0 * a; }

inline int order(const MultiIndex& alpha) {
    int s = 0;
    for (int ai : alpha) s += ai;
    return s;
}

inline bool all_finite(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Deterministic unit-direction set: the 2d axis directions followed by
/// `extra` seeded pseudo-random unit vectors. Used by every sampling
/// checker so reports are reproducible.
inline std::vector<Vec> probe_directions(int dim, int extra = 64,
                                         std::uint64_t seed = 0x5eed) {
    std::vector<Vec> dirs;
    dirs.reserve(2 * dim + extra);
    for (int i = 0; i < dim; ++i) {
        Vec e(dim, 0.0);
        e[i] = 1.0;
        dirs.push_back(e);
        e[i] = -1.0;
        dirs.push_back(e);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (static_cast<int>(dirs.size()) < 2 * dim + extra) {
        Vec u(dim);
        for (int i = 0; i < dim; ++i) u[i] = gauss(rng);
        double n = norm2(u);
        if (n < 1e-8) continue;
        for (int i = 0; i < dim; ++i) u[i] /= n;
        dirs.push_back(u);
    }
    return dirs;
}

/// Geometric radius ladder r0 * growth^j, j = 0..count-1.
inline std::vector<double> radius_ladder(double r0, double growth, int count) {
    std::vector<double> r(count);
    double v = r0;
    for (int j = 0; j < count; ++j, v *= growth) r[j] = v;
    return r;
}

}  // namespace gstft
