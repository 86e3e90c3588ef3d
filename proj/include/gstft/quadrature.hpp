#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "gstft/common.hpp"

namespace gstft {

/// Composite Gauss-Legendre quadrature parameters.
struct QuadSpec {
    int panels = 4;           // initial panels per axis (>= 4)
    int nodes = 16;           // GL nodes per panel
    double rel_tol = 1e-10;   // target relative tolerance
    int max_doublings = 7;    // panel-doubling cap before giving up

    void validate() const {
        if (panels < 4) throw ConfigError("QuadSpec: panel count must be >= 4");
        if (nodes < 2 || nodes > 64) throw ConfigError("QuadSpec: nodes out of range");
        if (!(rel_tol > 0)) throw ConfigError("QuadSpec: rel_tol must be > 0");
    }
};

/// Gauss-Legendre nodes and weights on [-1, 1] (cached per n).
const std::vector<double>& gl_nodes(int n);
const std::vector<double>& gl_weights(int n);

struct Box {
    Vec lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    bool empty() const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i])) return true;
        return false;
    }
    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }
    static Box intersect(const Box& a, const Box& b) {
        Box r = a;
        for (std::size_t i = 0; i < r.lo.size(); ++i) {
            r.lo[i] = std::max(r.lo[i], b.lo[i]);
            r.hi[i] = std::min(r.hi[i], b.hi[i]);
        }
        return r;
    }
};

namespace detail {

// Fixed composite tensor GL pass over `box` with p panels per axis.
// Also reports the max sampled |f| for the convergence floor.
template <class F>
Cplx tensor_pass(F&& f, const Box& box, int p, int nodes, double& peak) {
    const int d = box.dim();
    const auto& xs = gl_nodes(nodes);
    const auto& ws = gl_weights(nodes);

    std::vector<std::vector<double>> pos(d), wt(d);
    for (int ax = 0; ax < d; ++ax) {
        const double len = (box.hi[ax] - box.lo[ax]) / p;
        pos[ax].reserve(p * nodes);
        wt[ax].reserve(p * nodes);
        for (int pan = 0; pan < p; ++pan) {
            const double a = box.lo[ax] + pan * len;
            const double mid = a + 0.5 * len, half = 0.5 * len;
            for (int q = 0; q < nodes; ++q) {
                pos[ax].push_back(mid + half * xs[q]);
                wt[ax].push_back(half * ws[q]);
            }
        }
    }

    const std::size_t n1 = pos[0].size();
    Cplx total = 0.0;
    peak = 0.0;
    Vec t(d);
    if (d == 1) {
        for (std::size_t i = 0; i < n1; ++i) {
            t[0] = pos[0][i];
            const Cplx v = f(t);
            peak = std::max(peak, std::abs(v));
            total += wt[0][i] * v;
        }
    } else if (d == 2) {
        for (std::size_t i = 0; i < n1; ++i) {
            t[0] = pos[0][i];
            Cplx row = 0.0;
            for (std::size_t j = 0; j < pos[1].size(); ++j) {
                t[1] = pos[1][j];
                const Cplx v = f(t);
                peak = std::max(peak, std::abs(v));
                row += wt[1][j] * v;
            }
            total += wt[0][i] * row;
        }
    } else {
        for (std::size_t i = 0; i < n1; ++i) {
            t[0] = pos[0][i];
            Cplx plane = 0.0;
            for (std::size_t j = 0; j < pos[1].size(); ++j) {
                t[1] = pos[1][j];
                Cplx row = 0.0;
                for (std::size_t k = 0; k < pos[2].size(); ++k) {
                    t[2] = pos[2][k];
                    const Cplx v = f(t);
                    peak = std::max(peak, std::abs(v));
                    row += wt[2][k] * v;
                }
                plane += wt[1][j] * row;
            }
            total += wt[0][i] * plane;
        }
    }
    return total;
}

}  // namespace detail

/// Integrates a complex integrand over a compact box, doubling the panel
/// count until successive passes agree to rel_tol (with an absolute floor
/// tied to the sampled integrand peak). Throws GuardError with the
/// achieved estimate when the doubling cap is hit.
template <class F>
Cplx integrate_box(F&& f, const Box& box, const QuadSpec& q) {
    q.validate();
    if (box.empty()) return 0.0;
    double peak = 0.0;
    int p = q.panels;
    Cplx prev = detail::tensor_pass(f, box, p, q.nodes, peak);
    for (int k = 0; k < q.max_doublings; ++k) {
        p *= 2;
        double peak2 = 0.0;
        const Cplx cur = detail::tensor_pass(f, box, p, q.nodes, peak2);
        peak = std::max(peak, peak2);
        const double floor = q.rel_tol * peak * box.volume();
        if (std::abs(cur - prev) <= q.rel_tol * std::abs(cur) + floor + 1e-300)
            return cur;
        prev = cur;
    }
    throw GuardError("integrate_box: no convergence at panel cap; achieved estimate " +
                     std::to_string(std::abs(prev)));
}

/// Real-valued convenience wrapper.
template <class F>
double integrate_box_real(F&& f, const Box& box, const QuadSpec& q) {
    return integrate_box([&](const Vec& t) { return Cplx(f(t), 0.0); }, box, q)
        .real();
}

/// Progressive radial-shell integral of g over balls of the given radii:
/// returns partial integrals I_j = integral over B(0, radii[j]) using the
/// probe-direction angular rule and composite GL radially.
std::vector<double> ball_partial_integrals(
    const std::function<double(const Vec&)>& g, int dim,
    const std::vector<double>& radii, int radial_panels = 8);

}  // namespace gstft
