#pragma once

#include <vector>

#include <json.hpp>

#include "gstft/common.hpp"
#include "gstft/poly.hpp"
#include "gstft/quadrature.hpp"

namespace gstft {

/// Tensorized smooth bump window: psi(t) = prod_i g(t_i / r) with
/// g(u) = exp(-1/(1-u^2)) on (-1,1), zero outside. Derivatives come from
/// the closed recurrence g^(n)(u) = P_n(u) (1-u^2)^{-2n} g(u) with
///   P_{n+1} = P_n' (1-u^2)^2 + (4 n u (1-u^2) - 2u) P_n.
/// Support is the box [-r, r]^d; the Euclidean bound recorded for
/// ball-support constants is r * sqrt(d).
class Window {
public:
    Window(int dim, double radius, int n_max = 10);

    int dim() const { return dim_; }
    double radius() const { return radius_; }
    int max_order() const { return n_max_; }

    double value(const Vec& t) const;
    double deriv(const MultiIndex& alpha, const Vec& t) const;

    /// d^k/ds^k of the axis factor s -> g(s / r).
    double axis_deriv(int order, double s) const;

    /// sup_s |d^k/ds^k g(s/r)| by dense 1-d grid max (4096 points).
    double axis_sup(int order) const;

    /// ||d^alpha psi||_inf; exact product of axis sups (separable).
    double sup_deriv(const MultiIndex& alpha) const;

    /// max over |alpha| <= n of ||d^alpha psi||_inf.
    double max_sup_deriv(int n) const;

    double l2_norm_sq() const;
    double peak() const { return std::exp(-1.0); }

    Box support_box(const Vec& center) const;
    Box support_box() const { return support_box(Vec(dim_, 0.0)); }
    double support_radius() const { return radius_; }
    double euclidean_support_radius() const {
        return radius_ * std::sqrt(static_cast<double>(dim_));
    }

    bool operator==(const Window& o) const {
        return dim_ == o.dim_ && radius_ == o.radius_;
    }

private:
    int dim_;
    double radius_;
    int n_max_;
    std::vector<Poly> prefactors_;      // P_0 .. P_{n_max}
    std::vector<double> axis_sups_;     // cached per order
    double l2_sq_ = 0.0;
};

nlohmann::json to_json(const Window& w);
Window window_from_json(const nlohmann::json& j);

}  // namespace gstft
