#include "gstft/window.hpp"

#include <cmath>

namespace gstft {

namespace {
// Below this value of 1 - u^2 the bump factor underflows to zero long
// before the rational prefactor can blow up.
constexpr double kEdge = 1.0 / 700.0;

double bump(double u) {
    const double s = 1.0 - u * u;
    if (s <= kEdge) return 0.0;
    return std::exp(-1.0 / s);
}
}  // namespace

Window::Window(int dim, double radius, int n_max)
    : dim_(dim), radius_(radius), n_max_(n_max) {
    if (dim < 1 || dim > 3) throw ConfigError("Window: dimension must be 1..3");
    if (!(radius > 0.0)) throw ConfigError("Window: radius must be > 0");
    if (n_max < 0 || n_max > 16) throw ConfigError("Window: n_max out of range");

    prefactors_.reserve(n_max + 1);
    prefactors_.push_back(Poly::constant(1.0));
    const Poly s({1.0, 0.0, -1.0});        // 1 - u^2
    const Poly s2 = s * s;
    const Poly u = Poly::identity();
    for (int n = 0; n < n_max; ++n) {
        const Poly& p = prefactors_.back();
        Poly next = p.derivative() * s2 +
                    (u * s * (4.0 * n) + u * (-2.0)) * p;
        prefactors_.push_back(std::move(next));
    }

    axis_sups_.assign(n_max + 1, 0.0);
    const int grid = 4096;
    for (int k = 0; k <= n_max; ++k) {
        double best = 0.0;
        for (int i = 0; i <= grid; ++i) {
            const double s_pos = -radius_ + 2.0 * radius_ * i / grid;
            best = std::max(best, std::fabs(axis_deriv(k, s_pos)));
        }
        axis_sups_[k] = best;
    }

    QuadSpec q;
    const double axis_sq = integrate_box_real(
        [&](const Vec& t) {
            const double v = bump(t[0] / radius_);
            return v * v;
        },
        Box{{-radius_}, {radius_}}, q);
    l2_sq_ = std::pow(axis_sq, dim_);
}

double Window::axis_deriv(int order, double s) const {
    if (order < 0 || order > n_max_)
        throw ConfigError("Window: derivative order beyond n_max");
    const double u = s / radius_;
    const double one_minus = 1.0 - u * u;
    if (one_minus <= kEdge) return 0.0;
    const double g = std::exp(-1.0 / one_minus);
    const double pref = prefactors_[order](u) / std::pow(one_minus, 2 * order);
    return pref * g / std::pow(radius_, order);
}

double Window::value(const Vec& t) const {
    if (static_cast<int>(t.size()) != dim_)
        throw ConfigError("Window: dimension mismatch");
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) {
        v *= bump(t[i] / radius_);
        if (v == 0.0) return 0.0;
    }
    return v;
}

double Window::deriv(const MultiIndex& alpha, const Vec& t) const {
    if (static_cast<int>(alpha.size()) != dim_ ||
        static_cast<int>(t.size()) != dim_)
        throw ConfigError("Window: dimension mismatch");
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) {
        v *= axis_deriv(alpha[i], t[i]);
        if (v == 0.0) return 0.0;
    }
    return v;
}

double Window::axis_sup(int order) const {
    if (order < 0 || order > n_max_)
        throw ConfigError("Window: derivative order beyond n_max");
    return axis_sups_[order];
}

double Window::sup_deriv(const MultiIndex& alpha) const {
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) v *= axis_sup(alpha[i]);
    return v;
}

double Window::max_sup_deriv(int n) const {
    // Axis sups are maximized axis by axis, so only the distribution of
    // orders across axes matters; enumerate them.
    double best = 0.0;
    if (dim_ == 1) {
        for (int a = 0; a <= n; ++a) best = std::max(best, sup_deriv({a}));
    } else if (dim_ == 2) {
        for (int a = 0; a <= n; ++a)
            for (int b = 0; a + b <= n; ++b)
                best = std::max(best, sup_deriv({a, b}));
    } else {
        for (int a = 0; a <= n; ++a)
            for (int b = 0; a + b <= n; ++b)
                for (int c = 0; a + b + c <= n; ++c)
                    best = std::max(best, sup_deriv({a, b, c}));
    }
    return best;
}

double Window::l2_norm_sq() const { return l2_sq_; }

Box Window::support_box(const Vec& center) const {
    Box b;
    b.lo.resize(dim_);
    b.hi.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
        b.lo[i] = center[i] - radius_;
        b.hi[i] = center[i] + radius_;
    }
    return b;
}

nlohmann::json to_json(const Window& w) {
    return {{"dim", w.dim()}, {"radius", w.radius()}, {"n_max", w.max_order()}};
}

Window window_from_json(const nlohmann::json& j) {
    return Window(j.at("dim").get<int>(), j.at("radius").get<double>(),
                  j.value("n_max", 10));
}

}  // namespace gstft
