#include "gstft/testfunction.hpp"

#include <cmath>

namespace gstft {

namespace {

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
}

Cplx ipow(Cplx z, int k) {
    Cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

double rpow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace

ModWindow::ModWindow(Window window, Vec center, Vec tau, Vec omega, Cplx scale,
                     int sign)
    : window_(std::move(window)),
      center_(std::move(center)),
      tau_(std::move(tau)),
      omega_(std::move(omega)),
      scale_(scale),
      sign_(sign) {
    const int d = window_.dim();
    if (static_cast<int>(center_.size()) != d ||
        static_cast<int>(tau_.size()) != d ||
        static_cast<int>(omega_.size()) != d)
        throw ConfigError("ModWindow: dimension mismatch");
    if (sign_ != 1 && sign_ != -1) throw ConfigError("ModWindow: sign must be +-1");
}

ModWindow ModWindow::stft_bracket(const Window& w, const Vec& x, const Vec& xi) {
    return ModWindow(w, x, Vec(w.dim(), 0.0), -2.0 * M_PI * xi);
}

ModWindow ModWindow::adjoint_bracket(const Window& w, const Vec& x, const Vec& xi) {
    return ModWindow(w, x, Vec(w.dim(), 0.0), 2.0 * M_PI * xi);
}

Cplx ModWindow::value(const Vec& t) const {
    const int d = dim();
    double mag = 1.0, phase = 0.0;
    for (int i = 0; i < d; ++i) {
        const double s = sign_ * (t[i] - center_[i]);
        const double w = window_.axis_deriv(0, s);
        if (w == 0.0) return 0.0;
        mag *= w * std::exp(tau_[i] * s);
        phase += omega_[i] * t[i];
    }
    return scale_ * mag * Cplx(std::cos(phase), std::sin(phase));
}

Cplx ModWindow::axis_deriv(int axis, int order, double t) const {
    const double s = sign_ * (t - center_[axis]);
    const double om = omega_[axis], ta = tau_[axis];
    // d^k/dt^k [ e^{tau s} psi_ax(s) e^{i om t} ], s = sign (t - c).
    Cplx acc = 0.0;
    for (int j = 0; j <= order; ++j) {
        double inner = 0.0;
        for (int l = 0; l <= j; ++l)
            inner += binom(j, l) * rpow(ta, j - l) * window_.axis_deriv(l, s);
        acc += binom(order, j) * ipow(Cplx(0.0, om), order - j) *
               rpow(static_cast<double>(sign_), j) * inner;
    }
    return acc * std::exp(ta * s) * Cplx(std::cos(om * t), std::sin(om * t));
}

Cplx ModWindow::deriv(const MultiIndex& alpha, const Vec& t) const {
    const int d = dim();
    if (static_cast<int>(alpha.size()) != d || static_cast<int>(t.size()) != d)
        throw ConfigError("ModWindow: dimension mismatch");
    Cplx v = scale_;
    for (int i = 0; i < d; ++i) {
        v *= axis_deriv(i, alpha[i], t[i]);
        if (v == 0.0) return 0.0;
    }
    return v;
}

std::optional<Box> ModWindow::support_box() const {
    return window_.support_box(center_);
}

Box ModWindow::effective_box(const Vec&, double, int) const {
    return window_.support_box(center_);
}

std::unique_ptr<SmoothFunction> ModWindow::tilted(const Vec& eta) const {
    // e^{-eta . t} with t = c + sign s folds into tau and the scale.
    ModWindow g = *this;
    for (int i = 0; i < dim(); ++i) g.tau_[i] -= sign_ * eta[i];
    g.scale_ *= std::exp(-dot(eta, center_));
    return std::make_unique<ModWindow>(std::move(g));
}

SchwartzGaussian::SchwartzGaussian(int dim, std::vector<Poly> axis_polys,
                                   double sigma, Vec eta, double scale,
                                   std::optional<std::pair<Window, Vec>> bump,
                                   int n_max)
    : dim_(dim),
      polys_(std::move(axis_polys)),
      sigma_(sigma),
      eta_(std::move(eta)),
      scale_(scale),
      bump_(std::move(bump)),
      n_max_(n_max) {
    if (static_cast<int>(polys_.size()) != dim_ ||
        static_cast<int>(eta_.size()) != dim_)
        throw ConfigError("SchwartzGaussian: dimension mismatch");
    if (sigma_ < 0.0) throw ConfigError("SchwartzGaussian: sigma must be >= 0");
    if (sigma_ == 0.0 && !bump_)
        throw ConfigError("SchwartzGaussian: sigma = 0 requires a bump factor");
    if (bump_ && bump_->first.dim() != dim_)
        throw ConfigError("SchwartzGaussian: bump dimension mismatch");

    qs_.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
        qs_[i].reserve(n_max_ + 1);
        qs_[i].push_back(polys_[i]);
        // d/ds [q e^{-sigma s^2 - eta s}] = (q' - (2 sigma s + eta) q) e^{...}
        const Poly damp({-eta_[i], -2.0 * sigma_});
        for (int k = 0; k < n_max_; ++k) {
            const Poly& q = qs_[i].back();
            qs_[i].push_back(q.derivative() + damp * q);
        }
    }
}

double SchwartzGaussian::axis_deriv_core(int axis, int order, double s) const {
    if (order > n_max_)
        throw ConfigError("SchwartzGaussian: derivative order beyond n_max");
    return qs_[axis][order](s) * std::exp(-sigma_ * s * s - eta_[axis] * s);
}

double SchwartzGaussian::axis_deriv(int axis, int order, double s) const {
    if (!bump_) return axis_deriv_core(axis, order, s);
    const Window& w = bump_->first;
    const double sb = s - bump_->second[axis];
    double acc = 0.0;
    for (int j = 0; j <= order; ++j)
        acc += binom(order, j) * axis_deriv_core(axis, j, s) *
               w.axis_deriv(order - j, sb);
    return acc;
}

Cplx SchwartzGaussian::value(const Vec& t) const {
    double v = scale_;
    for (int i = 0; i < dim_; ++i) v *= axis_deriv(i, 0, t[i]);
    return v;
}

Cplx SchwartzGaussian::deriv(const MultiIndex& alpha, const Vec& t) const {
    if (static_cast<int>(alpha.size()) != dim_ ||
        static_cast<int>(t.size()) != dim_)
        throw ConfigError("SchwartzGaussian: dimension mismatch");
    double v = scale_;
    for (int i = 0; i < dim_; ++i) v *= axis_deriv(i, alpha[i], t[i]);
    return v;
}

std::optional<Box> SchwartzGaussian::support_box() const {
    if (bump_) return bump_->first.support_box(bump_->second);
    return std::nullopt;
}

Box SchwartzGaussian::effective_box(const Vec& tilt, double floor,
                                    int max_order) const {
    if (bump_) return bump_->first.support_box(bump_->second);
    if (static_cast<int>(tilt.size()) != dim_)
        throw ConfigError("SchwartzGaussian: tilt dimension mismatch");
    max_order = std::min(max_order, n_max_);

    Box box;
    box.lo.resize(dim_);
    box.hi.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
        const double c = std::fabs(tilt[i] - eta_[i]);
        auto env = [&](double s) {
            double m = 0.0;
            for (int l = 0; l <= max_order; ++l)
                m = std::max(m, std::max(std::fabs(qs_[i][l](s)),
                                         std::fabs(qs_[i][l](-s))));
            return m * std::exp(-sigma_ * s * s + c * s);
        };
        // Past the envelope's critical point the function is decreasing;
        // double out from there until it drops under the floor.
        double T = (c + std::sqrt(c * c + 4.0 * sigma_)) / (2.0 * sigma_) + 1.0;
        double peak = 0.0;
        for (int k = 0; k <= 64; ++k) peak = std::max(peak, env(T * k / 64.0));
        int guard = 0;
        while (env(T) > floor * peak && guard++ < 400) T *= 1.2;
        if (guard >= 400)
            throw GuardError("SchwartzGaussian: effective box did not close");
        box.lo[i] = -T;
        box.hi[i] = T;
    }
    return box;
}

std::unique_ptr<SmoothFunction> SchwartzGaussian::tilted(const Vec& eta) const {
    Vec e = eta_;
    for (int i = 0; i < dim_; ++i) e[i] += eta[i];
    return std::make_unique<SchwartzGaussian>(dim_, polys_, sigma_, std::move(e),
                                              scale_, bump_, n_max_);
}

nlohmann::json to_json(const SchwartzGaussian& f) {
    nlohmann::json j;
    j["dim"] = f.dim();
    j["sigma"] = f.sigma();
    j["eta"] = f.eta();
    j["scale"] = f.scale();
    std::vector<std::vector<double>> polys;
    for (const Poly& p : f.axis_polys())
        polys.push_back(p.is_zero() ? std::vector<double>{0.0} : p.coeffs);
    j["axis_polys"] = polys;
    return j;
}

SchwartzGaussian schwartz_from_json(const nlohmann::json& j) {
    const int d = j.at("dim").get<int>();
    std::vector<Poly> polys;
    if (j.contains("axis_polys")) {
        for (const auto& c : j.at("axis_polys"))
            polys.emplace_back(c.get<std::vector<double>>());
        for (auto& p : polys)
            if (p.is_zero()) p = Poly::constant(1.0);
    }
    while (static_cast<int>(polys.size()) < d) polys.push_back(Poly::constant(1.0));
    return SchwartzGaussian(d, std::move(polys), j.at("sigma").get<double>(),
                            j.value("eta", Vec(d, 0.0)),
                            j.value("scale", 1.0));
}

}  // namespace gstft
