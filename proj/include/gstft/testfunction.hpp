#pragma once

#include <memory>
#include <optional>

#include <json.hpp>

#include "gstft/common.hpp"
#include "gstft/poly.hpp"
#include "gstft/quadrature.hpp"
#include "gstft/window.hpp"

namespace gstft {

/// A smooth complex-valued function with exact derivatives, the common
/// currency of all pairings. Implementations must report either a hard
/// support box or a decay-based effective box.
class SmoothFunction {
public:
    virtual ~SmoothFunction() = default;
    virtual int dim() const = 0;
    virtual Cplx value(const Vec& t) const = 0;
    virtual Cplx deriv(const MultiIndex& alpha, const Vec& t) const = 0;
    virtual std::optional<Box> support_box() const = 0;

    /// Box outside which |f(t) e^{tilt . t}| is below `floor` times the
    /// envelope peak, for derivative orders up to max_order. Equals the
    /// support box for compactly supported functions.
    virtual Box effective_box(const Vec& tilt, double floor,
                              int max_order) const = 0;

    /// This function multiplied by e^{-eta . t}.
    virtual std::unique_ptr<SmoothFunction> tilted(const Vec& eta) const = 0;
    virtual std::unique_ptr<SmoothFunction> clone() const = 0;
};

/// c . e^{tau . s} psi(s) e^{i omega . t} with s = sign (t - center);
/// sign = -1 gives the reflected translate psi(center - t) used by
/// convolution. Covers translated windows, STFT brackets and the
/// exponential-tilted window family of the bounded-set estimates.
class ModWindow final : public SmoothFunction {
public:
    ModWindow(Window window, Vec center, Vec tau, Vec omega,
              Cplx scale = 1.0, int sign = +1);

    static ModWindow translate(const Window& w, const Vec& center) {
        const int d = w.dim();
        return ModWindow(w, center, Vec(d, 0.0), Vec(d, 0.0));
    }
    /// conj(M_xi T_x psi) for real psi: e^{-2 pi i xi . t} psi(t - x).
    static ModWindow stft_bracket(const Window& w, const Vec& x, const Vec& xi);
    /// psi(t - x) e^{+2 pi i xi . t}, the integrand of V_{conj(psi)} phi(x, -xi).
    static ModWindow adjoint_bracket(const Window& w, const Vec& x, const Vec& xi);
    /// phi(x - t) for convolution.
    static ModWindow reflected_translate(const Window& w, const Vec& x) {
        const int d = w.dim();
        return ModWindow(w, x, Vec(d, 0.0), Vec(d, 0.0), 1.0, -1);
    }

    int dim() const override { return window_.dim(); }
    Cplx value(const Vec& t) const override;
    Cplx deriv(const MultiIndex& alpha, const Vec& t) const override;
    std::optional<Box> support_box() const override;
    Box effective_box(const Vec&, double, int) const override;
    std::unique_ptr<SmoothFunction> tilted(const Vec& eta) const override;
    std::unique_ptr<SmoothFunction> clone() const override {
        return std::make_unique<ModWindow>(*this);
    }

    const Window& window() const { return window_; }
    const Vec& center() const { return center_; }

private:
    Window window_;
    Vec center_, tau_, omega_;
    Cplx scale_;
    int sign_;
    Cplx axis_deriv(int axis, int order, double t) const;
};

/// Tensor Schwartz test function
///   scale . prod_i p_i(t_i) . e^{-sigma |t|^2} . e^{-eta . t} [. bump(t - a)]
/// with closed-form derivatives. sigma = 0 requires the bump factor so
/// every S^n_k norm stays finite.
class SchwartzGaussian final : public SmoothFunction {
public:
    SchwartzGaussian(int dim, std::vector<Poly> axis_polys, double sigma,
                     Vec eta, double scale = 1.0,
                     std::optional<std::pair<Window, Vec>> bump = std::nullopt,
                     int n_max = 10);

    static SchwartzGaussian gaussian(int dim, double sigma = 1.0,
                                     double scale = 1.0) {
        return SchwartzGaussian(dim, std::vector<Poly>(dim, Poly::constant(1.0)),
                                sigma, Vec(dim, 0.0), scale);
    }

    int dim() const override { return dim_; }
    Cplx value(const Vec& t) const override;
    Cplx deriv(const MultiIndex& alpha, const Vec& t) const override;
    std::optional<Box> support_box() const override;
    Box effective_box(const Vec& tilt, double floor, int max_order) const override;
    std::unique_ptr<SmoothFunction> tilted(const Vec& eta) const override;
    std::unique_ptr<SmoothFunction> clone() const override {
        return std::make_unique<SchwartzGaussian>(*this);
    }

    double sigma() const { return sigma_; }
    const Vec& eta() const { return eta_; }
    double scale() const { return scale_; }
    const std::vector<Poly>& axis_polys() const { return polys_; }

private:
    int dim_;
    std::vector<Poly> polys_;
    double sigma_;
    Vec eta_;
    double scale_;
    std::optional<std::pair<Window, Vec>> bump_;
    int n_max_;
    // qs_[i][k]: polynomial factor of the k-th derivative of
    // p_i(s) e^{-sigma s^2 - eta_i s}.
    std::vector<std::vector<Poly>> qs_;

    double axis_deriv_core(int axis, int order, double s) const;
    double axis_deriv(int axis, int order, double s) const;
};

nlohmann::json to_json(const SchwartzGaussian& f);
SchwartzGaussian schwartz_from_json(const nlohmann::json& j);

}  // namespace gstft
