#include "gstft/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace gstft {

namespace {

void check_axis_polys(int dim, const std::vector<Poly>& p) {
    if (static_cast<int>(p.size()) != dim)
        throw ConfigError("term: axis poly count must equal dimension");
}

double poly_prod(const std::vector<Poly>& polys, const Vec& t) {
    double v = 1.0;
    for (std::size_t i = 0; i < polys.size(); ++i)
        v *= polys[i].is_zero() ? 0.0 : polys[i](t[i]);
    return v;
}

// Effective per-axis half-width of p(s) e^{-s^2/(2 sigma^2)} times e^{c s}.
double gauss_axis_halfwidth(const Poly& p, double sigma, double c) {
    const double a = 1.0 / (2.0 * sigma * sigma);
    double T = sigma * (8.0 + 2.0 * std::fabs(c) * sigma) + 1.0;
    auto env = [&](double s) {
        return std::max(std::fabs(p(s)), std::fabs(p(-s))) *
               std::exp(-a * s * s + std::fabs(c) * s);
    };
    double peak = 0.0;
    for (int k = 0; k <= 64; ++k) peak = std::max(peak, env(T * k / 64.0));
    int guard = 0;
    while (env(T) > 1e-18 * peak && guard++ < 200) T *= 1.2;
    return T;
}

}  // namespace

TestDistribution::TestDistribution(int dim) : dim_(dim) {
    if (dim < 1 || dim > 3)
        throw ConfigError("TestDistribution: dimension must be 1..3");
}

TestDistribution& TestDistribution::add(DeltaDerivTerm term) {
    if (static_cast<int>(term.point.size()) != dim_ ||
        static_cast<int>(term.alpha.size()) != dim_)
        throw ConfigError("DeltaDeriv: dimension mismatch");
    for (int a : term.alpha)
        if (a < 0) throw ConfigError("DeltaDeriv: negative derivative order");
    deltas_.push_back(std::move(term));
    return *this;
}

TestDistribution& TestDistribution::add(ExpPolyTerm term) {
    if (static_cast<int>(term.mu.size()) != dim_ ||
        static_cast<int>(term.corner.size()) != dim_)
        throw ConfigError("ExpPolyOrthant: dimension mismatch");
    check_axis_polys(dim_, term.axis_polys);
    exps_.push_back(std::move(term));
    return *this;
}

TestDistribution& TestDistribution::add(GaussPolyTerm term) {
    if (!(term.sigma > 0.0)) throw ConfigError("GaussPoly: sigma must be > 0");
    check_axis_polys(dim_, term.axis_polys);
    gauss_.push_back(std::move(term));
    return *this;
}

int TestDistribution::max_delta_order() const {
    int m = 0;
    for (const auto& t : deltas_)
        for (int a : t.alpha) m = std::max(m, a);
    return m;
}

OpenConvexRegion TestDistribution::gamma() const {
    if (exps_.empty()) return OpenConvexRegion::full_space(dim_);
    Vec worst_mu(dim_, -std::numeric_limits<double>::infinity());
    for (const auto& t : exps_)
        for (int i = 0; i < dim_; ++i)
            worst_mu[i] = std::max(worst_mu[i], t.mu[i]);
    std::vector<Vec> A;
    Vec b;
    for (int i = 0; i < dim_; ++i) {
        Vec row(dim_, 0.0);
        row[i] = -1.0;
        A.push_back(row);
        b.push_back(-worst_mu[i]);
    }
    return OpenConvexRegion::hregion(std::move(A), std::move(b));
}

Cplx TestDistribution::smooth_value(const Vec& t) const {
    Cplx v = 0.0;
    for (const auto& term : exps_) {
        bool inside = true;
        for (int i = 0; i < dim_; ++i)
            if (t[i] < term.corner[i]) {
                inside = false;
                break;
            }
        if (!inside) continue;
        v += term.coeff * poly_prod(term.axis_polys, t) *
             std::exp(dot(term.mu, t));
    }
    for (const auto& term : gauss_) {
        const double a = 1.0 / (2.0 * term.sigma * term.sigma);
        v += term.coeff * poly_prod(term.axis_polys, t) *
             std::exp(-a * dot(t, t));
    }
    return v;
}

TestDistribution TestDistribution::translated(const Vec& h) const {
    TestDistribution out(dim_);
    for (auto t : deltas_) {
        t.point = t.point + h;
        out.add(std::move(t));
    }
    for (auto t : exps_) {
        // p(t) e^{mu.t} H(t - a) shifted by h: substitute s = t - h axis-wise.
        std::vector<Poly> shifted;
        for (int i = 0; i < dim_; ++i) {
            // p(s - h) expanded in s.
            const Poly& p = t.axis_polys[i];
            Poly acc = Poly::constant(0.0);
            Poly basis = Poly::constant(1.0);
            const Poly lin({-h[i], 1.0});
            for (int kdeg = 0; kdeg <= p.degree(); ++kdeg) {
                const double c =
                    kdeg < static_cast<int>(p.coeffs.size()) ? p.coeffs[kdeg] : 0.0;
                acc = acc + basis * c;
                basis = basis * lin;
            }
            shifted.push_back(acc);
        }
        t.axis_polys = std::move(shifted);
        t.corner = t.corner + h;
        t.coeff *= std::exp(-dot(t.mu, h));
        out.add(std::move(t));
    }
    for (const auto& t : gauss_) {
        if (h != Vec(dim_, 0.0))
            throw ConfigError("translated: Gaussian terms support h = 0 only");
        out.add(t);
    }
    return out;
}

TestDistribution TestDistribution::scaled_by(Cplx c) const {
    TestDistribution out = *this;
    for (auto& t : out.deltas_) t.coeff *= c;
    for (auto& t : out.exps_) t.coeff *= c;
    for (auto& t : out.gauss_) t.coeff *= c;
    return out;
}

TestDistribution TestDistribution::delta(const Vec& a, Cplx coeff) {
    TestDistribution f(static_cast<int>(a.size()));
    f.add(DeltaDerivTerm{a, MultiIndex(a.size(), 0), coeff});
    return f;
}

TestDistribution TestDistribution::delta_deriv(const Vec& a, MultiIndex alpha,
                                               Cplx coeff) {
    TestDistribution f(static_cast<int>(a.size()));
    f.add(DeltaDerivTerm{a, std::move(alpha), coeff});
    return f;
}

TestDistribution TestDistribution::heaviside_exp(const Vec& mu, const Vec& corner,
                                                 Cplx coeff) {
    TestDistribution f(static_cast<int>(mu.size()));
    f.add(ExpPolyTerm{mu, std::vector<Poly>(mu.size(), Poly::constant(1.0)),
                      corner, coeff});
    return f;
}

TestDistribution TestDistribution::gaussian(int dim, double sigma, Cplx coeff) {
    TestDistribution f(dim);
    f.add(GaussPolyTerm{sigma, std::vector<Poly>(dim, Poly::constant(1.0)), coeff});
    return f;
}

Cplx pairing(const TestDistribution& f, const SmoothFunction& g,
             const QuadSpec& quad) {
    if (f.dim() != g.dim()) throw ConfigError("pairing: dimension mismatch");
    const int d = f.dim();
    Cplx out = 0.0;

    for (const auto& term : f.deltas()) {
        const double sign = order(term.alpha) % 2 == 0 ? 1.0 : -1.0;
        out += term.coeff * sign * g.deriv(term.alpha, term.point);
    }

    for (const auto& term : f.exp_terms()) {
        Box box = g.support_box() ? *g.support_box()
                                  : g.effective_box(term.mu, 1e-18, 0);
        for (int i = 0; i < d; ++i) box.lo[i] = std::max(box.lo[i], term.corner[i]);
        if (box.empty()) continue;
        const Cplx c = term.coeff;
        out += integrate_box(
            [&](const Vec& t) {
                return c * poly_prod(term.axis_polys, t) *
                       std::exp(dot(term.mu, t)) * g.value(t);
            },
            box, quad);
    }

    for (const auto& term : f.gauss_terms()) {
        Box box;
        if (g.support_box()) {
            box = *g.support_box();
        } else {
            box = g.effective_box(Vec(d, 0.0), 1e-18, 0);
            for (int i = 0; i < d; ++i) {
                const double T =
                    gauss_axis_halfwidth(term.axis_polys[i], term.sigma, 0.0);
                box.lo[i] = std::max(box.lo[i], -T);
                box.hi[i] = std::min(box.hi[i], T);
            }
        }
        if (box.empty()) continue;
        const double a = 1.0 / (2.0 * term.sigma * term.sigma);
        const Cplx c = term.coeff;
        out += integrate_box(
            [&](const Vec& t) {
                return c * poly_prod(term.axis_polys, t) *
                       std::exp(-a * dot(t, t)) * g.value(t);
            },
            box, quad);
    }
    return out;
}

Cplx reweighted_pairing(const TestDistribution& f, const Vec& eta,
                        const SmoothFunction& g, const QuadSpec& quad) {
    if (static_cast<int>(eta.size()) != f.dim())
        throw ConfigError("reweighted_pairing: eta dimension mismatch");
    TestDistribution tilted_exp(f.dim());
    TestDistribution rest(f.dim());
    for (auto term : f.exp_terms()) {
        term.mu = term.mu - eta;
        tilted_exp.add(std::move(term));
    }
    for (const auto& term : f.deltas()) rest.add(term);
    for (const auto& term : f.gauss_terms()) rest.add(term);
    Cplx out = 0.0;
    if (!tilted_exp.is_zero()) out += pairing(tilted_exp, g, quad);
    if (!rest.is_zero()) out += pairing(rest, *g.tilted(eta), quad);
    return out;
}

Cplx function_pairing(const SmoothFunction& a, const SmoothFunction& b,
                      const QuadSpec& quad) {
    if (a.dim() != b.dim())
        throw ConfigError("function_pairing: dimension mismatch");
    const int d = a.dim();
    const Vec zero(d, 0.0);
    Box ba = a.support_box() ? *a.support_box() : a.effective_box(zero, 1e-18, 0);
    Box bb = b.support_box() ? *b.support_box() : b.effective_box(zero, 1e-18, 0);
    const Box box = Box::intersect(ba, bb);
    if (box.empty()) return 0.0;
    return integrate_box(
        [&](const Vec& t) { return a.value(t) * b.value(t); }, box, quad);
}

nlohmann::json to_json(const TestDistribution& f) {
    nlohmann::json terms = nlohmann::json::array();
    auto cplx = [](Cplx c) {
        return nlohmann::json{{"re", c.real()}, {"im", c.imag()}};
    };
    for (const auto& t : f.deltas())
        terms.push_back({{"kind", "delta_deriv"},
                         {"point", t.point},
                         {"alpha", t.alpha},
                         {"coeff", cplx(t.coeff)}});
    for (const auto& t : f.exp_terms()) {
        std::vector<std::vector<double>> polys;
        for (const auto& p : t.axis_polys)
            polys.push_back(p.is_zero() ? std::vector<double>{0.0} : p.coeffs);
        terms.push_back({{"kind", "exp_poly_orthant"},
                         {"mu", t.mu},
                         {"axis_polys", polys},
                         {"corner", t.corner},
                         {"coeff", cplx(t.coeff)}});
    }
    for (const auto& t : f.gauss_terms()) {
        std::vector<std::vector<double>> polys;
        for (const auto& p : t.axis_polys)
            polys.push_back(p.is_zero() ? std::vector<double>{0.0} : p.coeffs);
        terms.push_back({{"kind", "gauss_poly"},
                         {"sigma", t.sigma},
                         {"axis_polys", polys},
                         {"coeff", cplx(t.coeff)}});
    }
    return {{"dim", f.dim()}, {"terms", terms}};
}

TestDistribution distribution_from_json(const nlohmann::json& j) {
    TestDistribution f(j.at("dim").get<int>());
    auto cplx = [](const nlohmann::json& c) {
        if (c.is_number()) return Cplx(c.get<double>(), 0.0);
        return Cplx(c.value("re", 0.0), c.value("im", 0.0));
    };
    auto polys = [&](const nlohmann::json& arr) {
        std::vector<Poly> p;
        for (const auto& c : arr) p.emplace_back(c.get<std::vector<double>>());
        return p;
    };
    for (const auto& t : j.at("terms")) {
        const std::string kind = t.at("kind").get<std::string>();
        if (kind == "delta_deriv") {
            MultiIndex alpha = t.value("alpha", MultiIndex(f.dim(), 0));
            f.add(DeltaDerivTerm{t.at("point").get<Vec>(), std::move(alpha),
                                 cplx(t.value("coeff", nlohmann::json(1.0)))});
        } else if (kind == "exp_poly_orthant") {
            std::vector<Poly> p =
                t.contains("axis_polys")
                    ? polys(t.at("axis_polys"))
                    : std::vector<Poly>(f.dim(), Poly::constant(1.0));
            f.add(ExpPolyTerm{t.at("mu").get<Vec>(), std::move(p),
                              t.at("corner").get<Vec>(),
                              cplx(t.value("coeff", nlohmann::json(1.0)))});
        } else if (kind == "gauss_poly") {
            std::vector<Poly> p =
                t.contains("axis_polys")
                    ? polys(t.at("axis_polys"))
                    : std::vector<Poly>(f.dim(), Poly::constant(1.0));
            f.add(GaussPolyTerm{t.at("sigma").get<double>(), std::move(p),
                                cplx(t.value("coeff", nlohmann::json(1.0)))});
        } else {
            throw ConfigError("distribution_from_json: unknown term kind '" +
                              kind + "'");
        }
    }
    return f;
}

}  // namespace gstft
