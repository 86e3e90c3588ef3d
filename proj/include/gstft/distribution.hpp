#pragma once

#include <vector>

#include "gstft/convex.hpp"
#include "gstft/poly.hpp"
#include "gstft/quadrature.hpp"
#include "gstft/testfunction.hpp"

namespace gstft {

/// coeff . d^alpha delta at `point`.
struct DeltaDerivTerm {
    Vec point;
    MultiIndex alpha;
    Cplx coeff = 1.0;
};

/// coeff . prod_i p_i(t_i) . e^{mu . t} restricted to the orthant
/// { t : t >= corner componentwise }. Laplace transformable on
/// prod_i (mu_i, inf).
struct ExpPolyTerm {
    Vec mu;
    std::vector<Poly> axis_polys;
    Vec corner;
    Cplx coeff = 1.0;
};

/// coeff . prod_i p_i(t_i) . e^{-|t|^2 / (2 sigma^2)}.
struct GaussPolyTerm {
    double sigma = 1.0;
    std::vector<Poly> axis_polys;
    Cplx coeff = 1.0;
};

/// Finite sum of symbolic terms with exact pairing rules. The empty term
/// list is the zero distribution.
class TestDistribution {
public:
    explicit TestDistribution(int dim);

    int dim() const { return dim_; }
    bool is_zero() const {
        return deltas_.empty() && exps_.empty() && gauss_.empty();
    }

    TestDistribution& add(DeltaDerivTerm term);
    TestDistribution& add(ExpPolyTerm term);
    TestDistribution& add(GaussPolyTerm term);

    const std::vector<DeltaDerivTerm>& deltas() const { return deltas_; }
    const std::vector<ExpPolyTerm>& exp_terms() const { return exps_; }
    const std::vector<GaussPolyTerm>& gauss_terms() const { return gauss_; }

    int max_delta_order() const;
    bool is_l2() const { return deltas_.empty() && exps_.empty(); }

    /// Intersection of the per-term membership regions Gamma(term).
    OpenConvexRegion gamma() const;

    /// Pointwise value of the function part (exp + gauss terms).
    Cplx smooth_value(const Vec& t) const;

    TestDistribution translated(const Vec& h) const;
    TestDistribution scaled_by(Cplx c) const;

    // Convenience builders.
    static TestDistribution delta(const Vec& a, Cplx coeff = 1.0);
    static TestDistribution delta_deriv(const Vec& a, MultiIndex alpha,
                                        Cplx coeff = 1.0);
    /// H(t - corner) e^{mu . t} (componentwise Heaviside cut).
    static TestDistribution heaviside_exp(const Vec& mu, const Vec& corner,
                                          Cplx coeff = 1.0);
    static TestDistribution gaussian(int dim, double sigma, Cplx coeff = 1.0);

private:
    int dim_;
    std::vector<DeltaDerivTerm> deltas_;
    std::vector<ExpPolyTerm> exps_;
    std::vector<GaussPolyTerm> gauss_;
};

/// <f, g>: exact on delta terms, composite-GL quadrature on the others,
/// always over compact boxes (g's support or effective box).
Cplx pairing(const TestDistribution& f, const SmoothFunction& g,
             const QuadSpec& quad);

/// Integral of a . b over the intersection of their (effective) boxes.
Cplx function_pairing(const SmoothFunction& a, const SmoothFunction& b,
                      const QuadSpec& quad);

/// <e^{-eta . t} f, g>. The tilt folds symbolically into the term grammar
/// where it stays closed (exp terms shift mu -> mu - eta); delta and
/// Gaussian terms absorb it on the test-function side instead.
Cplx reweighted_pairing(const TestDistribution& f, const Vec& eta,
                        const SmoothFunction& g, const QuadSpec& quad);

nlohmann::json to_json(const TestDistribution& f);
TestDistribution distribution_from_json(const nlohmann::json& j);

}  // namespace gstft
