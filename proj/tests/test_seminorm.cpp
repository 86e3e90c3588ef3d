#include <doctest.h>

#include <random>

#include "gstft/seminorm.hpp"
#include "support/oracles.hpp"

using namespace gstft;

namespace {
const QuadSpec kQuad{};
}

TEST_CASE("schwartz norm closed-form checks") {
    // phi = e^{-t^2}: S^0_0 norm 1; S^1_0 still 1 since max|phi'| =
    // sqrt(2/e) < 1 (1-d calculus oracle).
    SchwartzGaussian phi = SchwartzGaussian::gaussian(1, 1.0);
    CHECK(schwartz_norm(phi, 0, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(schwartz_norm(phi, 0, 1) == doctest::Approx(1.0).epsilon(1e-9));
    const double max_d1 = std::sqrt(2.0 / M_E);
    SupGridOptions opt;
    double observed = 0.0;
    for (double t = -3.0; t <= 3.0; t += 1e-4)
        observed = std::max(observed, std::fabs(phi.deriv({1}, {t}).real()));
    CHECK(observed == doctest::Approx(max_d1).epsilon(1e-6));
    (void)opt;

    // Scaling: ||c phi|| = |c| ||phi||.
    SchwartzGaussian phi3(1, {Poly::constant(1.0)}, 1.0, {0.0}, 3.0);
    CHECK(schwartz_norm(phi3, 2, 2) ==
          doctest::Approx(3.0 * schwartz_norm(phi, 2, 2)).epsilon(1e-12));
}

TEST_CASE("weighted cn norm reduces and orders correctly") {
    Window w(1, 1.0);
    // A bump as SchwartzGaussian with sigma = 0 and a bump factor.
    SchwartzGaussian bump(1, {Poly::constant(1.0)}, 0.0, {0.0}, 1.0,
                          std::make_pair(w, Vec{0.0}));
    CHECK(weighted_cn_norm(bump, Weight::constant(1.0), 0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

    SchwartzGaussian phi = SchwartzGaussian::gaussian(1, 1.0);
    CHECK(weighted_cn_norm(phi, Weight::poly_inv(2), 0) <=
          schwartz_norm(phi, 0, 0) + 1e-12);
    CHECK(weighted_cn_norm(phi, Weight::poly(1), 2) >=
          weighted_cn_norm(phi, Weight::poly(1), 1) - 1e-12);
}

TEST_CASE("tf weighted norm: point weight, interval weight, monotonicity") {
    // Synthetic field == 1 on x in [-1,1]: with K = [1,2],
    // h_{-K}(x) = max(-x, -2x) so the sup of e^{h} on the grid is e^2.
    GridSpec g = GridSpec::symmetric(1, 1.0, 1.0, 21, 5);
    TimeFrequencyField F;
    F.grid = g;
    F.values.assign(g.total(), Cplx(1.0));
    const auto K12 = ConvexBody::vpolytope({{1.0}, {2.0}});
    CHECK(tf_weighted_norm(F, K12, Weight::constant(1.0)) ==
          doctest::Approx(std::exp(2.0)).epsilon(1e-12));

    // K = {0}: reduces to sup |F| v(xi).
    CHECK(tf_weighted_norm(F, ConvexBody::point({0.0}), Weight::poly_inv(1)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // Monotone in K on random fields.
    std::mt19937_64 rng(9);
    auto region = OpenConvexRegion::hregion({{-1.0}}, {0.0});
    const auto K1 = exhaust(region, 2), K2 = exhaust(region, 3);
    for (int trial = 0; trial < 20; ++trial) {
        TimeFrequencyField R;
        R.grid = g;
        R.values.resize(g.total());
        for (auto& v : R.values)
            v = Cplx((rng() % 1000) / 999.0, (rng() % 1000) / 999.0);
        CHECK(tf_weighted_norm(R, K1, Weight::poly_inv(1)) <=
              tf_weighted_norm(R, K2, Weight::poly_inv(1)) + 1e-10);
    }

    // Seminorm properties: |c| homogeneity and triangle inequality.
    TimeFrequencyField A = F, B = F;
    for (std::size_t k = 0; k < g.total(); ++k) {
        A.values[k] = Cplx(0.3 * (k % 7), -0.2 * (k % 5));
        B.values[k] = Cplx(-0.1 * (k % 3), 0.4 * (k % 11));
    }
    const Weight v = Weight::poly_inv(1);
    const double na = tf_weighted_norm(A, K12, v);
    const double nb = tf_weighted_norm(B, K12, v);
    TimeFrequencyField S = A;
    for (std::size_t k = 0; k < g.total(); ++k) S.values[k] += B.values[k];
    CHECK(tf_weighted_norm(S, K12, v) <= na + nb + 1e-10);
    TimeFrequencyField C2 = A;
    for (auto& x : C2.values) x *= Cplx(0.0, 2.0);
    CHECK(tf_weighted_norm(C2, K12, v) == doctest::Approx(2.0 * na).epsilon(1e-10));
}

TEST_CASE("p seminorm: delta, exponential with oracle, empty family") {
    // f = delta_0: p = max |phi(0)| over B for every K.
    const auto K = ConvexBody::vpolytope({{-0.5}, {0.5}});
    std::vector<SchwartzGaussian> B = {
        SchwartzGaussian::gaussian(1, 1.0),
        SchwartzGaussian(1, {Poly({0.5, 1.0})}, 1.0, {0.25})};
    auto f = TestDistribution::delta({0.0});
    double expect = 0.0;
    for (const auto& phi : B)
        expect = std::max(expect, std::abs(phi.value({0.0})));
    CHECK(p_seminorm(f, K, B, 60, kQuad) ==
          doctest::Approx(expect).epsilon(1e-12));

    // f = H e^{t}, K = [2,3], B = {e^{-t^2}}: the adaptive oracle
    // maximizes int_0^inf e^{(1-eta)t} e^{-t^2} dt at eta = 2.
    auto fh = TestDistribution::heaviside_exp({1.0}, {0.0});
    const auto K23 = ConvexBody::vpolytope({{2.0}, {3.0}});
    std::vector<SchwartzGaussian> Bg = {SchwartzGaussian::gaussian(1, 1.0)};
    const double oracle_val =
        oracle::integrate_1d(
            [&](double t) { return std::exp((1.0 - 2.0) * t - t * t); }, 0.0,
            30.0)
            .real();
    CHECK(p_seminorm(fh, K23, Bg, 80, kQuad) ==
          doctest::Approx(oracle_val).epsilon(1e-9));

    // Empty B gives 0; K outside Gamma(f) is rejected.
    CHECK(p_seminorm(fh, K23, {}, 10, kQuad) == 0.0);
    const auto bad = ConvexBody::vpolytope({{0.1}, {0.4}});
    CHECK_THROWS_AS(p_seminorm(fh, bad, Bg, 10, kQuad), ConfigError);

    // Monotone in K and in B.
    const auto K24 = ConvexBody::vpolytope({{2.0}, {4.0}});
    CHECK(p_seminorm(fh, K23, Bg, 80, kQuad) <=
          p_seminorm(fh, K24, Bg, 80, kQuad) + 1e-12);
    std::vector<SchwartzGaussian> B2 = Bg;
    B2.push_back(SchwartzGaussian(1, {Poly({0.0, 1.0})}, 1.0, {0.0}, 2.0));
    CHECK(p_seminorm(fh, K23, Bg, 80, kQuad) <=
          p_seminorm(fh, K23, B2, 80, kQuad) + 1e-12);
}

TEST_CASE("lemma2 constant: closed form, monotone in k, stable over eta lattice") {
    Window psi(1, 1.0);
    // eta = 0, k = n = 0: C = ||psi||_inf * |supp| = e^{-1} * 2.
    const double c0 = lemma2_constant(psi, {0.0}, 0, 0, kQuad);
    const double quad_oracle =
        oracle::integrate_1d([](double) { return Cplx(1.0, 0.0); }, -1.0, 1.0)
            .real();
    CHECK(c0 == doctest::Approx(std::exp(-1.0) * quad_oracle).epsilon(1e-9));

    CHECK(lemma2_constant(psi, {0.5}, 1, 1, kQuad) <=
          lemma2_constant(psi, {0.5}, 2, 1, kQuad));

    // sup over a compact eta set is finite: lattice max stabilizes.
    const auto K = ConvexBody::vpolytope({{-1.0}, {1.0}});
    double prev = 0.0;
    for (int count : {4, 16, 64}) {
        double m = 0.0;
        for (const auto& eta : sample_points(K, count, 42))
            m = std::max(m, lemma2_constant(psi, eta, 1, 1, kQuad));
        CHECK(m >= prev - 1e-12);
        prev = m;
    }
    CHECK(std::isfinite(prev));
}

TEST_CASE("lemma2 suite: clean sweeps and scale invariance") {
    Window psi(1, 1.0);
    const GridSpec grid = GridSpec::symmetric(1, 8.0, 96.0, 41, 61);

    SchwartzGaussian phi = SchwartzGaussian::gaussian(1, 1.0);
    auto rep = lemma2_suite(psi, {0.0}, 0, 0, phi, grid, kQuad);
    CHECK(rep.clean());
    CHECK(rep.max_ratio <= 1.0);
    CHECK(rep.max_ratio > 1e-6);  // harness is not vacuous

    auto rep2 = lemma2_suite(psi, {1.0}, 2, 2, phi, grid, kQuad);
    CHECK(rep2.clean());
    CHECK(rep2.max_ratio <= 1.0);

    // phi -> c phi leaves the ratio invariant.
    SchwartzGaussian phic(1, {Poly::constant(1.0)}, 1.0, {0.0}, 7.5);
    auto rep3 = lemma2_suite(psi, {0.0}, 0, 0, phic, grid, kQuad);
    CHECK(rep3.max_ratio == doctest::Approx(rep.max_ratio).epsilon(1e-9));
}

TEST_CASE("lemma1 suite: empty violations on representative configs") {
    Window psi(1, 1.0);
    Lemma1Config cfg;
    cfg.sample_grid = GridSpec::symmetric(1, 6.0, 6.0, 9, 9);
    cfg.eta_samples = 12;

    // K = {0}: LHS reduces to e^{-|x|} v(xi) sup_t |psi-bracket|.
    auto rep = lemma1_suite(psi, ConvexBody::point({0.0}), 1.0,
                            Weight::poly_inv(2), 0, 0, cfg);
    CHECK(rep.clean());
    CHECK(rep.max_ratio <= 1.0);
    CHECK(rep.max_ratio > 0.0);

    auto rep2 = lemma1_suite(psi, ConvexBody::vpolytope({{-1.0}, {2.0}}), 0.5,
                             Weight::poly_inv(3), 2, 2, cfg);
    CHECK(rep2.clean());

    // Nachbin failure is rejected: v = (1+|xi|) grows.
    CHECK_THROWS_AS(lemma1_suite(psi, ConvexBody::point({0.0}), 1.0,
                                 Weight::poly(1), 0, 1, cfg),
                    ConfigError);
}

TEST_CASE("homogeneity of the schwartz norm under scaling (lemma1 analogue)") {
    Window psi(1, 1.0);
    const ModWindow b(psi, {0.5}, {0.3}, {4.0}, 1.0);
    const ModWindow b2(psi, {0.5}, {0.3}, {4.0}, 2.0);
    CHECK(schwartz_norm(b2, 1, 1) ==
          doctest::Approx(2.0 * schwartz_norm(b, 1, 1)).epsilon(1e-12));
}

TEST_CASE("weighted norm trend: bounded inside Gamma, diverging outside") {
    Window psi(1, 1.0);
    auto f = TestDistribution::heaviside_exp({0.5}, {0.0});
    const auto ladder = default_ladder(1, 3, 4.0, 4.0, 33, 21);

    auto region = OpenConvexRegion::hregion({{-1.0}}, {-0.5});
    const auto K2 = exhaust(region, 2);
    auto good = weighted_norm_trend(f, K2, psi, Weight::poly_inv(2), ladder, kQuad);
    CHECK(good.trend == Trend::Bounded);

    const auto bad = ConvexBody::vpolytope({{0.1}, {0.4}});
    auto div = weighted_norm_trend(f, bad, psi, Weight::poly_inv(2), ladder, kQuad);
    CHECK(div.trend == Trend::Diverging);
    // Divergence invariant: last three sups grow by more than 1.5x.
    const auto& s = div.sups;
    REQUIRE(s.size() >= 3);
    CHECK(s[s.size() - 1] > 1.5 * s[s.size() - 2]);
    CHECK(s[s.size() - 2] > 1.5 * s[s.size() - 3]);
}

TEST_CASE("gamma membership: bounded rows with proof bound, delta case") {
    Window psi(1, 1.0);
    auto f = TestDistribution::delta({0.0});
    const auto ladder = default_ladder(1, 3, 4.0, 4.0, 25, 17);
    auto verdict = gamma_membership(f, OpenConvexRegion::full_space(1), psi,
                                    Weight::poly_inv(2), ladder, 3, kQuad);
    CHECK(verdict.overall == Trend::Bounded);
    for (const auto& row : verdict.rows) {
        CHECK(row.trend == Trend::Bounded);
        CHECK(row.bound_ok);
        CHECK(row.bound > 0.0);
    }

    // Zero distribution: all sups are zero.
    TestDistribution zero(1);
    auto vz = gamma_membership(zero, OpenConvexRegion::full_space(1), psi,
                               Weight::poly_inv(2), ladder, 2, kQuad);
    CHECK(vz.overall == Trend::Bounded);
    for (const auto& row : vz.rows)
        for (double s : row.sups) CHECK(s == 0.0);

    // Gamma not inside Gamma(f) is rejected.
    auto fh = TestDistribution::heaviside_exp({0.5}, {0.0});
    CHECK_THROWS_AS(gamma_membership(fh, OpenConvexRegion::full_space(1), psi,
                                     Weight::poly_inv(2), ladder, 2, kQuad),
                    ConfigError);
}

TEST_CASE("tensor membership scan witnesses") {
    Window psi(1, 1.0);
    const auto ladder = default_ladder(1, 3, 3.0, 3.0, 17, 13);
    auto W = exp_weight_system(OpenConvexRegion::full_space(1), 3);
    auto V = DecreasingWeightSystem::vpol(1, 5);

    // F = V_psi delta_0 has compact x-support: witness n = 0 for every N.
    auto fam_delta = [&](const GridSpec& g) {
        return stft(TestDistribution::delta({0.0}), psi, g, kQuad);
    };
    auto mv = tensor_membership_scan(fam_delta, ladder, W, V);
    CHECK(mv.overall == Trend::Bounded);
    for (const auto& row : mv.rows) CHECK(row.witness == 0);

    // F = (1 + |xi|)^3, constant in x, trivial W: the first bounded
    // weight index is n = 3 ((1+|xi|)^{3-n} stays bounded from there).
    auto Wtriv = user_weight_system(1, std::vector<Weight>(2, Weight::poly(0)));
    auto fam_poly = [](const GridSpec& g) {
        TimeFrequencyField F;
        F.grid = g;
        F.values.resize(g.total());
        const std::size_t nxi = g.xi_count();
        for (std::size_t k = 0; k < F.values.size(); ++k)
            F.values[k] = std::pow(1.0 + norm2(g.xi_at(k % nxi)), 3.0);
        return F;
    };
    auto mv2 = tensor_membership_scan(fam_poly, ladder, Wtriv, V);
    CHECK(mv2.overall == Trend::Bounded);
    for (const auto& row : mv2.rows) CHECK(row.witness == 3);

    // F = 0: witness n = 0 for every N.
    auto fam_zero = [](const GridSpec& g) {
        TimeFrequencyField F;
        F.grid = g;
        F.values.assign(g.total(), Cplx(0.0));
        return F;
    };
    auto mv3 = tensor_membership_scan(fam_zero, ladder, W, V);
    for (const auto& row : mv3.rows) CHECK(row.witness == 0);
}

TEST_CASE("convolutor suite: compact, exponential, negative control") {
    Window phi(1, 1.0);
    const std::vector<std::pair<Window, Vec>> phis = {{phi, Vec{0.0}}};
    const auto radii = radius_ladder(4.0, 2.0, 4);

    // delta: f * phi compactly supported, every weight bounded.
    auto fd = TestDistribution::delta({0.5});
    auto W = exp_weight_system(OpenConvexRegion::hregion({{-1.0}}, {0.0}), 4);
    auto mv = convolutor_suite(fd, phis, W, radii, 65, kQuad);
    CHECK(mv.overall == Trend::Bounded);

    // f = H e^{t/2} against the exponential system of (1/2, inf):
    // products decay like e^{-x/N}.
    auto fh = TestDistribution::heaviside_exp({0.5}, {0.0});
    auto Wh = exp_weight_system(OpenConvexRegion::hregion({{-1.0}}, {-0.5}), 4);
    auto mv2 = convolutor_suite(fh, phis, Wh, radii, 65, kQuad);
    CHECK(mv2.overall == Trend::Bounded);

    // Negative control: f = H e^{3t/2} against the system of (0, inf)
    // grows like e^{(3/2 - 1/N) x}.
    auto fneg = TestDistribution::heaviside_exp({1.5}, {0.0});
    auto Wneg = exp_weight_system(OpenConvexRegion::hregion({{-1.0}}, {0.0}), 4);
    auto mv3 = convolutor_suite(fneg, phis, Wneg, radii, 65, kQuad);
    bool any_div = false;
    for (const auto& row : mv3.rows) any_div |= row.trend == Trend::Diverging;
    CHECK(any_div);
}

TEST_CASE("adjoint bound suite: zero field, clean bound, scale invariance") {
    Window psi(1, 1.0);
    auto region = OpenConvexRegion::full_space(1);
    const GridSpec grid = GridSpec::symmetric(1, 4.0, 8.0, 33, 41);
    std::vector<SchwartzGaussian> B = {SchwartzGaussian::gaussian(1, 1.0)};
    const Weight v0 = adjoint_dominating_weight(psi, exhaust(region, 1), B, 2,
                                                24, kQuad);

    TimeFrequencyField zero;
    zero.grid = grid;
    zero.values.assign(grid.total(), Cplx(0.0));
    auto r0 = adjoint_bound_suite(zero, region, psi, 1, 0.25, B, v0, 24, kQuad);
    CHECK(r0.clean());
    CHECK(r0.max_ratio == 0.0);

    const auto F = stft(TestDistribution::delta({0.0}), psi, grid, kQuad);
    auto r1 = adjoint_bound_suite(F, region, psi, 1, 0.25, B, v0, 24, kQuad);
    CHECK(r1.clean());
    CHECK(r1.max_ratio > 0.0);

    TimeFrequencyField Fc = F;
    for (auto& v : Fc.values) v *= 3.0;
    auto r2 = adjoint_bound_suite(Fc, region, psi, 1, 0.25, B, v0, 24, kQuad);
    CHECK(r2.max_ratio == doctest::Approx(r1.max_ratio).epsilon(1e-9));

    // Fattening that escapes the next exhaustion body is rejected.
    CHECK_THROWS_AS(
        adjoint_bound_suite(F, region, psi, 1, 5.0, B, v0, 24, kQuad),
        ConfigError);
}

TEST_CASE("classify_trend edge cases") {
    CHECK(classify_trend({0.0, 0.0, 0.0}) == Trend::Bounded);
    CHECK(classify_trend({1.0, 1.01, 1.012}) == Trend::Bounded);
    CHECK(classify_trend({1.0, 2.0, 4.0, 8.0}) == Trend::Diverging);
    CHECK(classify_trend({1.0, 1.3, 1.6}) == Trend::Inconclusive);
    CHECK(classify_trend({1.0}) == Trend::Inconclusive);
}
