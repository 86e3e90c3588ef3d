#include <doctest.h>

#include <random>

#include "gstft/weights.hpp"
#include "support/oracles.hpp"

using namespace gstft;

namespace {

OpenConvexRegion half_line() { return OpenConvexRegion::hregion({{-1.0}}, {0.0}); }

OpenConvexRegion unit_square() {
    return OpenConvexRegion::hregion({{-1, 0}, {0, -1}, {1, 0}, {0, 1}},
                                     {0, 0, 1, 1});
}

OpenConvexRegion open_triangle() {
    // x > 0, y > 0, x + y < 1.
    return OpenConvexRegion::hregion({{-1, 0}, {0, -1}, {1, 1}}, {0, 0, 1});
}

}  // namespace

TEST_CASE("exponential system of the half-line has the closed-form weights") {
    auto system = exp_weight_system(half_line(), 6);
    REQUIRE(system.labels.front() == 1);
    // Hand-check oracle: h_{-[1/N, N]}(x) is -x/N for x >= 0 and N|x| for
    // x < 0 (piecewise maximization over the reflected interval).
    for (std::size_t i = 0; i < system.count(); ++i) {
        const int N = system.labels[i];
        for (double x : {0.0, 0.5, 2.0, 7.0}) {
            CHECK(system.weights[i].log_eval({x}) ==
                  doctest::Approx(-x / N).epsilon(1e-12));
        }
        for (double x : {-0.5, -3.0}) {
            CHECK(system.weights[i].log_eval({x}) ==
                  doctest::Approx(N * std::fabs(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("exponential system of the full space is e^{N|x|}") {
    auto system = exp_weight_system(OpenConvexRegion::full_space(2), 5);
    std::mt19937_64 rng(11);
    for (std::size_t i = 0; i < system.count(); ++i) {
        const int N = system.labels[i];
        for (int trial = 0; trial < 20; ++trial) {
            const Vec u = oracle::random_unit(2, rng);
            const double r = 0.25 + 3.0 * (trial / 20.0);
            CHECK(system.weights[i].log_eval(r * u) ==
                  doctest::Approx(N * r).epsilon(1e-10));
        }
    }
}

TEST_CASE("exponential systems are pointwise monotone across N") {
    for (const auto& region :
         {half_line(), unit_square(), open_triangle()}) {
        auto system = exp_weight_system(region, 8);
        std::mt19937_64 rng(5);
        for (std::size_t i = 0; i + 1 < system.count(); ++i) {
            for (int trial = 0; trial < 200; ++trial) {
                Vec x(system.dim);
                for (auto& c : x)
                    c = -8.0 + 16.0 * (rng() % 1000) / 999.0;
                CHECK(system.weights[i].log_eval(x) <=
                      system.weights[i + 1].log_eval(x) + 1e-12);
            }
        }
    }
}

TEST_CASE("exponential weights are submultiplicative (trans-inv oracle)") {
    auto system = exp_weight_system(unit_square(), 6);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(-6.0, 6.0);
    for (std::size_t i = 0; i < system.count(); ++i) {
        for (int trial = 0; trial < 10000 / 5; ++trial) {
            Vec x = {unif(rng), unif(rng)}, y = {unif(rng), unif(rng)};
            CHECK(system.weights[i].log_eval(x + y) <=
                  system.weights[i].log_eval(x) +
                      system.weights[i].log_eval(y) + 1e-10);
        }
    }
}

TEST_CASE("check_V on the polynomial decreasing system") {
    auto vpol = DecreasingWeightSystem::vpol(1, 5);
    auto rep = check_V(vpol);
    CHECK(rep.verdict == Verdict::NumericallySupported);
    for (const auto& w : rep.witnesses) {
        CHECK(w.verdict == Verdict::NumericallySupported);
        CHECK(w.M == w.N + 1);  // ratio (1+r)^-1 already vanishes
    }
    CHECK(replay(rep, vpol));
}

TEST_CASE("check_V on exponential and constant systems") {
    auto exp_sys = exp_weight_system(half_line(), 6);
    auto rep = check_V(exp_sys);
    CHECK(rep.verdict == Verdict::NumericallySupported);
    CHECK(replay(rep, exp_sys));

    auto flat = user_weight_system(1, std::vector<Weight>(4, Weight::poly(0)));
    auto rep2 = check_V(flat);
    CHECK(rep2.verdict == Verdict::Falsified);
    CHECK(replay(rep2, flat));
}

TEST_CASE("check_L1 finds integrable quotients") {
    auto sq = exp_weight_system(unit_square(), 6);
    auto rep = check_L1(sq);
    CHECK(rep.verdict == Verdict::NumericallySupported);
    CHECK(replay(rep, sq));

    // w_N = (1+|x|)^N in d = 1: needs M = N + 2.
    std::vector<Weight> ws;
    for (int N = 1; N <= 5; ++N) ws.push_back(Weight::poly(N));
    auto polysys = user_weight_system(1, ws);
    auto rep2 = check_L1(polysys);
    CHECK(rep2.verdict == Verdict::NumericallySupported);
    for (const auto& w : rep2.witnesses) CHECK(w.M == w.N + 2);

    // Truncated at M = N + 1 the quotient is not integrable: exhausted.
    auto tight = user_weight_system(
        1, {Weight::poly(1), Weight::poly(2)}, {1, 2});
    auto rep3 = check_L1(tight);
    CHECK(rep3.verdict == Verdict::Undetermined);
    CHECK(rep3.diagnostic == "exhausted indices");
}

TEST_CASE("check_trans_inv certificates") {
    auto exp_sys = exp_weight_system(open_triangle(), 5);
    auto rep = check_trans_inv(exp_sys);
    CHECK(rep.verdict == Verdict::Certified);
    for (const auto& w : rep.witnesses) {
        CHECK(w.C == 1.0);
        CHECK(w.M1 == w.N);
        CHECK(w.M2 == w.N);
    }
    CHECK(replay(rep, exp_sys));

    // Polynomial weights: supported with M1 = M2 = N and sampled C <= 1
    // since (1+|x+y|) <= (1+|x|)(1+|y|) pointwise.
    std::vector<Weight> ws;
    for (int N = 1; N <= 4; ++N) ws.push_back(Weight::poly(N));
    auto polysys = user_weight_system(1, ws);
    auto rep2 = check_trans_inv(polysys);
    CHECK(rep2.verdict == Verdict::NumericallySupported);
    for (const auto& w : rep2.witnesses) {
        CHECK(w.M1 == w.N);
        CHECK(w.M2 == w.N);
        CHECK(w.C <= 1.0 + 1e-9);
        CHECK(w.C > 0.1);
    }

    auto flat = user_weight_system(1, std::vector<Weight>(3, Weight::poly(0)));
    auto rep3 = check_trans_inv(flat);
    CHECK(rep3.verdict == Verdict::Certified);

    CHECK_THROWS_AS(check_trans_inv(exp_sys, 10), ConfigError);
}

TEST_CASE("check_omega_switched: geometric certificates with C = 1") {
    for (const auto& region :
         {half_line(), unit_square(), open_triangle()}) {
        auto system = exp_weight_system(region, 8);
        auto rep = check_omega_switched(system);
        CHECK(rep.verdict == Verdict::Certified);
        for (const auto& w : rep.witnesses) {
            CHECK(w.C == 1.0);
            CHECK(w.M >= w.N);
            // Every P in [M, P_max] must carry a theta.
            int expect = 0;
            for (int label : system.labels)
                if (label >= w.M) ++expect;
            CHECK(static_cast<int>(w.thetas.size()) == expect);
        }
        CHECK(replay(rep, system));
    }
}

TEST_CASE("check_omega_switched: interval endpoint oracle for the half-line") {
    // For K_N = [1/N, N], M = 2N and theta(P) = min(1/2, N/(P-N)) the
    // endpoints obey (1-t)/N + t/P >= 1/(2N) and (1-t)N + tP <= 2N, so a
    // valid certificate exists; the checker must find one (possibly with
    // a smaller M) and its stored thetas must replay.
    auto system = exp_weight_system(half_line(), 8);
    for (int N : {1, 2}) {
        const int M = 2 * N;
        for (int P = M; P <= 8; ++P) {
            const double theta =
                P == N ? 0.5 : std::min(0.5, double(N) / (P - N));
            const double lo = (1.0 - theta) / N + theta / P;
            const double hi = (1.0 - theta) * N + theta * P;
            CHECK(lo >= 1.0 / (2 * N) - 1e-12);
            CHECK(hi <= 2.0 * N + 1e-12);
        }
    }
    auto rep = check_omega_switched(system);
    CHECK(rep.verdict == Verdict::Certified);
}

TEST_CASE("check_omega_switched: user system e^{N|x|} needs theta <= (M-N)/(P-N)") {
    std::vector<Weight> ws;
    for (int N = 1; N <= 4; ++N)
        ws.push_back(Weight::product(Weight::constant(1.0),
                                     Weight::exp_support(
                                         ConvexBody::ball(Vec{0.0}, double(N)))));
    auto sys = user_weight_system(1, ws);
    auto rep = check_omega_switched(sys);
    CHECK(rep.verdict == Verdict::NumericallySupported);
    for (const auto& w : rep.witnesses) {
        for (const auto& th : w.thetas) {
            if (th.P == w.M) continue;
            // Exponent arithmetic: (1-t)N + tP <= M.
            CHECK((1.0 - th.theta) * w.N + th.theta * th.P <= w.M + 1e-9);
        }
    }
    CHECK(replay(rep, sys));
}

TEST_CASE("check_omega_switched falsifies the power-exponential control") {
    std::vector<Weight> ws;
    for (int N = 1; N <= 4; ++N)
        ws.push_back(Weight::power_exp(2.0 - 1.0 / N));
    auto sys = user_weight_system(1, ws);
    auto rep = check_omega_switched(sys);
    CHECK(rep.verdict == Verdict::Falsified);
    // The stored sample must reproduce a diverging log-ratio.
    bool found = false;
    for (const auto& w : rep.witnesses)
        if (w.verdict == Verdict::Falsified && !w.sample_x.empty()) found = true;
    CHECK(found);
}

TEST_CASE("nachbin membership against the polynomial system") {
    auto vpol = DecreasingWeightSystem::vpol(1, 4);

    // v = (1+|x|)^-(N+3): row N is bounded (ratio (1+|x|)^-3).
    for (int N = 0; N <= 4; ++N) {
        auto rep = nachbin_member(Weight::poly_inv(N + 3), vpol);
        bool row_ok = false;
        for (const auto& w : rep.witnesses)
            if (w.N == N && w.verdict == Verdict::NumericallySupported)
                row_ok = true;
        CHECK(row_ok);
    }

    // v = (1+|x|): every row diverges like (1+|x|)^{1+N}.
    const Weight growing = Weight::poly(1);
    auto rep = nachbin_member(growing, vpol);
    CHECK(rep.verdict == Verdict::Falsified);
    CHECK(replay(rep, vpol, &growing));

    // w(xi) = v0(xi)(1+|xi|)^{d+1} with rapidly decreasing v0 stays in
    // the family at every truncated index.
    auto w = Weight::product(Weight::poly_inv(4 + 1 + 3), Weight::poly(2));
    auto rep2 = nachbin_member(w, vpol);
    CHECK(rep2.verdict == Verdict::NumericallySupported);
}

TEST_CASE("weight json round trip") {
    std::mt19937_64 rng(1);
    std::vector<Weight> samples = {
        Weight::poly(3),
        Weight::poly_inv(2),
        Weight::power_exp(1.5),
        Weight::constant(2.5),
        Weight::product(Weight::poly(1), Weight::poly_inv(4)),
        Weight::quotient(Weight::power_exp(1.0), Weight::poly(2)),
        Weight::exp_support(ConvexBody::vpolytope({{-1.0}, {0.5}}))};
    for (const auto& w : samples) {
        const Weight w2 = weight_from_json(to_json(w));
        for (int trial = 0; trial < 30; ++trial) {
            const Vec x = {-5.0 + 10.0 * (rng() % 1000) / 999.0};
            CHECK(w.log_eval(x) == doctest::Approx(w2.log_eval(x)).epsilon(1e-14));
        }
    }
    auto sys = exp_weight_system(half_line(), 4);
    auto sys2 = increasing_system_from_json(to_json(sys));
    CHECK(sys2.labels == sys.labels);
    CHECK(sys2.origin == IncreasingWeightSystem::Origin::Exponential);
}
