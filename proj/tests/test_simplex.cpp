#include <doctest.h>

#include <random>

#include "gstft/simplex.hpp"
#include "support/oracles.hpp"

using namespace gstft;

TEST_CASE("lp_maximize on the unit square") {
    // max 2x - y over [0,1]^2: optimum 2 at (1, 0).
    std::vector<Vec> A = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    Vec b = {1, 0, 1, 0};
    auto r = lp_maximize(A, b, {2, -1});
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.argmax[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.argmax[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("lp_maximize with zero objective returns a feasible point") {
    std::vector<Vec> A = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    Vec b = {1, 0, 1, 0};
    auto r = lp_maximize(A, b, {0, 0});
    CHECK(r.value == doctest::Approx(0.0));
    for (std::size_t i = 0; i < A.size(); ++i)
        CHECK(dot(A[i], r.argmax) <= b[i] + 1e-9);
}

TEST_CASE("lp_maximize on the simplex diagonal facet") {
    // max x + y s.t. x,y >= 0, x + y <= 1: value 1 (argmax not unique).
    std::vector<Vec> A = {{-1, 0}, {0, -1}, {1, 1}};
    Vec b = {0, 0, 1};
    auto r = lp_maximize(A, b, {1, 1});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.argmax[0] + r.argmax[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lp error contracts") {
    // Infeasible: x <= -1, -x <= -1 means x <= -1 and x >= 1.
    CHECK_THROWS_AS(lp_maximize({{1.0}, {-1.0}}, {-1.0, -1.0}, {1.0}),
                    ConfigError);
    // Unbounded: x >= 0 only.
    CHECK_THROWS_AS(lp_maximize({{-1.0}}, {0.0}, {1.0}), ConfigError);
}

TEST_CASE("lp agrees with vertex enumeration on random H-polytopes") {
    std::mt19937_64 rng(1234);
    for (int d = 1; d <= 3; ++d) {
        for (int trial = 0; trial < 80; ++trial) {
            auto p = oracle::random_hpoly(d, rng);
            const Vec c = oracle::random_unit(d, rng);
            const double expect = oracle::support_bruteforce(p.A, p.b, c);
            auto r = lp_maximize(p.A, p.b, c);
            CHECK(r.value == doctest::Approx(expect).epsilon(1e-9));
            // The reported argmax must be feasible and optimal.
            for (std::size_t i = 0; i < p.A.size(); ++i)
                CHECK(dot(p.A[i], r.argmax) <= p.b[i] + 1e-8);
            CHECK(dot(c, r.argmax) == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("lp handles negative offsets (phase-1 path)") {
    // Shifted box [1,2] x [1,2]: max x + y = 4 at (2,2).
    std::vector<Vec> A = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    Vec b = {2, -1, 2, -1};
    auto r = lp_maximize(A, b, {1, 1});
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-12));
}
