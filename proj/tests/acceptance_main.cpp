// Acceptance suite: one line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "gstft/seminorm.hpp"
#include "support/oracles.hpp"

using namespace gstft;

namespace {

int g_failures = 0;

struct Criterion {
    const char* name;
    std::chrono::steady_clock::time_point t0;
    bool ok = true;
    std::string detail;

    explicit Criterion(const char* n)
        : name(n), t0(std::chrono::steady_clock::now()) {}

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }

    void finish() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        std::printf("[%s] %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

const QuadSpec kQuad{};

ConvexBody random_body(int d, std::mt19937_64& rng, int depth = 2) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 2);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    std::uniform_real_distribution<double> pos(0.1, 2.0);
    switch (pick(rng)) {
        case 0: {
            Vec c(d);
            for (auto& x : c) x = unif(rng);
            return ConvexBody::ball(c, pos(rng));
        }
        case 1: {
            std::uniform_int_distribution<int> nv(1, 5);
            std::vector<Vec> verts(nv(rng), Vec(d));
            for (auto& v : verts)
                for (auto& x : v) x = unif(rng);
            return ConvexBody::vpolytope(verts);
        }
        case 2: {
            auto p = oracle::random_hpoly(d, rng);
            return ConvexBody::hpolytope(p.A, p.b);
        }
        case 3:
            return ConvexBody::scaled(pos(rng), random_body(d, rng, depth - 1));
        case 4:
            return ConvexBody::reflected(random_body(d, rng, depth - 1));
        default:
            return ConvexBody::sum({random_body(d, rng, depth - 1),
                                    random_body(d, rng, depth - 1)});
    }
}

void criterion1_convex_core() {
    Criterion c("criterion 1: convex core (Lemma 5.2(b), Example 5.3, LP oracle)");
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::uniform_real_distribution<double> pos(0.05, 1.5);

    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        auto k1 = random_body(d, rng);
        auto k2 = random_body(d, rng);
        Vec x(d);
        for (auto& v : x) v = coord(rng);

        const double h1 = support_function(k1, x);
        const double h2 = support_function(k2, x);
        const double hs = support_function(minkowski_sum(k1, k2), x);
        const double scale = std::max({1.0, std::fabs(h1), std::fabs(h2)});
        c.require(std::fabs(hs - (h1 + h2)) <= 1e-12 * scale,
                  "Minkowski additivity off at trial " + std::to_string(trial));

        const double eps = pos(rng);
        const double hf = support_function(fatten(k1, eps), x);
        c.require(std::fabs(hf - (h1 + eps * norm2(x))) <= 1e-12 * scale,
                  "fattening identity off at trial " + std::to_string(trial));

        const double r = pos(rng);
        const double hb = support_function(ConvexBody::ball(Vec(d, 0.0), r), x);
        c.require(std::fabs(hb - r * norm2(x)) <= 1e-12,
                  "ball support identity off");
    }

    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        auto p = oracle::random_hpoly(d, rng);
        const Vec u = oracle::random_unit(d, rng);
        const double lp =
            support_function(ConvexBody::hpolytope(p.A, p.b), u);
        const double brute = oracle::support_bruteforce(p.A, p.b, u);
        c.require(std::fabs(lp - brute) <= 1e-9 * std::max(1.0, std::fabs(brute)),
                  "LP vs vertex oracle disagree at trial " + std::to_string(trial));
    }
    c.finish();
}

void criterion2_weights() {
    Criterion c("criterion 2: weight hypotheses (V/(1), (2), (3), (8)) over four regions");

    std::vector<std::pair<std::string, OpenConvexRegion>> regions;
    regions.emplace_back("(0,inf)", OpenConvexRegion::hregion({{-1.0}}, {0.0}));
    regions.emplace_back("R", OpenConvexRegion::full_space(1));
    regions.emplace_back("unit square",
                         OpenConvexRegion::hregion(
                             {{-1, 0}, {0, -1}, {1, 0}, {0, 1}}, {0, 0, 1, 1}));
    regions.emplace_back("open triangle",
                         OpenConvexRegion::hregion(
                             {{-1, 0}, {0, -1}, {1, 1}}, {0, 0, 1}));

    for (auto& [name, region] : regions) {
        const auto system = exp_weight_system(region, 8);

        auto v = check_V(system);
        c.require(v.passed(), name + ": condition (V)/(1) not supported");
        c.require(replay(v, system), name + ": (V) witnesses do not replay");

        auto l1 = check_L1(system);
        c.require(l1.passed(), name + ": condition (2) not supported");
        c.require(replay(l1, system), name + ": (2) witnesses do not replay");

        auto ti = check_trans_inv(system);
        c.require(ti.verdict == Verdict::Certified,
                  name + ": condition (3) not certified");
        for (const auto& w : ti.witnesses)
            c.require(w.C == 1.0, name + ": (3) certificate constant != 1");
        c.require(replay(ti, system), name + ": (3) certificate does not replay");

        auto om = check_omega_switched(system);
        c.require(om.verdict == Verdict::Certified,
                  name + ": condition (8) not certified");
        for (const auto& w : om.witnesses)
            c.require(w.C == 1.0, name + ": (8) certificate constant != 1");
        c.require(replay(om, system), name + ": (8) certificate does not replay");
    }

    // Negative control: w_N = e^{max(|x|,1)^{2-1/N}} must be falsified
    // for condition (8).
    std::vector<Weight> ws;
    for (int N = 1; N <= 4; ++N) ws.push_back(Weight::power_exp(2.0 - 1.0 / N));
    auto control = user_weight_system(1, ws);
    auto om = check_omega_switched(control);
    c.require(om.verdict == Verdict::Falsified,
              "power-exponential control not falsified for (8)");
    c.finish();
}

void criterion3_stft() {
    Criterion c("criterion 3: STFT isometry and reconstruction identities");
    Window psi(1, 1.0);

    const GridSpec iso_grid = GridSpec::symmetric(1, 6.0, 6.0, 81, 81);
    auto gaussian = TestDistribution::gaussian(1, 1.0);
    const double gap = isometry_gap(gaussian, psi, iso_grid, kQuad);
    const double gap2 = isometry_gap(gaussian, psi, iso_grid.refined(2), kQuad);
    c.require(gap < 0.01, "isometry gap " + std::to_string(gap) + " >= 1%");
    c.require(gap2 < gap, "isometry gap does not decrease under refinement");

    const GridSpec rec_grid = GridSpec::symmetric(1, 4.0, 14.0, 49, 113);
    const ModWindow phi(Window(1, 1.0), {0.3}, {0.0}, {0.0});
    std::vector<std::pair<std::string, TestDistribution>> testbed;
    testbed.emplace_back("delta_0", TestDistribution::delta({0.0}));
    testbed.emplace_back("delta'_0", TestDistribution::delta_deriv({0.0}, {1}));
    testbed.emplace_back("H e^{t/2}",
                         TestDistribution::heaviside_exp({0.5}, {0.0}));
    testbed.emplace_back("gaussian", gaussian);

    for (auto& [name, f] : testbed) {
        const double e1 = reconstruct_error(f, psi, psi, phi, rec_grid, kQuad);
        const double e2 =
            reconstruct_error(f, psi, psi, phi, rec_grid.refined(2), kQuad);
        c.require(e1 < 1e-3, name + ": reconstruction error " +
                                 std::to_string(e1) + " >= 1e-3");
        c.require(e2 < e1, name + ": error does not decrease under doubling");
    }
    c.finish();
}

void criterion4_lemma2() {
    Criterion c("criterion 4: Lemma 5.5 bound sweep");
    Window psi(1, 1.0);
    const GridSpec grid = GridSpec::symmetric(1, 8.0, 96.0, 100, 100);
    const SchwartzGaussian phi = SchwartzGaussian::gaussian(1, 1.0);
    double worst = 0.0;
    for (int k = 0; k <= 2 && c.ok; ++k) {
        for (int n = 0; n <= 2 && c.ok; ++n) {
            for (double eta : {0.0, 1.0, -1.0}) {
                auto rep = lemma2_suite(psi, {eta}, k, n, phi, grid, kQuad);
                worst = std::max(worst, rep.max_ratio);
                c.require(rep.clean(),
                          "violations at k=" + std::to_string(k) +
                              " n=" + std::to_string(n) +
                              " eta=" + std::to_string(eta));
                c.require(rep.max_ratio <= 1.0,
                          "max_ratio " + std::to_string(rep.max_ratio) + " > 1");
            }
        }
    }
    c.require(worst > 1e-6, "sweep is vacuous (max_ratio <= 1e-6)");
    c.finish();
}

void criterion5_lemma1() {
    Criterion c("criterion 5: Lemma 5.4 bounded-family certification");
    std::vector<std::pair<std::string, ConvexBody>> bodies;
    bodies.emplace_back("point", ConvexBody::point({0.0}));
    bodies.emplace_back("interval", ConvexBody::vpolytope({{-1.0}, {2.0}}));
    bodies.emplace_back("square",
                        ConvexBody::vpolytope({{0.0, 0.0}, {1.0, 0.0},
                                               {0.0, 1.0}, {1.0, 1.0}}));
    for (auto& [name, K] : bodies) {
        const int d = K.dim();
        Window psi(d, 1.0);
        Lemma1Config cfg;
        cfg.eta_samples = d == 1 ? 16 : 10;
        cfg.sample_grid =
            d == 1 ? GridSpec::symmetric(1, 6.0, 6.0, 9, 9)
                   : GridSpec::symmetric(2, 5.0, 5.0, 4, 4);
        cfg.sup.points_2d = 65;
        for (int k = 0; k <= 2; ++k) {
            for (int n = 0; n <= 2; ++n) {
                auto rep = lemma1_suite(psi, K, 0.5, Weight::poly_inv(3), k, n,
                                        cfg);
                c.require(rep.clean(), name + ": violations at k=" +
                                           std::to_string(k) + " n=" +
                                           std::to_string(n));
            }
        }
    }
    c.finish();
}

void criterion6_prop56() {
    Criterion c("criterion 6: membership and adjoint estimates");
    Window psi(1, 1.0);
    auto f = TestDistribution::heaviside_exp({0.5}, {0.0});
    auto region = OpenConvexRegion::hregion({{-1.0}}, {-0.5});
    const auto ladder = default_ladder(1, 4, 6.0, 6.0, 41, 25);
    const Weight v = Weight::poly_inv(2);

    auto verdict = gamma_membership(f, region, psi, v, ladder, 6, kQuad);
    c.require(verdict.overall == Trend::Bounded,
              "membership not bounded for all K_N");
    for (const auto& row : verdict.rows) {
        c.require(row.trend == Trend::Bounded,
                  "K_" + std::to_string(row.index) + " trend not bounded");
        c.require(row.bound_ok, "sampled norm exceeds e p_{K_eps,B}(f) at N=" +
                                    std::to_string(row.index));
    }

    const auto control = ConvexBody::vpolytope({{0.1}, {0.4}});
    auto neg = weighted_norm_trend(f, control, psi, v, ladder, kQuad);
    c.require(neg.trend == Trend::Diverging,
              "out-of-Gamma control not diverging");

    // Adjoint continuity estimate with the closed-form constant.
    auto full = OpenConvexRegion::full_space(1);
    const GridSpec grid = GridSpec::symmetric(1, 4.0, 10.0, 41, 51);
    const auto F = stft(TestDistribution::delta({0.0}), psi, grid, kQuad);
    std::vector<SchwartzGaussian> B = {SchwartzGaussian::gaussian(1, 1.0)};
    const Weight v0 =
        adjoint_dominating_weight(psi, exhaust(full, 1), B, 2, 24, kQuad);
    auto rep = adjoint_bound_suite(F, full, psi, 1, 0.25, B, v0, 24, kQuad);
    c.require(rep.clean(), "adjoint bound violated, max ratio " +
                               std::to_string(rep.max_ratio));
    c.finish();
}

void criterion7_determinism() {
    Criterion c("criterion 7: deterministic reports");
    const std::string cli = GSTFT_CLI_PATH;
    const std::string configs = GSTFT_CONFIG_DIR;
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::vector<std::string> runs = {
        "check-weights --config " + configs + "/gamma_halfline.json",
        "check-weights --config " + configs + "/gamma_square.json",
        "stft-verify --config " + configs + "/stft_quick.json",
        "lemma-verify --lemma 2 --config " + configs + "/lemma2_quick.json",
        "convolutor-check --config " + configs + "/convolutor_halfline.json",
        "gamma-certify --config " + configs + "/gamma_certify_quick.json",
    };
    for (const auto& r : runs) {
        const std::string a = "/tmp/gstft_acc_a.json", b = "/tmp/gstft_acc_b.json";
        const int rc1 = std::system(
            (cli + " " + r + " --seed 11 --out " + a + " --quiet").c_str());
        const int rc2 = std::system(
            (cli + " " + r + " --seed 11 --out " + b + " --quiet").c_str());
        c.require(WEXITSTATUS(rc1) == 0, r + ": first run failed");
        c.require(WEXITSTATUS(rc2) == 0, r + ": second run failed");
        const std::string ja = slurp(a);
        c.require(!ja.empty() && ja == slurp(b), r + ": reports differ");
    }
    c.finish();
}

}  // namespace

int main() {
    criterion1_convex_core();
    criterion2_weights();
    criterion3_stft();
    criterion4_lemma2();
    criterion5_lemma1();
    criterion6_prop56();
    criterion7_determinism();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
