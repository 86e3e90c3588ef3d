// gamma-stft: command-line front end over the certification suites.
//
// Subcommands: check-weights | stft-verify | lemma-verify | gamma-certify |
//              convolutor-check | report
// Exit codes:  0 all suites in scope pass; 1 structured failure;
//              2 malformed config; 3 numerical guard failure.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gstft/seminorm.hpp"

using namespace gstft;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string csv_path;
    long seed = 0;
    double tol = 1e-8;
    int ladder = 4;
    int lemma = 2;
    bool quiet = false;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return j;
}

void emit(const CommonArgs& args, json& report, bool pass) {
    report["schema"] = "gamma-stft/1";
    report["seed"] = args.seed;
    report["pass"] = pass;
    const std::string text = report.dump(2) + "\n";
    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out.good())
            throw GuardError("cannot write report to " + args.out_path);
        out << text;
    }
    if (!args.quiet) std::cout << text;
}

QuadSpec quad_from(const json& cfg) {
    QuadSpec q;
    if (cfg.contains("quad")) {
        const json& c = cfg.at("quad");
        q.panels = c.value("panels", q.panels);
        q.nodes = c.value("nodes", q.nodes);
        q.rel_tol = c.value("rel_tol", q.rel_tol);
        q.max_doublings = c.value("max_doublings", q.max_doublings);
    }
    q.validate();
    return q;
}

std::vector<GridSpec> ladder_from(const json& cfg, int dim, int windows) {
    if (cfg.contains("ladder")) {
        std::vector<GridSpec> out;
        for (const auto& g : cfg.at("ladder")) out.push_back(grid_from_json(g));
        if (windows > 0 && static_cast<int>(out.size()) > windows)
            out.resize(windows);
        if (out.size() < 3)
            throw ConfigError("ladder: needs at least 3 windows");
        return out;
    }
    return default_ladder(dim, std::max(windows, 3));
}

int run_check_weights(const CommonArgs& args) {
    const json cfg = load_config(args.config_path);
    const IncreasingWeightSystem system =
        increasing_system_from_json(cfg.at("system"));
    std::vector<double> radii =
        cfg.value("radii", std::vector<double>{});
    std::vector<std::string> conditions = cfg.value(
        "conditions",
        std::vector<std::string>{"V", "L1", "TransInv", "OmegaSwitched"});

    json results;
    bool pass = true;
    std::vector<ConditionReport> reports;
    for (const std::string& c : conditions) {
        ConditionReport r;
        if (c == "V") {
            r = check_V(system, radii);
        } else if (c == "L1") {
            r = check_L1(system, cfg.value("l1_radii", std::vector<double>{}));
        } else if (c == "TransInv") {
            r = check_trans_inv(system, cfg.value("n_samples", 10000));
        } else if (c == "OmegaSwitched") {
            r = check_omega_switched(
                system, cfg.value("theta_grid", std::vector<double>{}),
                cfg.value("P_max", -1));
        } else {
            throw ConfigError("unknown condition '" + c + "'");
        }
        results[c] = to_json(r);
        results[c]["replay_ok"] = replay(r, system);
        pass = pass && r.passed() && results[c]["replay_ok"].get<bool>();
        reports.push_back(std::move(r));
    }

    if (cfg.contains("nachbin")) {
        const DecreasingWeightSystem vpol = DecreasingWeightSystem::vpol(
            system.dim, cfg.value("vpol_N_max", 4));
        json rows = json::array();
        for (const auto& cand : cfg.at("nachbin")) {
            const Weight v = weight_from_json(cand.at("weight"));
            ConditionReport r = nachbin_member(v, vpol, radii);
            json e = to_json(r);
            e["expect"] = cand.value("expect", "supported");
            const bool ok =
                (e["expect"] == "supported" && r.passed()) ||
                (e["expect"] == "falsified" && r.verdict == Verdict::Falsified);
            e["ok"] = ok;
            pass = pass && ok;
            rows.push_back(std::move(e));
        }
        results["Nachbin"] = std::move(rows);
    }

    json report;
    report["command"] = "check-weights";
    report["system"] = to_json(system);
    report["results"] = std::move(results);
    if (!pass) report["failure"] = "one or more conditions not certified";
    emit(args, report, pass);
    return pass ? 0 : 1;
}

int run_stft_verify(const CommonArgs& args) {
    const json cfg = load_config(args.config_path);
    const QuadSpec quad = quad_from(cfg);
    const Window psi = window_from_json(cfg.at("window"));
    const Window gamma_w = cfg.contains("synthesis_window")
                               ? window_from_json(cfg.at("synthesis_window"))
                               : psi;
    const GridSpec grid = grid_from_json(cfg.at("grid"));
    const double rec_threshold = cfg.value("reconstruction_threshold", 1e-3);
    const double refine_factor = cfg.value("refine_decrease_slack", 1.0);

    const json& phi_cfg = cfg.at("phi");
    const ModWindow phi(window_from_json(phi_cfg.at("window")),
                        phi_cfg.at("center").get<Vec>(),
                        Vec(psi.dim(), 0.0), Vec(psi.dim(), 0.0));

    json results;
    bool pass = true;

    json rec = json::array();
    for (const auto& dj : cfg.at("distributions")) {
        const TestDistribution f = distribution_from_json(dj.at("f"));
        const double e1 = reconstruct_error(f, psi, gamma_w, phi, grid, quad);
        const double e2 =
            reconstruct_error(f, psi, gamma_w, phi, grid.refined(2), quad);
        const bool ok = e1 < rec_threshold && e2 <= e1 * refine_factor;
        json e;
        e["name"] = dj.value("name", "f");
        e["error"] = e1;
        e["error_refined"] = e2;
        e["ok"] = ok;
        rec.push_back(std::move(e));
        pass = pass && ok;
    }
    results["reconstruction"] = std::move(rec);

    if (cfg.contains("isometry")) {
        const json& iso = cfg.at("isometry");
        const TestDistribution f = distribution_from_json(iso.at("f"));
        const GridSpec igrid = grid_from_json(iso.at("grid"));
        const double g1 = isometry_gap(f, psi, igrid, quad);
        const double g2 = isometry_gap(f, psi, igrid.refined(2), quad);
        const double threshold = iso.value("threshold", 0.01);
        const bool ok = g1 < threshold && g2 <= g1;
        results["isometry"] = {{"gap", g1}, {"gap_refined", g2}, {"ok", ok}};
        pass = pass && ok;
    }

    if (cfg.contains("emit_field")) {
        const TestDistribution f =
            distribution_from_json(cfg.at("emit_field").at("f"));
        const TimeFrequencyField F = stft(f, psi, grid, quad);
        results["field"] = to_json(F);
        if (!args.csv_path.empty()) {
            std::ofstream os(args.csv_path, std::ios::binary);
            write_field_csv(os, F,
                            {{"window", to_json(psi)},
                             {"distribution", cfg.at("emit_field").at("f")},
                             {"grid", to_json(F.grid)}});
        }
    }

    json report;
    report["command"] = "stft-verify";
    report["results"] = std::move(results);
    emit(args, report, pass);
    return pass ? 0 : 1;
}

int run_lemma_verify(const CommonArgs& args) {
    const json cfg = load_config(args.config_path);
    const QuadSpec quad = quad_from(cfg);
    const Window psi = window_from_json(cfg.at("window"));

    json results = json::array();
    bool pass = true;
    double max_ratio = 0.0;

    if (args.lemma == 2) {
        const GridSpec grid = grid_from_json(cfg.at("grid"));
        for (const auto& c : cfg.at("sweep")) {
            const int k = c.at("k").get<int>();
            const int n = c.at("n").get<int>();
            const Vec eta = c.at("eta").get<Vec>();
            const SchwartzGaussian phi = schwartz_from_json(c.at("phi"));
            BoundReport r = lemma2_suite(psi, eta, k, n, phi, grid, quad);
            json e = to_json(r);
            e["k"] = k;
            e["n"] = n;
            e["eta"] = eta;
            results.push_back(std::move(e));
            max_ratio = std::max(max_ratio, r.max_ratio);
            pass = pass && r.clean() && r.max_ratio <= 1.0 + args.tol;
        }
    } else if (args.lemma == 1) {
        for (const auto& c : cfg.at("sweep")) {
            Lemma1Config lc;
            lc.sample_grid = grid_from_json(c.at("sample_grid"));
            lc.eta_samples = c.value("eta_samples", 24);
            const ConvexBody K = body_from_json(c.at("K"));
            const Weight v = weight_from_json(c.at("v"));
            BoundReport r =
                lemma1_suite(psi, K, c.value("eps", 1.0), v,
                             c.at("k").get<int>(), c.at("n").get<int>(), lc);
            json e = to_json(r);
            e["k"] = c.at("k");
            e["n"] = c.at("n");
            results.push_back(std::move(e));
            max_ratio = std::max(max_ratio, r.max_ratio);
            pass = pass && r.clean();
        }
    } else {
        throw ConfigError("--lemma must be 1 or 2");
    }

    json report;
    report["command"] = "lemma-verify";
    report["lemma"] = args.lemma;
    report["max_ratio"] = max_ratio;
    report["results"] = std::move(results);
    emit(args, report, pass);
    return pass ? 0 : 1;
}

int run_gamma_certify(const CommonArgs& args) {
    const json cfg = load_config(args.config_path);
    const QuadSpec quad = quad_from(cfg);
    const Window psi = window_from_json(cfg.at("window"));
    const TestDistribution f = distribution_from_json(cfg.at("f"));
    const OpenConvexRegion region = region_from_json(cfg.at("gamma"));
    const Weight v = weight_from_json(cfg.at("v"));
    const auto ladder = ladder_from(cfg, psi.dim(), args.ladder);

    json results;
    bool pass = true;

    MembershipVerdict mv = gamma_membership(f, region, psi, v, ladder,
                                            cfg.value("N_max", 6), quad);
    results["membership"] = to_json(mv);
    bool bounds_ok = true;
    for (const auto& row : mv.rows) bounds_ok = bounds_ok && row.bound_ok;
    results["proof_bound_ok"] = bounds_ok;
    pass = pass && mv.all_bounded() && bounds_ok;

    if (cfg.contains("negative_control")) {
        const ConvexBody K = body_from_json(cfg.at("negative_control"));
        TrendRow row = weighted_norm_trend(f, K, psi, v, ladder, quad);
        results["negative_control"] = {{"trend", to_string(row.trend)},
                                       {"sups", row.sups}};
        pass = pass && row.trend == Trend::Diverging;
    }

    if (cfg.contains("adjoint")) {
        const json& aj = cfg.at("adjoint");
        const GridSpec grid = grid_from_json(aj.at("grid"));
        const TestDistribution fa = distribution_from_json(aj.at("f"));
        const TimeFrequencyField F = stft(fa, psi, grid, quad);
        std::vector<SchwartzGaussian> B;
        for (const auto& bj : aj.at("B")) B.push_back(schwartz_from_json(bj));
        const int K_index = aj.value("K_index", 1);
        const double eps = aj.value("eps", 0.25);
        const int eta_samples = aj.value("eta_samples", 24);
        const Weight v0 = adjoint_dominating_weight(
            psi, exhaust(region, K_index), B, psi.dim() + 1, eta_samples, quad);
        BoundReport r = adjoint_bound_suite(F, region, psi, K_index, eps, B,
                                            v0, eta_samples, quad);
        results["adjoint"] = to_json(r);
        pass = pass && r.clean();
    }

    json report;
    report["command"] = "gamma-certify";
    report["results"] = std::move(results);
    emit(args, report, pass);
    return pass ? 0 : 1;
}

int run_convolutor_check(const CommonArgs& args) {
    const json cfg = load_config(args.config_path);
    const QuadSpec quad = quad_from(cfg);
    const TestDistribution f = distribution_from_json(cfg.at("f"));
    const IncreasingWeightSystem W =
        increasing_system_from_json(cfg.at("system"));
    std::vector<std::pair<Window, Vec>> phis;
    for (const auto& pj : cfg.at("phis"))
        phis.emplace_back(window_from_json(pj.at("window")),
                          pj.value("center", Vec(W.dim, 0.0)));
    std::vector<double> radii =
        cfg.value("x_radii", radius_ladder(4.0, 2.0, 4));
    const int points = cfg.value("grid_points", 129);

    json results;
    MembershipVerdict mv = convolutor_suite(f, phis, W, radii, points, quad);
    results["membership"] = to_json(mv);
    bool pass = mv.all_bounded();

    if (cfg.contains("negative_control")) {
        const json& nc = cfg.at("negative_control");
        const TestDistribution fneg = distribution_from_json(nc.at("f"));
        const IncreasingWeightSystem Wneg =
            increasing_system_from_json(nc.at("system"));
        MembershipVerdict neg =
            convolutor_suite(fneg, phis, Wneg, radii, points, quad);
        results["negative_control"] = to_json(neg);
        bool any_div = false;
        for (const auto& row : neg.rows)
            any_div = any_div || row.trend == Trend::Diverging;
        pass = pass && any_div;
    }

    json report;
    report["command"] = "convolutor-check";
    report["results"] = std::move(results);
    emit(args, report, pass);
    return pass ? 0 : 1;
}

int run_report(const CommonArgs& args, const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in.good()) throw ConfigError("cannot open report: " + in_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("report parse error: ") + e.what());
    }
    const json* field = nullptr;
    if (j.contains("results") && j.at("results").contains("field"))
        field = &j.at("results").at("field");
    else if (j.contains("field"))
        field = &j.at("field");
    if (!field) throw ConfigError("report contains no field object");
    const TimeFrequencyField F = field_from_json(*field);
    if (args.csv_path.empty()) throw ConfigError("report: --csv PATH required");
    std::ofstream os(args.csv_path, std::ios::binary);
    if (!os.good()) throw GuardError("cannot write csv: " + args.csv_path);
    json meta;
    meta["source"] = in_path;
    meta["grid"] = to_json(F.grid);
    write_field_csv(os, F, meta);
    if (!args.quiet)
        std::cout << "wrote " << F.grid.total() << " rows to " << args.csv_path
                  << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computable layer of weighted STFT spaces on convex regions"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string in_path;
    app.add_option("--seed", args.seed, "seed recorded in reports");
    app.add_option("--tol", args.tol, "bound-ratio tolerance for exit status");
    app.add_option("--ladder", args.ladder, "number of expanding windows");
    app.add_flag("--quiet", args.quiet, "suppress stdout report echo");

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", args.config_path, "config JSON");
        if (needs_config) opt->required();
        sub->add_option("--out", args.out_path, "report output path");
        sub->add_option("--csv", args.csv_path, "CSV output path");
    };

    auto* cw = app.add_subcommand("check-weights",
                                  "certify weight-system conditions");
    add_common(cw, true);
    auto* sv = app.add_subcommand("stft-verify",
                                  "reconstruction and isometry checks");
    add_common(sv, true);
    auto* lv = app.add_subcommand("lemma-verify", "explicit bound sweeps");
    add_common(lv, true);
    lv->add_option("--lemma", args.lemma, "which bound to sweep (1 or 2)");
    auto* gc = app.add_subcommand("gamma-certify",
                                  "weighted membership of V_psi f");
    add_common(gc, true);
    auto* cc = app.add_subcommand("convolutor-check",
                                  "weighted convolutor membership");
    add_common(cc, true);
    auto* rp = app.add_subcommand("report", "convert a stored field to CSV");
    rp->add_option("--in", in_path, "input report JSON")->required();
    rp->add_option("--csv", args.csv_path, "CSV output path");
    rp->add_flag("--quiet", args.quiet, "suppress stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cw->parsed()) return run_check_weights(args);
        if (sv->parsed()) return run_stft_verify(args);
        if (lv->parsed()) return run_lemma_verify(args);
        if (gc->parsed()) return run_gamma_certify(args);
        if (cc->parsed()) return run_convolutor_check(args);
        if (rp->parsed()) return run_report(args, in_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
