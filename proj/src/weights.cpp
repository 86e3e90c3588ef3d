#include "gstft/weights.hpp"

#include <algorithm>
#include <cmath>

#include "gstft/parallel.hpp"
#include "gstft/quadrature.hpp"

namespace gstft {

Weight Weight::poly(int k) {
    Weight w;
    w.kind_ = WeightKind::Poly;
    w.k_ = k;
    return w;
}

Weight Weight::poly_inv(int N) {
    if (N < 0) throw ConfigError("poly_inv: N must be >= 0");
    Weight w;
    w.kind_ = WeightKind::PolyInv;
    w.k_ = N;
    return w;
}

Weight Weight::exp_support(ConvexBody K) {
    Weight w;
    w.kind_ = WeightKind::ExpSupport;
    w.body_ = std::move(K);
    return w;
}

Weight Weight::power_exp(double a) {
    if (!(a > 0.0)) throw ConfigError("power_exp: exponent must be > 0");
    Weight w;
    w.kind_ = WeightKind::PowerExp;
    w.a_ = a;
    return w;
}

Weight Weight::constant(double c) {
    if (!(c > 0.0)) throw ConfigError("constant weight must be > 0");
    Weight w;
    w.kind_ = WeightKind::Const;
    w.c_ = c;
    return w;
}

Weight Weight::product(Weight a, Weight b) {
    Weight w;
    w.kind_ = WeightKind::Product;
    w.children_ = {std::move(a), std::move(b)};
    return w;
}

Weight Weight::quotient(Weight a, Weight b) {
    Weight w;
    w.kind_ = WeightKind::Quotient;
    w.children_ = {std::move(a), std::move(b)};
    return w;
}

const ConvexBody& Weight::body() const {
    if (!body_) throw ConfigError("Weight: no body on this node");
    return *body_;
}

double Weight::log_eval(const Vec& x) const {
    switch (kind_) {
        case WeightKind::Poly:
            return k_ * std::log1p(norm2(x));
        case WeightKind::PolyInv:
            return -k_ * std::log1p(norm2(x));
        case WeightKind::ExpSupport:
            return support_function(*body_, x);
        case WeightKind::PowerExp:
            return std::pow(std::max(norm2(x), 1.0), a_);
        case WeightKind::Const:
            return std::log(c_);
        case WeightKind::Product:
            return children_[0].log_eval(x) + children_[1].log_eval(x);
        case WeightKind::Quotient:
            return children_[0].log_eval(x) - children_[1].log_eval(x);
    }
    throw ConfigError("Weight: unknown kind");
}

bool Weight::is_constant_one() const {
    switch (kind_) {
        case WeightKind::Poly:
        case WeightKind::PolyInv:
            return k_ == 0;
        case WeightKind::Const:
            return c_ == 1.0;
        case WeightKind::Product:
            return children_[0].is_constant_one() && children_[1].is_constant_one();
        case WeightKind::Quotient:
            return children_[0].is_constant_one() && children_[1].is_constant_one();
        default:
            return false;
    }
}

nlohmann::json to_json(const Weight& w) {
    switch (w.kind()) {
        case WeightKind::Poly:
            return {{"type", "poly"}, {"k", w.poly_exponent()}};
        case WeightKind::PolyInv:
            return {{"type", "poly_inv"}, {"N", w.poly_exponent()}};
        case WeightKind::ExpSupport:
            return {{"type", "exp_support"}, {"body", to_json(w.body())}};
        case WeightKind::PowerExp:
            return {{"type", "power_exp"}, {"a", w.power()}};
        case WeightKind::Const:
            return {{"type", "const"}, {"value", w.const_value()}};
        case WeightKind::Product:
            return {{"type", "product"},
                    {"left", to_json(w.left())},
                    {"right", to_json(w.right())}};
        case WeightKind::Quotient:
            return {{"type", "quotient"},
                    {"left", to_json(w.left())},
                    {"right", to_json(w.right())}};
    }
    throw ConfigError("weight to_json: unknown kind");
}

Weight weight_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "poly") return Weight::poly(j.at("k").get<int>());
    if (type == "poly_inv") return Weight::poly_inv(j.at("N").get<int>());
    if (type == "exp_support")
        return Weight::exp_support(body_from_json(j.at("body")));
    if (type == "power_exp") return Weight::power_exp(j.at("a").get<double>());
    if (type == "const") return Weight::constant(j.at("value").get<double>());
    if (type == "product")
        return Weight::product(weight_from_json(j.at("left")),
                               weight_from_json(j.at("right")));
    if (type == "quotient")
        return Weight::quotient(weight_from_json(j.at("left")),
                                weight_from_json(j.at("right")));
    throw ConfigError("weight_from_json: unknown type '" + type + "'");
}

DecreasingWeightSystem DecreasingWeightSystem::vpol(int dim, int N_max) {
    if (N_max < 0) throw ConfigError("vpol: N_max must be >= 0");
    DecreasingWeightSystem s;
    s.dim = dim;
    for (int N = 0; N <= N_max; ++N) {
        s.weights.push_back(Weight::poly_inv(N));
        s.labels.push_back(N);
    }
    return s;
}

IncreasingWeightSystem exp_weight_system(const OpenConvexRegion& region,
                                         int N_max) {
    const int N0 = exhaustion_min_index(region);
    if (N_max < N0)
        throw ConfigError("exp_weight_system: N_max below the first nonempty "
                          "exhaustion index " + std::to_string(N0));
    IncreasingWeightSystem s;
    s.dim = region.dim();
    s.origin = IncreasingWeightSystem::Origin::Exponential;
    s.region = region;
    for (int N = N0; N <= N_max; ++N) {
        ConvexBody K = exhaust(region, N);
        if (!s.bodies.empty()) {
            const InclusionReport inc = contains(s.bodies.back(), K);
            if (!inc.certified())
                throw GuardError("exp_weight_system: exhaustion nesting not "
                                 "certified at N = " + std::to_string(N));
        }
        // The weight's body is the reflected exhaustion body in exact
        // vertex/ball form so h evaluation stays cheap in inner loops.
        VBallForm f = vball_form(K);
        ConvexBody reflected_K =
            f.radius == 0.0
                ? ConvexBody::vpolytope([&] {
                      std::vector<Vec> v;
                      for (const auto& p : f.vertices) v.push_back(negate(p));
                      return v;
                  }())
                : ConvexBody::ball(negate(f.vertices[0]), f.radius);
        s.weights.push_back(Weight::exp_support(std::move(reflected_K)));
        s.labels.push_back(N);
        s.bodies.push_back(std::move(K));
    }
    return s;
}

IncreasingWeightSystem user_weight_system(int dim, std::vector<Weight> weights,
                                          std::vector<int> labels) {
    if (weights.empty()) throw ConfigError("user_weight_system: no weights");
    IncreasingWeightSystem s;
    s.dim = dim;
    s.origin = IncreasingWeightSystem::Origin::UserDefined;
    if (labels.empty())
        for (std::size_t i = 0; i < weights.size(); ++i)
            labels.push_back(static_cast<int>(i) + 1);
    if (labels.size() != weights.size())
        throw ConfigError("user_weight_system: label count mismatch");
    s.weights = std::move(weights);
    s.labels = std::move(labels);
    return s;
}

nlohmann::json to_json(const IncreasingWeightSystem& s) {
    nlohmann::json j;
    j["dim"] = s.dim;
    if (s.origin == IncreasingWeightSystem::Origin::Exponential) {
        j["type"] = "exponential";
        j["region"] = to_json(*s.region);
        j["N_max"] = s.labels.back();
    } else {
        j["type"] = "user";
        nlohmann::json ws = nlohmann::json::array();
        for (const auto& w : s.weights) ws.push_back(to_json(w));
        j["weights"] = std::move(ws);
        j["labels"] = s.labels;
    }
    return j;
}

IncreasingWeightSystem increasing_system_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "exponential")
        return exp_weight_system(region_from_json(j.at("region")),
                                 j.at("N_max").get<int>());
    if (type == "user") {
        std::vector<Weight> ws;
        for (const auto& w : j.at("weights")) ws.push_back(weight_from_json(w));
        return user_weight_system(j.at("dim").get<int>(), std::move(ws),
                                  j.value("labels", std::vector<int>{}));
    }
    throw ConfigError("increasing_system_from_json: unknown type");
}

nlohmann::json to_json(const DecreasingWeightSystem& s) {
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : s.weights) ws.push_back(to_json(w));
    return {{"dim", s.dim}, {"weights", std::move(ws)}, {"labels", s.labels}};
}

DecreasingWeightSystem decreasing_system_from_json(const nlohmann::json& j) {
    DecreasingWeightSystem s;
    s.dim = j.at("dim").get<int>();
    for (const auto& w : j.at("weights")) s.weights.push_back(weight_from_json(w));
    s.labels = j.value("labels", std::vector<int>{});
    if (s.labels.empty())
        for (std::size_t i = 0; i < s.weights.size(); ++i)
            s.labels.push_back(static_cast<int>(i));
    return s;
}

std::string to_string(ConditionId c) {
    switch (c) {
        case ConditionId::V: return "V";
        case ConditionId::L1: return "L1";
        case ConditionId::TransInv: return "TransInv";
        case ConditionId::OmegaSwitched: return "OmegaSwitched";
        case ConditionId::Nachbin: return "Nachbin";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "certified";
        case Verdict::NumericallySupported: return "numerically-supported";
        case Verdict::Falsified: return "falsified";
        case Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

nlohmann::json to_json(const ConditionReport& r) {
    nlohmann::json j;
    j["condition"] = to_string(r.condition);
    j["verdict"] = to_string(r.verdict);
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : r.witnesses) {
        nlohmann::json e;
        e["N"] = w.N;
        e["verdict"] = to_string(w.verdict);
        if (w.M >= 0) e["M"] = w.M;
        if (w.M1 >= 0) e["M1"] = w.M1;
        if (w.M2 >= 0) e["M2"] = w.M2;
        if (w.C > 0.0) e["C"] = w.C;
        if (!w.thetas.empty()) {
            nlohmann::json th = nlohmann::json::array();
            for (const auto& t : w.thetas)
                th.push_back({{"P", t.P}, {"theta", t.theta}});
            e["thetas"] = std::move(th);
        }
        if (!w.trace.empty()) e["trace"] = w.trace;
        if (!w.diagnostic.empty()) e["diagnostic"] = w.diagnostic;
        if (!w.sample_x.empty()) {
            e["sample_x"] = w.sample_x;
            if (!w.sample_y.empty()) e["sample_y"] = w.sample_y;
            e["sample_log_ratio"] = w.sample_value;
        }
        ws.push_back(std::move(e));
    }
    j["witnesses"] = std::move(ws);
    return j;
}

std::vector<double> default_check_radii() { return radius_ladder(4.0, 2.0, 12); }
std::vector<double> default_l1_radii() { return radius_ladder(1.0, 2.0, 10); }
std::vector<double> default_omega_radii() { return radius_ladder(1.0, 2.0, 100); }

std::vector<double> default_theta_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 50; ++i) g.push_back(0.01 * i);
    return g;
}

namespace {

const TrendTolerances kTol{};

struct FamilyView {
    int dim;
    const std::vector<Weight>* weights;
    const std::vector<int>* labels;
    std::size_t count() const { return weights->size(); }
    const Weight& at(std::size_t i) const { return (*weights)[i]; }
    int label(std::size_t i) const { return (*labels)[i]; }
};

// Sup over the probe sphere of radius r of lhs/rhs in the log domain.
double log_ratio_sup(const Weight& num, const Weight& den, double r,
                     const std::vector<Vec>& dirs) {
    return parallel_max(dirs.size(), -std::numeric_limits<double>::infinity(),
                        [&](std::size_t k) {
                            const Vec p = r * dirs[k];
                            return num.log_eval(p) - den.log_eval(p);
                        });
}

bool trace_nonincreasing(const std::vector<double>& t) {
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] > t[i - 1] + kTol.monotone_slack) return false;
    return true;
}

bool trace_nondecreasing(const std::vector<double>& t) {
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] < t[i - 1] - kTol.monotone_slack) return false;
    return true;
}

// Per-N scan for condition (V)-style vanishing ratio; `ratio` maps (i, j)
// index pairs to the (numerator, denominator) weights.
ConditionReport check_vanishing(const FamilyView& fam, ConditionId cond,
                                std::vector<double> radii,
                                bool increasing_convention) {
    if (radii.empty()) radii = default_check_radii();
    if (radii.size() < 3 || !std::is_sorted(radii.begin(), radii.end()))
        throw ConfigError("check_V: radii must be >= 3 strictly increasing values");
    const auto dirs = probe_directions(fam.dim);

    ConditionReport rep;
    rep.condition = cond;
    bool any_falsified = false, all_supported = true, any_scanned = false;

    for (std::size_t i = 0; i + 1 < fam.count(); ++i) {
        any_scanned = true;
        ConditionWitness w;
        w.N = fam.label(i);
        bool all_m_falsify = true;
        for (std::size_t j = i + 1; j < fam.count(); ++j) {
            const Weight& num = increasing_convention ? fam.at(i) : fam.at(j);
            const Weight& den = increasing_convention ? fam.at(j) : fam.at(i);
            std::vector<double> trace;
            for (double r : radii)
                trace.push_back(log_ratio_sup(num, den, r, dirs));
            const bool vanish = trace_nonincreasing(trace) &&
                                trace.back() < std::log(kTol.ratio_vanish);
            if (vanish) {
                w.verdict = Verdict::NumericallySupported;
                w.M = fam.label(j);
                w.trace = std::move(trace);
                all_m_falsify = false;
                break;
            }
            const bool stuck = trace_nondecreasing(trace) &&
                               trace.back() >= std::log(kTol.ratio_vanish);
            if (!stuck) all_m_falsify = false;
            if (j + 1 == fam.count() && w.trace.empty()) w.trace = trace;
        }
        if (w.verdict != Verdict::NumericallySupported) {
            if (all_m_falsify) {
                w.verdict = Verdict::Falsified;
                w.diagnostic = "ratio trace bounded below for every M";
                // Concrete re-checkable sample: largest radius, first
                // probe direction, against the first scanned M.
                w.M = fam.label(i + 1);
                w.sample_x = radii.back() * dirs[0];
                const Weight& num =
                    increasing_convention ? fam.at(i) : fam.at(i + 1);
                const Weight& den =
                    increasing_convention ? fam.at(i + 1) : fam.at(i);
                w.sample_value =
                    num.log_eval(w.sample_x) - den.log_eval(w.sample_x);
                any_falsified = true;
            } else {
                w.verdict = Verdict::Undetermined;
                w.diagnostic = "exhausted indices";
            }
            all_supported = false;
        }
        rep.witnesses.push_back(std::move(w));
    }

    if (any_falsified)
        rep.verdict = Verdict::Falsified;
    else if (all_supported && any_scanned)
        rep.verdict = Verdict::NumericallySupported;
    else {
        rep.verdict = Verdict::Undetermined;
        rep.diagnostic = "exhausted indices";
    }
    return rep;
}

}  // namespace

ConditionReport check_V(const DecreasingWeightSystem& system,
                        std::vector<double> radii) {
    FamilyView fam{system.dim, &system.weights, &system.labels};
    return check_vanishing(fam, ConditionId::V, std::move(radii),
                           /*increasing_convention=*/false);
}

ConditionReport check_V(const IncreasingWeightSystem& system,
                        std::vector<double> radii) {
    FamilyView fam{system.dim, &system.weights, &system.labels};
    return check_vanishing(fam, ConditionId::V, std::move(radii),
                           /*increasing_convention=*/true);
}

ConditionReport check_L1(const IncreasingWeightSystem& system,
                         std::vector<double> radii, int radial_panels) {
    if (radii.empty()) radii = default_l1_radii();
    if (radii.size() < 3 || !std::is_sorted(radii.begin(), radii.end()))
        throw ConfigError("check_L1: radii must be >= 3 strictly increasing values");

    ConditionReport rep;
    rep.condition = ConditionId::L1;
    bool any_falsified = false, all_supported = true, any_scanned = false;

    for (std::size_t i = 0; i + 1 < system.count(); ++i) {
        any_scanned = true;
        ConditionWitness w;
        w.N = system.labels[i];
        bool all_m_diverge = true;
        for (std::size_t j = i + 1; j < system.count(); ++j) {
            const Weight& wn = system.weights[i];
            const Weight& wm = system.weights[j];
            auto integrand = [&](const Vec& p) {
                const double lg = wn.log_eval(p) - wm.log_eval(p);
                return lg > 700.0 ? 1e304 : std::exp(lg);
            };
            std::vector<double> partial =
                ball_partial_integrals(integrand, system.dim, radii, radial_panels);
            const std::size_t q = partial.size();
            const double inc = partial[q - 1] - partial[q - 2];
            const bool cauchy =
                inc <= kTol.cauchy_rel * std::max(partial[q - 1], 1e-300);
            if (cauchy && std::isfinite(partial[q - 1])) {
                w.verdict = Verdict::NumericallySupported;
                w.M = system.labels[j];
                w.trace = std::move(partial);
                all_m_diverge = false;
                break;
            }
            std::vector<double> incs(q - 1);
            for (std::size_t k = 1; k < q; ++k) incs[k - 1] = partial[k] - partial[k - 1];
            if (!(trace_nondecreasing(incs) && incs.back() > 0.0))
                all_m_diverge = false;
            if (j + 1 == system.count() && w.trace.empty()) w.trace = partial;
        }
        if (w.verdict != Verdict::NumericallySupported) {
            if (all_m_diverge) {
                w.verdict = Verdict::Falsified;
                w.diagnostic = "partial integrals diverge for every M";
                any_falsified = true;
            } else {
                w.verdict = Verdict::Undetermined;
                w.diagnostic = "exhausted indices";
            }
            all_supported = false;
        }
        rep.witnesses.push_back(std::move(w));
    }

    if (any_falsified)
        rep.verdict = Verdict::Falsified;
    else if (all_supported && any_scanned)
        rep.verdict = Verdict::NumericallySupported;
    else {
        rep.verdict = Verdict::Undetermined;
        rep.diagnostic = "exhausted indices";
    }
    return rep;
}

namespace {

// Deterministic sample pairs with block-expanding radii.
std::vector<std::pair<Vec, Vec>> sample_pairs(int dim, int n,
                                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<Vec, Vec>> out;
    out.reserve(n);
    const int blocks = 11;
    for (int b = 0; b < blocks; ++b) {
        const double r = std::pow(2.0, b);
        const int count = n / blocks + 1;
        for (int k = 0; k < count && static_cast<int>(out.size()) < n; ++k) {
            Vec x(dim), y(dim);
            for (int i = 0; i < dim; ++i) x[i] = gauss(rng);
            for (int i = 0; i < dim; ++i) y[i] = gauss(rng);
            const double nx = norm2(x), ny = norm2(y);
            if (nx < 1e-12 || ny < 1e-12) continue;
            const double rx = r * unif(rng), ry = r * unif(rng);
            out.emplace_back((rx / nx) * x, (ry / ny) * y);
        }
    }
    return out;
}

}  // namespace

ConditionReport check_trans_inv(const IncreasingWeightSystem& system,
                                int n_samples) {
    if (n_samples < 1000)
        throw ConfigError("check_trans_inv: n_samples must be >= 1000");
    ConditionReport rep;
    rep.condition = ConditionId::TransInv;

    if (system.count() < 1) throw ConfigError("check_trans_inv: empty system");

    if (system.origin == IncreasingWeightSystem::Origin::Exponential) {
        for (std::size_t i = 0; i < system.count(); ++i) {
            ConditionWitness w;
            w.N = system.labels[i];
            w.verdict = Verdict::Certified;
            w.M1 = w.M2 = system.labels[i];
            w.C = 1.0;
            w.diagnostic = "support functions are subadditive";
            rep.witnesses.push_back(std::move(w));
        }
        rep.verdict = Verdict::Certified;
        return rep;
    }

    bool all_const = true;
    for (const auto& w : system.weights)
        if (!w.is_constant_one()) all_const = false;
    if (all_const) {
        for (std::size_t i = 0; i < system.count(); ++i) {
            ConditionWitness w;
            w.N = system.labels[i];
            w.verdict = Verdict::Certified;
            w.M1 = w.M2 = system.labels[i];
            w.C = 1.0;
            w.diagnostic = "constant system";
            rep.witnesses.push_back(std::move(w));
        }
        rep.verdict = Verdict::Certified;
        return rep;
    }

    if (system.count() == 1) {
        rep.verdict = Verdict::Undetermined;
        rep.diagnostic = "exhausted indices: single-index system";
        ConditionWitness w;
        w.N = system.labels[0];
        w.verdict = Verdict::Undetermined;
        w.diagnostic = "exhausted indices";
        rep.witnesses.push_back(std::move(w));
        return rep;
    }

    const auto pairs = sample_pairs(system.dim, n_samples, 0x7a115);
    bool all_ok = true;
    for (std::size_t i = 0; i < system.count(); ++i) {
        ConditionWitness best;
        best.N = system.labels[i];
        bool found = false;
        for (std::size_t j1 = i; j1 < system.count() && !found; ++j1) {
            for (std::size_t j2 = j1; j2 < system.count() && !found; ++j2) {
                const Weight& wn = system.weights[i];
                const Weight& w1 = system.weights[j1];
                const Weight& w2 = system.weights[j2];
                std::vector<double> logs(pairs.size());
                parallel_for(pairs.size(), [&](std::size_t k) {
                    const auto& [x, y] = pairs[k];
                    logs[k] = wn.log_eval(x + y) - w1.log_eval(x) - w2.log_eval(y);
                });
                double max_all = -std::numeric_limits<double>::infinity();
                double max_first_half = max_all;
                for (std::size_t k = 0; k < logs.size(); ++k) {
                    max_all = std::max(max_all, logs[k]);
                    if (k < logs.size() / 2)
                        max_first_half = std::max(max_first_half, logs[k]);
                }
                const bool stabilized =
                    max_all <= max_first_half + kTol.monotone_slack &&
                    max_all < 700.0;
                if (stabilized) {
                    best.verdict = Verdict::NumericallySupported;
                    best.M1 = system.labels[j1];
                    best.M2 = system.labels[j2];
                    best.C = std::exp(max_all);
                    found = true;
                }
            }
        }
        if (!found) {
            best.verdict = Verdict::Undetermined;
            best.diagnostic = "no stabilizing (M1, M2) within the index window";
            all_ok = false;
        }
        rep.witnesses.push_back(std::move(best));
    }
    rep.verdict = all_ok ? Verdict::NumericallySupported : Verdict::Undetermined;
    if (!all_ok) rep.diagnostic = "exhausted indices";
    return rep;
}

namespace {

// Geometric certificate attempt for exponential systems: the Minkowski
// combination (1-theta) K_N + theta K_P must land inside K_M.
bool omega_geometric_ok(const ConvexBody& KN, const ConvexBody& KP,
                        const ConvexBody& KM, double theta) {
    const ConvexBody mix = ConvexBody::sum(
        {ConvexBody::scaled(1.0 - theta, KN), ConvexBody::scaled(theta, KP)});
    return contains(mix, KM).certified();
}

}  // namespace

ConditionReport check_omega_switched(const IncreasingWeightSystem& system,
                                     std::vector<double> theta_grid, int P_max) {
    if (theta_grid.empty()) theta_grid = default_theta_grid();
    for (double t : theta_grid)
        if (!(t > 0.0 && t < 1.0))
            throw ConfigError("check_omega_switched: theta grid must lie in (0,1)");
    if (P_max < 0) P_max = system.labels.back();
    if (P_max > system.labels.back())
        throw ConfigError("check_omega_switched: P_max beyond system indices");

    // Positions of indices <= P_max.
    std::size_t p_end = 0;
    while (p_end < system.count() && system.labels[p_end] <= P_max) ++p_end;
    if (p_end == 0) throw ConfigError("check_omega_switched: empty P window");

    ConditionReport rep;
    rep.condition = ConditionId::OmegaSwitched;

    const bool exponential =
        system.origin == IncreasingWeightSystem::Origin::Exponential;
    std::vector<double> theta_desc = theta_grid;
    std::sort(theta_desc.begin(), theta_desc.end(), std::greater<double>());

    bool any_falsified = false, all_ok = true;

    for (std::size_t i = 0; i < system.count(); ++i) {
        ConditionWitness w;
        w.N = system.labels[i];

        if (exponential) {
            // Cache the vertex forms once per candidate body.
            bool done = false;
            for (std::size_t m = i; m < p_end && !done; ++m) {
                std::vector<OmegaTheta> thetas;
                bool m_ok = true;
                for (std::size_t p = m; p < p_end; ++p) {
                    double chosen = -1.0;
                    for (double th : theta_desc) {
                        if (omega_geometric_ok(system.bodies[i], system.bodies[p],
                                               system.bodies[m], th)) {
                            chosen = th;
                            break;
                        }
                    }
                    if (chosen < 0.0) {
                        m_ok = false;
                        break;
                    }
                    thetas.push_back({system.labels[p], chosen});
                }
                if (m_ok) {
                    w.verdict = Verdict::Certified;
                    w.M = system.labels[m];
                    w.C = 1.0;
                    w.thetas = std::move(thetas);
                    w.diagnostic = "Minkowski combination inclusion certificate";
                    done = true;
                }
            }
            if (!done) {
                w.verdict = Verdict::Undetermined;
                w.diagnostic = "exhausted indices";
                all_ok = false;
            }
            rep.witnesses.push_back(std::move(w));
            continue;
        }

        // User system: log-domain trace scan on expanding spheres. A
        // candidate M succeeds when every P in (M, P_max] has a theta with
        // a stabilized trace; it fails when some P diverges for every
        // theta. M = P_max has no nontrivial P window left and counts
        // neither way (the truncated check would pass it vacuously).
        const auto radii = default_omega_radii();
        const auto dirs = probe_directions(system.dim);
        bool supported = false;
        bool every_m_fails = true;
        int candidates = 0;
        ConditionWitness fail_info;
        for (std::size_t m = i; m + 1 < p_end && !supported; ++m) {
            ++candidates;
            std::vector<OmegaTheta> thetas;
            bool m_ok = true;
            bool m_failed = false;
            for (std::size_t p = m + 1; p < p_end && m_ok; ++p) {
                double chosen = -1.0;
                double best_c = 0.0;
                bool all_theta_diverge = true;
                for (double th : theta_desc) {
                    std::vector<double> trace(radii.size());
                    parallel_for(radii.size(), [&](std::size_t rk) {
                        double sup = -std::numeric_limits<double>::infinity();
                        for (const auto& u : dirs) {
                            const Vec pt = radii[rk] * u;
                            const double v = (1.0 - th) *
                                                 system.weights[i].log_eval(pt) +
                                             th * system.weights[p].log_eval(pt) -
                                             system.weights[m].log_eval(pt);
                            sup = std::max(sup, v);
                        }
                        trace[rk] = sup;
                    });
                    double run_max = -std::numeric_limits<double>::infinity();
                    double half_max = run_max;
                    for (std::size_t k = 0; k < trace.size(); ++k) {
                        run_max = std::max(run_max, trace[k]);
                        if (k < trace.size() / 2) half_max = std::max(half_max, trace[k]);
                    }
                    const std::size_t q = trace.size();
                    const bool diverging =
                        trace[q - 1] > trace[q - 2] + std::log(kTol.diverge_factor) &&
                        trace[q - 2] > trace[q - 3] + std::log(kTol.diverge_factor) &&
                        trace[q - 1] > kTol.diverge_log;
                    const bool stabilized =
                        !diverging && run_max <= half_max + kTol.monotone_slack &&
                        run_max < 700.0;
                    if (!diverging) all_theta_diverge = false;
                    if (stabilized) {
                        chosen = th;
                        best_c = std::exp(std::max(run_max, -700.0));
                        break;
                    }
                }
                if (chosen >= 0.0) {
                    thetas.push_back({system.labels[p], chosen});
                } else {
                    m_ok = false;
                    if (all_theta_diverge) {
                        m_failed = true;
                        fail_info.M = system.labels[m];
                        fail_info.sample_x = radii.back() * dirs[0];
                        fail_info.diagnostic =
                            "log-ratio diverges for every theta at P = " +
                            std::to_string(system.labels[p]);
                    }
                }
                if (m_ok) w.C = std::max(w.C, best_c);
            }
            if (m_ok) {
                w.verdict = Verdict::NumericallySupported;
                w.M = system.labels[m];
                w.thetas = std::move(thetas);
                supported = true;
            } else if (!m_failed) {
                every_m_fails = false;
            }
        }
        if (!supported) {
            if (every_m_fails && candidates > 0) {
                w.verdict = Verdict::Falsified;
                w.M = fail_info.M;
                w.sample_x = fail_info.sample_x;
                w.diagnostic = fail_info.diagnostic;
                any_falsified = true;
            } else {
                w.verdict = Verdict::Undetermined;
                w.diagnostic = "exhausted indices";
            }
            all_ok = false;
        }
        rep.witnesses.push_back(std::move(w));
    }

    if (any_falsified)
        rep.verdict = Verdict::Falsified;
    else if (all_ok)
        rep.verdict = exponential ? Verdict::Certified
                                  : Verdict::NumericallySupported;
    else {
        rep.verdict = Verdict::Undetermined;
        rep.diagnostic = "exhausted indices";
    }
    return rep;
}

ConditionReport nachbin_member(const Weight& v,
                               const DecreasingWeightSystem& system,
                               std::vector<double> radii) {
    if (radii.empty()) radii = default_check_radii();
    if (radii.size() < 3 || !std::is_sorted(radii.begin(), radii.end()))
        throw ConfigError("nachbin_member: radii must be >= 3 strictly increasing");
    const auto dirs = probe_directions(system.dim);

    ConditionReport rep;
    rep.condition = ConditionId::Nachbin;
    bool any_falsified = false;

    for (std::size_t i = 0; i < system.count(); ++i) {
        ConditionWitness w;
        w.N = system.labels[i];
        std::vector<double> trace;
        for (double r : radii)
            trace.push_back(log_ratio_sup(v, system.weights[i], r, dirs));
        const std::size_t q = trace.size();
        const bool diverging =
            trace[q - 1] > trace[q - 2] + std::log(kTol.diverge_factor) &&
            trace[q - 2] > trace[q - 3] + std::log(kTol.diverge_factor);
        double run_max = -std::numeric_limits<double>::infinity(), half_max = run_max;
        for (std::size_t k = 0; k < q; ++k) {
            run_max = std::max(run_max, trace[k]);
            if (k < q / 2) half_max = std::max(half_max, trace[k]);
        }
        const bool bounded = !diverging && run_max <= half_max + kTol.monotone_slack;
        w.trace = std::move(trace);
        if (diverging) {
            w.verdict = Verdict::Falsified;
            w.sample_x = radii.back() * dirs[0];
            w.sample_value = w.trace.back();
            any_falsified = true;
        } else if (bounded) {
            w.verdict = Verdict::NumericallySupported;
            w.C = std::exp(std::min(run_max, 700.0));
        } else {
            w.verdict = Verdict::Undetermined;
            w.diagnostic = "trend inconclusive";
        }
        rep.witnesses.push_back(std::move(w));
    }

    bool all_ok = !rep.witnesses.empty();
    for (const auto& w : rep.witnesses)
        if (w.verdict != Verdict::NumericallySupported) all_ok = false;
    rep.verdict = any_falsified ? Verdict::Falsified
                  : all_ok      ? Verdict::NumericallySupported
                                : Verdict::Undetermined;
    return rep;
}

namespace {

const Weight* weight_for_label(const IncreasingWeightSystem& s, int label) {
    for (std::size_t i = 0; i < s.count(); ++i)
        if (s.labels[i] == label) return &s.weights[i];
    return nullptr;
}

const ConvexBody* body_for_label(const IncreasingWeightSystem& s, int label) {
    for (std::size_t i = 0; i < s.count(); ++i)
        if (s.labels[i] == label) return &s.bodies[i];
    return nullptr;
}

}  // namespace

bool replay(const ConditionReport& report, const IncreasingWeightSystem& system) {
    const auto dirs = probe_directions(system.dim);
    for (const auto& w : report.witnesses) {
        const Weight* wn = weight_for_label(system, w.N);
        if (!wn) return false;
        switch (report.condition) {
            case ConditionId::V: {
                if (w.verdict == Verdict::Falsified) {
                    if (w.sample_x.empty()) return false;
                    const Weight* wm = weight_for_label(system, w.M);
                    if (!wm) return false;
                    const double v =
                        wn->log_eval(w.sample_x) - wm->log_eval(w.sample_x);
                    if (!(v >= std::log(kTol.ratio_vanish))) return false;
                    break;
                }
                if (w.verdict != Verdict::NumericallySupported) break;
                const Weight* wm = weight_for_label(system, w.M);
                if (!wm) return false;
                const auto radii = default_check_radii();
                const double final_sup =
                    log_ratio_sup(*wn, *wm, radii.back(), dirs);
                if (!(final_sup < std::log(kTol.ratio_vanish))) return false;
                break;
            }
            case ConditionId::L1: {
                if (w.verdict != Verdict::NumericallySupported) break;
                if (w.trace.size() < 2) return false;
                const double inc = w.trace.back() - w.trace[w.trace.size() - 2];
                if (!(inc <= kTol.cauchy_rel * std::max(w.trace.back(), 1e-300)))
                    return false;
                break;
            }
            case ConditionId::TransInv: {
                if (w.verdict == Verdict::Undetermined) break;
                const Weight* w1 = weight_for_label(system, w.M1);
                const Weight* w2 = weight_for_label(system, w.M2);
                if (!w1 || !w2) return false;
                const double logC = std::log(std::max(w.C, 1e-300));
                const auto pairs = sample_pairs(system.dim, 10000, 0x7a115);
                for (const auto& [x, y] : pairs) {
                    const double lhs =
                        wn->log_eval(x + y) - w1->log_eval(x) - w2->log_eval(y);
                    if (lhs > logC + 1e-7) return false;
                }
                break;
            }
            case ConditionId::OmegaSwitched: {
                if (w.verdict == Verdict::Certified) {
                    const ConvexBody* KN = body_for_label(system, w.N);
                    const ConvexBody* KM = body_for_label(system, w.M);
                    if (!KN || !KM) return false;
                    for (const auto& th : w.thetas) {
                        const ConvexBody* KP = body_for_label(system, th.P);
                        if (!KP || !omega_geometric_ok(*KN, *KP, *KM, th.theta))
                            return false;
                    }
                } else if (w.verdict == Verdict::NumericallySupported) {
                    const Weight* wm = weight_for_label(system, w.M);
                    if (!wm) return false;
                    const double logC = std::log(std::max(w.C, 1.0)) + 1e-7;
                    const auto radii = default_omega_radii();
                    for (const auto& th : w.thetas) {
                        const Weight* wp = weight_for_label(system, th.P);
                        if (!wp) return false;
                        for (double r : {radii.front(), radii[radii.size() / 2],
                                         radii.back()}) {
                            for (const auto& u : dirs) {
                                const Vec pt = r * u;
                                const double v =
                                    (1.0 - th.theta) * wn->log_eval(pt) +
                                    th.theta * wp->log_eval(pt) -
                                    wm->log_eval(pt);
                                if (v > logC) return false;
                            }
                        }
                    }
                }
                break;
            }
            case ConditionId::Nachbin:
                return false;  // wrong system type
        }
    }
    return true;
}

bool replay(const ConditionReport& report, const DecreasingWeightSystem& system,
            const Weight* nachbin_candidate) {
    const auto dirs = probe_directions(system.dim);
    const auto radii = default_check_radii();
    for (const auto& w : report.witnesses) {
        const Weight* wn = nullptr;
        for (std::size_t i = 0; i < system.count(); ++i)
            if (system.labels[i] == w.N) wn = &system.weights[i];
        if (!wn) return false;
        if (report.condition == ConditionId::V) {
            if (w.verdict != Verdict::NumericallySupported) continue;
            const Weight* wm = nullptr;
            for (std::size_t i = 0; i < system.count(); ++i)
                if (system.labels[i] == w.M) wm = &system.weights[i];
            if (!wm) return false;
            if (!(log_ratio_sup(*wm, *wn, radii.back(), dirs) <
                  std::log(kTol.ratio_vanish)))
                return false;
        } else if (report.condition == ConditionId::Nachbin) {
            if (!nachbin_candidate) return false;
            if (w.verdict == Verdict::Falsified) {
                // The stored sample must still exhibit a large ratio.
                if (w.sample_x.empty()) return false;
                const double v =
                    nachbin_candidate->log_eval(w.sample_x) -
                    wn->log_eval(w.sample_x);
                if (!(v >= w.sample_value - 1e-9)) return false;
            }
        }
    }
    return true;
}

}  // namespace gstft
