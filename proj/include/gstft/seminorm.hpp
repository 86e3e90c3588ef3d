#pragma once

#include <functional>

#include "gstft/stft.hpp"
#include "gstft/weights.hpp"

namespace gstft {

struct BoundViolation {
    Vec x, xi, eta;
    double ratio = 0.0;
};

/// Result of a sampled LHS <= RHS certification sweep.
struct BoundReport {
    long n_points = 0;
    double max_ratio = 0.0;
    std::vector<BoundViolation> violations;
    double constant_used = 0.0;
    double tolerance = 1e-8;

    bool clean() const { return violations.empty(); }
};

nlohmann::json to_json(const BoundReport& r);

enum class Trend { Bounded, Diverging, Inconclusive };
std::string to_string(Trend t);

struct TrendRow {
    int index = 0;    // N, or a row id for per-phi tables
    int witness = -1; // tensor scan: first n with a bounded trend
    Trend trend = Trend::Inconclusive;
    std::vector<double> sups;
    double bound = 0.0;   // e.g. e p_{K_eps,B}(f) when computed
    bool bound_ok = true;
    std::string note;
};

struct MembershipVerdict {
    std::vector<TrendRow> rows;
    Trend overall = Trend::Inconclusive;

    bool all_bounded() const {
        for (const auto& r : rows)
            if (r.trend != Trend::Bounded) return false;
        return !rows.empty();
    }
};

nlohmann::json to_json(const MembershipVerdict& v);

/// Stabilization < 5% on the last increment => Bounded; last three sups
/// each growing by more than 1.5x => Diverging; else Inconclusive.
Trend classify_trend(const std::vector<double>& sups);

struct SupGridOptions {
    int points_1d = 4097;
    int points_2d = 129;
    int points_3d = 33;
    double boundary_guard = 1e-9;
    int expand_tries = 10;
};

/// ||phi||_{S^n_k} = max_{|a|<=n} sup |d^a phi| (1+|t|)^k by dense-grid
/// max over a box with a checked boundary guard.
double schwartz_norm(const SmoothFunction& phi, int k, int n,
                     const SupGridOptions& opt = {});

/// Same with an arbitrary weight in place of (1+|t|)^k.
double weighted_cn_norm(const SmoothFunction& phi, const Weight& v, int n,
                        const SupGridOptions& opt = {});

/// ||F||_{K,v} = max over grid nodes of |F| e^{h_-K(x)} v(xi).
double tf_weighted_norm(const TimeFrequencyField& F, const ConvexBody& K,
                        const Weight& v);

/// p_{K,B}(f) sampled over the eta lattice of K (exact vertex set plus
/// seeded interior points) and the finite family B.
double p_seminorm(const TestDistribution& f, const ConvexBody& K,
                  const std::vector<SchwartzGaussian>& B, int eta_samples,
                  const QuadSpec& quad);

struct Lemma1Config {
    GridSpec sample_grid;  // (x, xi) sample lattice
    int eta_samples = 24;
    SupGridOptions sup;
};

/// Bounded-family estimate: the weighted S^n_k norms of the tilted STFT
/// brackets against the proof's product constant.
BoundReport lemma1_suite(const Window& psi, const ConvexBody& K, double eps,
                         const Weight& v, int k, int n, const Lemma1Config& cfg);

/// The displayed constant C_{eta,k,n,psi}.
double lemma2_constant(const Window& psi, const Vec& eta, int k, int n,
                       const QuadSpec& quad);

/// Pointwise decay bound on V_conj(psi)(e^{-eta t} phi)(x,-xi) over the grid.
BoundReport lemma2_suite(const Window& psi, const Vec& eta, int k, int n,
                         const SchwartzGaussian& phi, const GridSpec& grid,
                         const QuadSpec& quad);

/// Expanding-window ladder used by the membership suites.
std::vector<GridSpec> default_ladder(int dim, int windows = 4,
                                     double x0 = 6.0, double xi0 = 6.0,
                                     int x_nodes = 61, int xi_nodes = 41);

/// Trend of ||V_psi f||_{K,v} over the window ladder (no bound check);
/// also exercised directly by the out-of-Gamma negative controls.
TrendRow weighted_norm_trend(const TestDistribution& f, const ConvexBody& K,
                             const Window& psi, const Weight& v,
                             const std::vector<GridSpec>& ladder,
                             const QuadSpec& quad);

/// Per-exhaustion-body membership of V_psi f in the weighted field space,
/// each row carrying the proof bound e p_{K_eps,B}(f) comparison.
MembershipVerdict gamma_membership(const TestDistribution& f,
                                   const OpenConvexRegion& region,
                                   const Window& psi, const Weight& v,
                                   const std::vector<GridSpec>& ladder,
                                   int N_max, const QuadSpec& quad);

/// Dominating polynomial weight for the adjoint continuity estimate:
/// v0(xi) = C* (1+|xi|)^{-n} with C* = max over the eta lattice and B of
/// C_{eta,0,n,psi} ||phi||_{S^n_0}.
Weight adjoint_dominating_weight(const Window& psi, const ConvexBody& K,
                                 const std::vector<SchwartzGaussian>& B, int n,
                                 int eta_samples, const QuadSpec& quad);

/// p_{K,B}(V*_psi F) <= C ||F||_{K_eps, w} with w = v0 (1+|xi|)^{d+1} and
/// the closed-form radial constant C.
BoundReport adjoint_bound_suite(const TimeFrequencyField& F,
                                const OpenConvexRegion& region,
                                const Window& psi, int K_index, double eps,
                                const std::vector<SchwartzGaussian>& B,
                                const Weight& v0, int eta_samples,
                                const QuadSpec& quad);

/// For each N of W find the first n of V with a bounded trend of
/// sup |F| w_N(x) v_n(xi) over the ladder.
MembershipVerdict tensor_membership_scan(
    const std::function<TimeFrequencyField(const GridSpec&)>& family,
    const std::vector<GridSpec>& ladder, const IncreasingWeightSystem& W,
    const DecreasingWeightSystem& V);

/// sup_x |(f * phi)(x)| w_N(x) < infinity for every phi and N, decided on
/// expanding x-grids.
MembershipVerdict convolutor_suite(
    const TestDistribution& f,
    const std::vector<std::pair<Window, Vec>>& phis,
    const IncreasingWeightSystem& W, const std::vector<double>& x_radii,
    int grid_points, const QuadSpec& quad);

}  // namespace gstft
