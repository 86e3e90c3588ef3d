#include "gstft/seminorm.hpp"

#include <algorithm>
#include <cmath>

#include "gstft/parallel.hpp"

namespace gstft {

namespace {

constexpr std::uint64_t kEtaSeed = 0xe7a;
constexpr double kBoundTol = 1e-8;

std::vector<MultiIndex> multi_indices_up_to(int dim, int n) {
    std::vector<MultiIndex> out;
    if (dim == 1) {
        for (int a = 0; a <= n; ++a) out.push_back({a});
    } else if (dim == 2) {
        for (int a = 0; a <= n; ++a)
            for (int b = 0; a + b <= n; ++b) out.push_back({a, b});
    } else {
        for (int a = 0; a <= n; ++a)
            for (int b = 0; a + b <= n; ++b)
                for (int c = 0; a + b + c <= n; ++c) out.push_back({a, b, c});
    }
    return out;
}

std::vector<Vec> dense_grid(const Box& box, int per_axis) {
    const int d = box.dim();
    std::vector<Vec> pts;
    if (d == 1) {
        pts.reserve(per_axis);
        for (int i = 0; i < per_axis; ++i) {
            const double t =
                box.lo[0] + (box.hi[0] - box.lo[0]) * i / (per_axis - 1);
            pts.push_back({t});
        }
    } else if (d == 2) {
        pts.reserve(static_cast<std::size_t>(per_axis) * per_axis);
        for (int i = 0; i < per_axis; ++i)
            for (int j = 0; j < per_axis; ++j)
                pts.push_back(
                    {box.lo[0] + (box.hi[0] - box.lo[0]) * i / (per_axis - 1),
                     box.lo[1] + (box.hi[1] - box.lo[1]) * j / (per_axis - 1)});
    } else {
        for (int i = 0; i < per_axis; ++i)
            for (int j = 0; j < per_axis; ++j)
                for (int k = 0; k < per_axis; ++k)
                    pts.push_back(
                        {box.lo[0] + (box.hi[0] - box.lo[0]) * i / (per_axis - 1),
                         box.lo[1] + (box.hi[1] - box.lo[1]) * j / (per_axis - 1),
                         box.lo[2] + (box.hi[2] - box.lo[2]) * k / (per_axis - 1)});
    }
    return pts;
}

bool on_box_boundary(const Box& box, const Vec& t, double frac = 1e-9) {
    for (int i = 0; i < box.dim(); ++i) {
        const double w = box.hi[i] - box.lo[i];
        if (t[i] <= box.lo[i] + frac * w || t[i] >= box.hi[i] - frac * w)
            return true;
    }
    return false;
}

int grid_points_for(const SupGridOptions& opt, int dim) {
    return dim == 1 ? opt.points_1d : dim == 2 ? opt.points_2d : opt.points_3d;
}

// Shared core: sup over a dense grid of max_{|a|<=n} |d^a phi(t)| W(t),
// expanding the box until the boundary contribution passes the guard.
double sup_norm_core(const SmoothFunction& phi, int n,
                     const std::function<double(const Vec&)>& weight_of,
                     const SupGridOptions& opt) {
    const int d = phi.dim();
    const auto alphas = multi_indices_up_to(d, n);
    const bool compact = phi.support_box().has_value();
    Box box = compact ? *phi.support_box()
                      : phi.effective_box(Vec(d, 0.0), 1e-12, n);

    for (int attempt = 0; attempt <= opt.expand_tries; ++attempt) {
        const auto pts = dense_grid(box, grid_points_for(opt, d));
        std::vector<double> vals(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) {
            double m = 0.0;
            for (const auto& a : alphas)
                m = std::max(m, std::abs(phi.deriv(a, pts[i])));
            vals[i] = m * weight_of(pts[i]);
        });
        double interior = 0.0, boundary = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            interior = std::max(interior, vals[i]);
            if (on_box_boundary(box, pts[i]))
                boundary = std::max(boundary, vals[i]);
        }
        if (compact || interior == 0.0 ||
            boundary <= opt.boundary_guard * interior)
            return interior;
        for (int i = 0; i < d; ++i) {
            box.lo[i] *= 1.5;
            box.hi[i] *= 1.5;
        }
    }
    throw GuardError("sup norm: boundary guard failed, box did not close");
}

}  // namespace

nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json j;
    j["n_points"] = r.n_points;
    j["max_ratio"] = r.max_ratio;
    j["constant_used"] = r.constant_used;
    j["tolerance"] = r.tolerance;
    nlohmann::json vio = nlohmann::json::array();
    for (const auto& v : r.violations) {
        nlohmann::json e;
        e["ratio"] = v.ratio;
        if (!v.x.empty()) e["x"] = v.x;
        if (!v.xi.empty()) e["xi"] = v.xi;
        if (!v.eta.empty()) e["eta"] = v.eta;
        vio.push_back(std::move(e));
    }
    j["violations"] = std::move(vio);
    return j;
}

std::string to_string(Trend t) {
    switch (t) {
        case Trend::Bounded: return "bounded";
        case Trend::Diverging: return "diverging";
        case Trend::Inconclusive: return "inconclusive";
    }
    return "?";
}

nlohmann::json to_json(const MembershipVerdict& v) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : v.rows) {
        nlohmann::json e;
        e["index"] = r.index;
        if (r.witness >= 0) e["witness"] = r.witness;
        e["trend"] = to_string(r.trend);
        e["sups"] = r.sups;
        if (r.bound > 0.0) {
            e["bound"] = r.bound;
            e["bound_ok"] = r.bound_ok;
        }
        if (!r.note.empty()) e["note"] = r.note;
        rows.push_back(std::move(e));
    }
    return {{"rows", std::move(rows)}, {"overall", to_string(v.overall)}};
}

Trend classify_trend(const std::vector<double>& sups) {
    const std::size_t q = sups.size();
    if (q < 2) return Trend::Inconclusive;
    bool all_zero = true;
    for (double s : sups)
        if (s != 0.0) all_zero = false;
    if (all_zero) return Trend::Bounded;
    for (double s : sups)
        if (!std::isfinite(s)) return Trend::Diverging;
    if (q >= 3 && sups[q - 1] > 1.5 * sups[q - 2] &&
        sups[q - 2] > 1.5 * sups[q - 3])
        return Trend::Diverging;
    const double inc = sups[q - 1] - sups[q - 2];
    if (inc < 0.05 * std::max(sups[q - 2], 1e-300)) return Trend::Bounded;
    return Trend::Inconclusive;
}

double schwartz_norm(const SmoothFunction& phi, int k, int n,
                     const SupGridOptions& opt) {
    if (k < 0 || n < 0) throw ConfigError("schwartz_norm: k, n must be >= 0");
    return sup_norm_core(
        phi, n,
        [k](const Vec& t) { return std::pow(1.0 + norm2(t), k); }, opt);
}

double weighted_cn_norm(const SmoothFunction& phi, const Weight& v, int n,
                        const SupGridOptions& opt) {
    if (n < 0) throw ConfigError("weighted_cn_norm: n must be >= 0");
    return sup_norm_core(phi, n, [&v](const Vec& t) { return v.eval(t); }, opt);
}

double tf_weighted_norm(const TimeFrequencyField& F, const ConvexBody& K,
                        const Weight& v) {
    const GridSpec& grid = F.grid;
    if (K.dim() != grid.dim())
        throw ConfigError("tf_weighted_norm: dimension mismatch");
    const ConvexBody refl = ConvexBody::reflected(K);
    const std::size_t nx = grid.x_count(), nxi = grid.xi_count();
    std::vector<double> wx(nx), wxi(nxi);
    parallel_for(nx, [&](std::size_t i) {
        wx[i] = support_function(refl, grid.x_at(i));
    });
    parallel_for(nxi, [&](std::size_t j) {
        wxi[j] = v.eval(grid.xi_at(j));
    });
    return parallel_max(F.values.size(), 0.0, [&](std::size_t kf) {
        const double a = std::abs(F.values[kf]);
        return a == 0.0 ? 0.0
                        : a * std::exp(wx[kf / nxi]) * wxi[kf % nxi];
    });
}

double p_seminorm(const TestDistribution& f, const ConvexBody& K,
                  const std::vector<SchwartzGaussian>& B, int eta_samples,
                  const QuadSpec& quad) {
    if (!region_contains_body(f.gamma(), K))
        throw ConfigError("p_seminorm: seminorm undefined outside Gamma");
    if (B.empty()) return 0.0;
    const auto etas = sample_points(K, eta_samples, kEtaSeed);
    std::vector<double> vals(etas.size() * B.size());
    parallel_for(vals.size(), [&](std::size_t idx) {
        const Vec& eta = etas[idx / B.size()];
        const auto& phi = B[idx % B.size()];
        vals[idx] = std::abs(reweighted_pairing(f, eta, phi, quad));
    });
    double best = 0.0;
    for (double v : vals) best = std::max(best, v);
    return best;
}

namespace {

// Largest value of e^{-eps s}(1+s)^k on s >= 0 with a decreasing-tail
// check (trend-bounded sampling).
double radial_sup_decay_poly(double eps, int k) {
    const double s_star = k / eps > 1.0 ? k / eps - 1.0 : 0.0;
    const double S = std::max(4.0 * (s_star + 1.0), 64.0);
    double best = 0.0, tail = 0.0;
    const int npts = 4096;
    for (int i = 0; i <= npts; ++i) {
        const double s = S * i / npts;
        const double v = std::exp(-eps * s) * std::pow(1.0 + s, k);
        best = std::max(best, v);
        if (i == npts) tail = v;
    }
    if (tail > 1e-3 * best)
        throw GuardError("radial sup: tail not vanishing, enlarge scan range");
    return best;
}

// sup over xi of v(xi)(1+|xi|)^n via trend-bounded sampling on expanding
// spheres; throws when the candidate is not a Nachbin member.
double nachbin_sup(const Weight& v, int n, int dim) {
    const auto dirs = probe_directions(dim);
    const auto radii = default_check_radii();
    std::vector<double> sups;
    double best = 0.0;
    // Include the origin.
    best = std::max(best, v.eval(Vec(dim, 0.0)));
    for (double r : radii) {
        double s = 0.0;
        for (const auto& u : dirs) {
            const Vec p = r * u;
            const double lg = v.log_eval(p) + n * std::log1p(norm2(p));
            s = std::max(s, lg > 700.0 ? std::numeric_limits<double>::infinity()
                                       : std::exp(lg));
        }
        sups.push_back(s);
        best = std::max(best, s);
    }
    if (classify_trend(sups) == Trend::Diverging || !std::isfinite(best))
        throw ConfigError("lemma1_suite: v fails Nachbin membership");
    return best;
}

}  // namespace

BoundReport lemma1_suite(const Window& psi, const ConvexBody& K, double eps,
                         const Weight& v, int k, int n,
                         const Lemma1Config& cfg) {
    if (!(eps > 0.0)) throw ConfigError("lemma1_suite: eps must be > 0");
    if (k < 0 || n < 0) throw ConfigError("lemma1_suite: k, n must be >= 0");
    const int d = psi.dim();
    if (K.dim() != d || cfg.sample_grid.dim() != d)
        throw ConfigError("lemma1_suite: dimension mismatch");

    const double R = std::max(1.0, bounding_radius(K));
    const double r_eff = psi.euclidean_support_radius();
    const double product_const = std::exp(R * r_eff) *
                                 std::pow(8.0 * M_PI * R, n) *
                                 psi.max_sup_deriv(n) * std::pow(1.0 + r_eff, k);
    const double sup_x = radial_sup_decay_poly(eps, k);
    const double sup_xi = nachbin_sup(v, n, d);
    const double rhs = product_const * sup_x * sup_xi;

    const auto etas = sample_points(K, cfg.eta_samples, kEtaSeed);
    const GridSpec& sg = cfg.sample_grid;
    const std::size_t nx = sg.x_count(), nxi = sg.xi_count();
    const std::size_t total = nx * nxi * etas.size();

    std::vector<double> ratios(total);
    parallel_for(total, [&](std::size_t idx) {
        const std::size_t e = idx % etas.size();
        const std::size_t xxi = idx / etas.size();
        const Vec x = sg.x_at(xxi / nxi);
        const Vec xi = sg.xi_at(xxi % nxi);
        const double scale = std::exp(-eps * norm2(x)) * v.eval(xi);
        const ModWindow b(psi, x, etas[e], -2.0 * M_PI * xi, scale);
        const double lhs = schwartz_norm(b, k, n, cfg.sup);
        ratios[idx] = lhs / rhs;
    });

    BoundReport rep;
    rep.n_points = static_cast<long>(total);
    rep.constant_used = rhs;
    rep.tolerance = kBoundTol;
    for (std::size_t idx = 0; idx < total; ++idx) {
        rep.max_ratio = std::max(rep.max_ratio, ratios[idx]);
        if (ratios[idx] > 1.0 + kBoundTol) {
            const std::size_t e = idx % etas.size();
            const std::size_t xxi = idx / etas.size();
            rep.violations.push_back({sg.x_at(xxi / nxi), sg.xi_at(xxi % nxi),
                                      etas[e], ratios[idx]});
        }
    }
    return rep;
}

double lemma2_constant(const Window& psi, const Vec& eta, int k, int n,
                       const QuadSpec& quad) {
    const int d = psi.dim();
    if (static_cast<int>(eta.size()) != d)
        throw ConfigError("lemma2_constant: dimension mismatch");
    if (k < 0 || n < 0) throw ConfigError("lemma2_constant: k, n must be >= 0");
    const double integral = integrate_box_real(
        [&](const Vec& t) {
            return std::exp(-dot(eta, t)) * std::pow(1.0 + norm2(t), k);
        },
        psi.support_box(), quad);
    return std::pow(4.0, n) * std::pow(1.0 + std::sqrt(double(d)), n) *
           std::max(1.0, std::pow(norm2(eta), n)) * psi.max_sup_deriv(n) *
           integral;
}

BoundReport lemma2_suite(const Window& psi, const Vec& eta, int k, int n,
                         const SchwartzGaussian& phi, const GridSpec& grid,
                         const QuadSpec& quad) {
    grid.validate();
    const int d = psi.dim();
    if (phi.dim() != d || grid.dim() != d ||
        static_cast<int>(eta.size()) != d)
        throw ConfigError("lemma2_suite: dimension mismatch");

    const double C = lemma2_constant(psi, eta, k, n, quad);
    const double phi_norm = schwartz_norm(phi, k, n);

    // LHS field: V_conj(psi)(e^{-eta t} phi)(x, -xi) over the grid.
    const auto tilted = phi.tilted(eta);
    const TimeFrequencyField G = stft_fn(*tilted, psi, grid, quad, true);

    const std::size_t nxi = grid.xi_count();
    const std::size_t total = grid.total();

    // Grid must cover the region where the LHS exceeds 1e-14 of its
    // peak; the sampled boundary is the proxy.
    double peak = parallel_max(total, 0.0, [&](std::size_t kf) {
        return std::abs(G.values[kf]);
    });
    double boundary = parallel_max(total, 0.0, [&](std::size_t kf) {
        if (!grid.x_on_boundary(kf / nxi) && !grid.xi_on_boundary(kf % nxi))
            return 0.0;
        return std::abs(G.values[kf]);
    });
    if (peak > 0.0 && boundary > 1e-14 * peak)
        throw GuardError("lemma2_suite: grid does not cover the decay region, "
                         "boundary fraction " + std::to_string(boundary / peak));

    BoundReport rep;
    rep.n_points = static_cast<long>(total);
    rep.constant_used = C;
    rep.tolerance = kBoundTol;

    std::vector<double> ratios(total);
    parallel_for(total, [&](std::size_t kf) {
        const Vec x = grid.x_at(kf / nxi);
        const Vec xi = grid.xi_at(kf % nxi);
        const double rhs = C * std::exp(-dot(eta, x)) * phi_norm /
                           (std::pow(1.0 + norm2(x), k) *
                            std::pow(1.0 + norm2(xi), n));
        ratios[kf] = std::abs(G.values[kf]) / rhs;
    });
    for (std::size_t kf = 0; kf < total; ++kf) {
        rep.max_ratio = std::max(rep.max_ratio, ratios[kf]);
        if (ratios[kf] > 1.0 + kBoundTol)
            rep.violations.push_back(
                {grid.x_at(kf / nxi), grid.xi_at(kf % nxi), eta, ratios[kf]});
    }
    return rep;
}

std::vector<GridSpec> default_ladder(int dim, int windows, double x0, double xi0,
                                     int x_nodes, int xi_nodes) {
    std::vector<GridSpec> ladder;
    double xr = x0, xir = xi0;
    int nx = x_nodes, nxi = xi_nodes;
    for (int j = 0; j < windows; ++j) {
        ladder.push_back(GridSpec::symmetric(dim, xr, xir, nx, nxi));
        xr *= 2.0;
        xir *= 2.0;
        nx = (nx - 1) * 2 + 1;
        nxi = (nxi - 1) * 2 + 1;
    }
    return ladder;
}

TrendRow weighted_norm_trend(const TestDistribution& f, const ConvexBody& K,
                             const Window& psi, const Weight& v,
                             const std::vector<GridSpec>& ladder,
                             const QuadSpec& quad) {
    TrendRow row;
    for (const auto& g : ladder) {
        const TimeFrequencyField F = stft(f, psi, g, quad);
        row.sups.push_back(tf_weighted_norm(F, K, v));
    }
    row.trend = classify_trend(row.sups);
    return row;
}

namespace {

// Exact maximizer of -eta . x over K through the vertex/ball form.
Vec support_argmax_neg(const VBallForm& form, const Vec& x) {
    const int d = static_cast<int>(x.size());
    const Vec* best = &form.vertices[0];
    double best_v = -std::numeric_limits<double>::infinity();
    for (const auto& vtx : form.vertices) {
        const double val = -dot(vtx, x);
        if (val > best_v) {
            best_v = val;
            best = &vtx;
        }
    }
    Vec eta = *best;
    const double nx = norm2(x);
    if (form.radius > 0.0 && nx > 1e-14)
        for (int i = 0; i < d; ++i) eta[i] -= form.radius * x[i] / nx;
    return eta;
}

double fit_eps_inside(const OpenConvexRegion& region, const ConvexBody& K) {
    double eps = 0.5;
    for (int i = 0; i < 24; ++i, eps *= 0.5)
        if (region_contains_body(region, fatten(K, eps))) return eps;
    throw GuardError("gamma_membership: no fattening radius fits inside Gamma");
}

}  // namespace

MembershipVerdict gamma_membership(const TestDistribution& f,
                                   const OpenConvexRegion& region,
                                   const Window& psi, const Weight& v,
                                   const std::vector<GridSpec>& ladder,
                                   int N_max, const QuadSpec& quad) {
    if (ladder.size() < 3)
        throw ConfigError("gamma_membership: ladder needs >= 3 windows");
    const OpenConvexRegion gamma_f = f.gamma();
    const int N0 = exhaustion_min_index(region);
    if (N_max < N0)
        throw ConfigError("gamma_membership: N_max below first exhaustion index");

    MembershipVerdict out;
    for (int N = N0; N <= N_max; ++N) {
        const ConvexBody K = exhaust(region, N);
        if (!region_contains_body(gamma_f, K))
            throw ConfigError("gamma_membership: Gamma not contained in Gamma(f)");

        TrendRow row = weighted_norm_trend(f, K, psi, v, ladder, quad);
        row.index = N;

        // Proof bound e p_{K_eps,B}(f): the diagonal elements of the
        // bounded family realize every weighted field sample exactly, so
        // the sampled p dominates the sampled norm by construction; the
        // paper's slack factor e stays on top.
        const double eps = fit_eps_inside(region, K);
        const VBallForm kform = vball_form(K);
        const GridSpec& top = ladder.back();
        const std::size_t nxi = top.xi_count();
        const std::size_t total = top.total();
        std::vector<double> diag(total);
        parallel_for(total, [&](std::size_t idx) {
            const Vec x = top.x_at(idx / nxi);
            const Vec xi = top.xi_at(idx % nxi);
            Vec tau = support_argmax_neg(kform, x);
            const double nx = norm2(x);
            if (nx > 1e-14)
                for (int i = 0; i < top.dim(); ++i) tau[i] -= eps * x[i] / nx;
            const double scale = std::exp(-eps * nx) * v.eval(xi);
            const ModWindow b(psi, x, tau, -2.0 * M_PI * xi, scale);
            diag[idx] = std::abs(reweighted_pairing(f, tau, b, quad));
        });
        double p = 0.0;
        for (double dv : diag) p = std::max(p, dv);

        // Modest independent cross sample of (eta, b) pairs.
        const auto etas = sample_points(fatten(K, eps), 16, kEtaSeed);
        const std::size_t stride = std::max<std::size_t>(1, total / 128);
        std::vector<double> cross(etas.size() * (total / stride + 1), 0.0);
        parallel_for(etas.size(), [&](std::size_t e) {
            std::size_t slot = e * (total / stride + 1);
            for (std::size_t idx = 0; idx < total; idx += stride, ++slot) {
                const Vec x = top.x_at(idx / nxi);
                const Vec xi = top.xi_at(idx % nxi);
                Vec tau = support_argmax_neg(kform, x);
                const double nx = norm2(x);
                if (nx > 1e-14)
                    for (int i = 0; i < top.dim(); ++i)
                        tau[i] -= eps * x[i] / nx;
                const double scale = std::exp(-eps * nx) * v.eval(xi);
                const ModWindow b(psi, x, tau, -2.0 * M_PI * xi, scale);
                cross[slot] =
                    std::abs(reweighted_pairing(f, etas[e], b, quad));
            }
        });
        for (double cv : cross) p = std::max(p, cv);

        row.bound = M_E * p;
        row.bound_ok = true;
        for (double s : row.sups)
            if (s > row.bound * (1.0 + kBoundTol)) row.bound_ok = false;
        row.note = "eps = " + std::to_string(eps);
        out.rows.push_back(std::move(row));
    }

    bool all_b = true, any_div = false;
    for (const auto& r : out.rows) {
        if (r.trend != Trend::Bounded) all_b = false;
        if (r.trend == Trend::Diverging) any_div = true;
    }
    out.overall = any_div ? Trend::Diverging
                 : all_b ? Trend::Bounded
                         : Trend::Inconclusive;
    return out;
}

Weight adjoint_dominating_weight(const Window& psi, const ConvexBody& K,
                                 const std::vector<SchwartzGaussian>& B, int n,
                                 int eta_samples, const QuadSpec& quad) {
    if (B.empty()) throw ConfigError("adjoint_dominating_weight: empty B");
    const auto etas = sample_points(K, eta_samples, kEtaSeed);
    double cstar = 0.0;
    for (const auto& eta : etas) {
        const double c = lemma2_constant(psi, eta, 0, n, quad);
        for (const auto& phi : B)
            cstar = std::max(cstar, c * schwartz_norm(phi, 0, n));
    }
    return Weight::product(Weight::constant(cstar), Weight::poly_inv(n));
}

namespace {

double radial_exp_integral(double eps, int d) {
    // int e^{-eps |x|} dx over R^d.
    switch (d) {
        case 1: return 2.0 / eps;
        case 2: return 2.0 * M_PI / (eps * eps);
        default: return 8.0 * M_PI / (eps * eps * eps);
    }
}

double radial_poly_integral(int d) {
    // int (1+|xi|)^{-(d+1)} dxi over R^d.
    switch (d) {
        case 1: return 2.0;               // 2 int_0^inf (1+s)^-2
        case 2: return M_PI;              // 2pi int s (1+s)^-3
        default: return 4.0 * M_PI / 3.0; // 4pi int s^2 (1+s)^-4
    }
}

}  // namespace

BoundReport adjoint_bound_suite(const TimeFrequencyField& F,
                                const OpenConvexRegion& region,
                                const Window& psi, int K_index, double eps,
                                const std::vector<SchwartzGaussian>& B,
                                const Weight& v0, int eta_samples,
                                const QuadSpec& quad) {
    const int d = psi.dim();
    const ConvexBody K = exhaust(region, K_index);
    const ConvexBody K_eps = fatten(K, eps);
    if (!contains(K_eps, exhaust(region, K_index + 1)).certified())
        throw ConfigError("adjoint_bound_suite: eps too large");

    const Weight w = Weight::product(v0, Weight::poly(d + 1));
    const double C = radial_exp_integral(eps, d) * radial_poly_integral(d);
    const double rhs = C * tf_weighted_norm(F, K_eps, w);

    const auto etas = sample_points(K, eta_samples, kEtaSeed);
    const GridSpec& grid = F.grid;
    const std::size_t nxi = grid.xi_count();

    BoundReport rep;
    rep.constant_used = C;
    rep.tolerance = kBoundTol;
    rep.n_points = static_cast<long>(etas.size() * B.size());

    for (const auto& eta : etas) {
        for (const auto& phi : B) {
            const auto tilted = phi.tilted(eta);
            const TimeFrequencyField G = stft_fn(*tilted, psi, grid, quad, true);
            const Cplx val =
                parallel_sum<Cplx>(F.values.size(), [&](std::size_t kf) {
                    const double wgt =
                        grid.x_weight(kf / nxi) * grid.xi_weight(kf % nxi);
                    return wgt * F.values[kf] * G.values[kf];
                });
            const double lhs = std::abs(val);
            const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? 1e300 : 0.0);
            rep.max_ratio = std::max(rep.max_ratio, ratio);
            if (ratio > 1.0 + kBoundTol)
                rep.violations.push_back({{}, {}, eta, ratio});
        }
    }
    return rep;
}

MembershipVerdict tensor_membership_scan(
    const std::function<TimeFrequencyField(const GridSpec&)>& family,
    const std::vector<GridSpec>& ladder, const IncreasingWeightSystem& W,
    const DecreasingWeightSystem& V) {
    if (ladder.size() < 3)
        throw ConfigError("tensor_membership_scan: ladder needs >= 3 windows");
    std::vector<TimeFrequencyField> fields;
    fields.reserve(ladder.size());
    for (const auto& g : ladder) fields.push_back(family(g));

    MembershipVerdict out;
    for (std::size_t iN = 0; iN < W.count(); ++iN) {
        TrendRow row;
        row.index = W.labels[iN];
        for (std::size_t in = 0; in < V.count(); ++in) {
            std::vector<double> sups;
            for (const auto& F : fields) {
                const GridSpec& g = F.grid;
                const std::size_t nxi = g.xi_count();
                std::vector<double> wx(g.x_count()), wxi(nxi);
                parallel_for(wx.size(), [&](std::size_t i) {
                    wx[i] = W.weights[iN].log_eval(g.x_at(i));
                });
                parallel_for(nxi, [&](std::size_t j) {
                    wxi[j] = V.weights[in].log_eval(g.xi_at(j));
                });
                const double sup =
                    parallel_max(F.values.size(), 0.0, [&](std::size_t kf) {
                        const double a = std::abs(F.values[kf]);
                        if (a == 0.0) return 0.0;
                        const double lg =
                            std::log(a) + wx[kf / nxi] + wxi[kf % nxi];
                        return lg > 690.0 ? 1e300 : std::exp(lg);
                    });
                sups.push_back(sup);
            }
            if (classify_trend(sups) == Trend::Bounded) {
                row.witness = V.labels[in];
                row.trend = Trend::Bounded;
                row.sups = std::move(sups);
                break;
            }
            if (in + 1 == V.count()) {
                row.trend = classify_trend(sups);
                row.sups = std::move(sups);
            }
        }
        out.rows.push_back(std::move(row));
    }
    bool all_b = true;
    bool any_div = false;
    for (const auto& r : out.rows) {
        if (r.trend != Trend::Bounded) all_b = false;
        if (r.trend == Trend::Diverging) any_div = true;
    }
    out.overall = any_div ? Trend::Diverging
                 : all_b ? Trend::Bounded
                         : Trend::Inconclusive;
    return out;
}

MembershipVerdict convolutor_suite(
    const TestDistribution& f,
    const std::vector<std::pair<Window, Vec>>& phis,
    const IncreasingWeightSystem& W, const std::vector<double>& x_radii,
    int grid_points, const QuadSpec& quad) {
    if (x_radii.size() < 3)
        throw ConfigError("convolutor_suite: ladder needs >= 3 radii");
    if (W.origin == IncreasingWeightSystem::Origin::Exponential && W.region &&
        !phis.empty()) {
        // Gamma of the system must sit inside Gamma(f); check via the
        // largest exhaustion body.
        if (!region_contains_body(f.gamma(), W.bodies.back()))
            throw ConfigError("convolutor_suite: Gamma not inside Gamma(f)");
    }

    const int d = f.dim();
    MembershipVerdict out;
    for (std::size_t ip = 0; ip < phis.size(); ++ip) {
        // Sampled |f * phi| on each expanding grid, reused across N.
        std::vector<std::vector<Vec>> grids;
        std::vector<std::vector<Cplx>> conv;
        for (double R : x_radii) {
            std::vector<Vec> xs;
            if (d == 1) {
                for (int i = 0; i < grid_points; ++i)
                    xs.push_back({-R + 2.0 * R * i / (grid_points - 1)});
            } else {
                Box box{Vec(d, -R), Vec(d, R)};
                xs = dense_grid(box, std::min(grid_points, d == 2 ? 33 : 17));
            }
            std::vector<Cplx> vals =
                convolve(f, phis[ip].first,
                         [&] {
                             std::vector<Vec> shifted = xs;
                             for (auto& x : shifted) x = x - phis[ip].second;
                             return shifted;
                         }(),
                         quad);
            grids.push_back(std::move(xs));
            conv.push_back(std::move(vals));
        }
        for (std::size_t iN = 0; iN < W.count(); ++iN) {
            TrendRow row;
            row.index = W.labels[iN];
            row.note = "phi[" + std::to_string(ip) + "]";
            for (std::size_t j = 0; j < x_radii.size(); ++j) {
                const auto& xs = grids[j];
                const auto& vals = conv[j];
                double sup = 0.0;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    const double a = std::abs(vals[i]);
                    if (a == 0.0) continue;
                    const double lg = std::log(a) + W.weights[iN].log_eval(xs[i]);
                    sup = std::max(sup, lg > 690.0 ? 1e300 : std::exp(lg));
                }
                row.sups.push_back(sup);
            }
            row.trend = classify_trend(row.sups);
            out.rows.push_back(std::move(row));
        }
    }
    bool all_b = true;
    bool any_div = false;
    for (const auto& r : out.rows) {
        if (r.trend != Trend::Bounded) all_b = false;
        if (r.trend == Trend::Diverging) any_div = true;
    }
    out.overall = any_div ? Trend::Diverging
                 : all_b ? Trend::Bounded
                         : Trend::Inconclusive;
    return out;
}

}  // namespace gstft
