#include "gstft/stft.hpp"

#include <cmath>
#include <ostream>

#include "gstft/parallel.hpp"

namespace gstft {

namespace {

std::size_t axes_count(const std::vector<int>& nodes) {
    std::size_t n = 1;
    for (int k : nodes) n *= static_cast<std::size_t>(k);
    return n;
}

Vec axes_at(const Vec& lo, const Vec& hi, const std::vector<int>& nodes,
            std::size_t flat) {
    const int d = static_cast<int>(nodes.size());
    Vec p(d);
    for (int i = d - 1; i >= 0; --i) {
        const std::size_t n = static_cast<std::size_t>(nodes[i]);
        const std::size_t idx = flat % n;
        flat /= n;
        p[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx) /
                           static_cast<double>(n - 1);
    }
    return p;
}

double axes_weight(const Vec& lo, const Vec& hi, const std::vector<int>& nodes,
                   std::size_t flat) {
    const int d = static_cast<int>(nodes.size());
    double w = 1.0;
    for (int i = d - 1; i >= 0; --i) {
        const std::size_t n = static_cast<std::size_t>(nodes[i]);
        const std::size_t idx = flat % n;
        flat /= n;
        const double h = (hi[i] - lo[i]) / static_cast<double>(n - 1);
        w *= (idx == 0 || idx + 1 == n) ? 0.5 * h : h;
    }
    return w;
}

bool axes_boundary(const std::vector<int>& nodes, std::size_t flat) {
    for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; --i) {
        const std::size_t n = static_cast<std::size_t>(nodes[i]);
        const std::size_t idx = flat % n;
        flat /= n;
        if (idx == 0 || idx + 1 == n) return true;
    }
    return false;
}

}  // namespace

void GridSpec::validate() const {
    const int d = dim();
    if (d < 1 || d > 3) throw ConfigError("GridSpec: dimension must be 1..3");
    auto check = [&](const Vec& lo, const Vec& hi, const std::vector<int>& n) {
        if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d ||
            static_cast<int>(n.size()) != d)
            throw ConfigError("GridSpec: inconsistent axis sizes");
        for (int i = 0; i < d; ++i) {
            if (!(lo[i] < hi[i]))
                throw ConfigError("GridSpec: grid must be strictly increasing");
            if (n[i] < 2) throw ConfigError("GridSpec: needs >= 2 nodes per axis");
        }
    };
    check(x_min, x_max, x_nodes);
    check(xi_min, xi_max, xi_nodes);
}

std::size_t GridSpec::x_count() const { return axes_count(x_nodes); }
std::size_t GridSpec::xi_count() const { return axes_count(xi_nodes); }

Vec GridSpec::x_at(std::size_t flat) const {
    return axes_at(x_min, x_max, x_nodes, flat);
}
Vec GridSpec::xi_at(std::size_t flat) const {
    return axes_at(xi_min, xi_max, xi_nodes, flat);
}
double GridSpec::x_weight(std::size_t flat) const {
    return axes_weight(x_min, x_max, x_nodes, flat);
}
double GridSpec::xi_weight(std::size_t flat) const {
    return axes_weight(xi_min, xi_max, xi_nodes, flat);
}
bool GridSpec::x_on_boundary(std::size_t flat) const {
    return axes_boundary(x_nodes, flat);
}
bool GridSpec::xi_on_boundary(std::size_t flat) const {
    return axes_boundary(xi_nodes, flat);
}

GridSpec GridSpec::refined(int factor) const {
    GridSpec g = *this;
    for (int& n : g.x_nodes) n = (n - 1) * factor + 1;
    for (int& n : g.xi_nodes) n = (n - 1) * factor + 1;
    return g;
}

GridSpec GridSpec::widened(double factor) const {
    GridSpec g = *this;
    for (int i = 0; i < dim(); ++i) {
        const double xc = 0.5 * (x_min[i] + x_max[i]);
        const double xh = 0.5 * (x_max[i] - x_min[i]) * factor;
        g.x_min[i] = xc - xh;
        g.x_max[i] = xc + xh;
        const double kc = 0.5 * (xi_min[i] + xi_max[i]);
        const double kh = 0.5 * (xi_max[i] - xi_min[i]) * factor;
        g.xi_min[i] = kc - kh;
        g.xi_max[i] = kc + kh;
    }
    return g;
}

GridSpec GridSpec::symmetric(int dim, double x_radius, double xi_radius,
                             int x_nodes, int xi_nodes) {
    GridSpec g;
    g.x_min = Vec(dim, -x_radius);
    g.x_max = Vec(dim, x_radius);
    g.xi_min = Vec(dim, -xi_radius);
    g.xi_max = Vec(dim, xi_radius);
    g.x_nodes = std::vector<int>(dim, x_nodes);
    g.xi_nodes = std::vector<int>(dim, xi_nodes);
    g.validate();
    return g;
}

void TimeFrequencyField::check_finite() const {
    for (const Cplx& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw GuardError("TimeFrequencyField: non-finite value");
}

namespace {

template <class ForLoop>
TimeFrequencyField stft_impl(const TestDistribution& f, const Window& psi,
                             const GridSpec& grid, const QuadSpec& quad,
                             ForLoop&& loop) {
    grid.validate();
    if (f.dim() != grid.dim() || psi.dim() != grid.dim())
        throw ConfigError("stft: dimension mismatch");
    TimeFrequencyField F;
    F.grid = grid;
    F.values.assign(grid.total(), Cplx(0.0));
    if (f.is_zero()) return F;
    const std::size_t nxi = grid.xi_count();
    loop(grid.total(), [&](std::size_t k) {
        const Vec x = grid.x_at(k / nxi);
        const Vec xi = grid.xi_at(k % nxi);
        F.values[k] = pairing(f, ModWindow::stft_bracket(psi, x, xi), quad);
    });
    F.check_finite();
    return F;
}

}  // namespace

TimeFrequencyField stft(const TestDistribution& f, const Window& psi,
                        const GridSpec& grid, const QuadSpec& quad) {
    return stft_impl(f, psi, grid, quad,
                     [](std::size_t n, auto&& body) { parallel_for(n, body); });
}

TimeFrequencyField stft_serial(const TestDistribution& f, const Window& psi,
                               const GridSpec& grid, const QuadSpec& quad) {
    return stft_impl(f, psi, grid, quad,
                     [](std::size_t n, auto&& body) { serial_for(n, body); });
}

TimeFrequencyField stft_fn(const SmoothFunction& phi, const Window& psi,
                           const GridSpec& grid, const QuadSpec& quad,
                           bool negate_xi) {
    grid.validate();
    if (phi.dim() != grid.dim() || psi.dim() != grid.dim())
        throw ConfigError("stft_fn: dimension mismatch");
    TimeFrequencyField F;
    F.grid = grid;
    F.values.assign(grid.total(), Cplx(0.0));
    const std::size_t nxi = grid.xi_count();
    parallel_for(grid.total(), [&](std::size_t k) {
        const Vec x = grid.x_at(k / nxi);
        const Vec xi = grid.xi_at(k % nxi);
        const ModWindow bracket = negate_xi
                                      ? ModWindow::adjoint_bracket(psi, x, xi)
                                      : ModWindow::stft_bracket(psi, x, xi);
        F.values[k] = function_pairing(phi, bracket, quad);
    });
    F.check_finite();
    return F;
}

Cplx adjoint_apply(const TimeFrequencyField& F, const Window& psi,
                   const SmoothFunction& phi, const QuadSpec& quad) {
    const GridSpec& grid = F.grid;
    grid.validate();
    if (F.values.size() != grid.total())
        throw ConfigError("adjoint_apply: field/grid size mismatch");

    const TimeFrequencyField G = stft_fn(phi, psi, grid, quad, /*negate_xi=*/true);

    const std::size_t nxi = grid.xi_count();
    const std::size_t n = grid.total();

    // Tail-mass guard: the sampled integrand must be negligible on the
    // grid boundary relative to its peak.
    double peak = parallel_max(n, 0.0, [&](std::size_t k) {
        return std::abs(F.values[k] * G.values[k]);
    });
    if (peak > 0.0) {
        double boundary = parallel_max(n, 0.0, [&](std::size_t k) {
            if (!grid.x_on_boundary(k / nxi) && !grid.xi_on_boundary(k % nxi))
                return 0.0;
            return std::abs(F.values[k] * G.values[k]);
        });
        const double fraction = boundary / peak;
        if (fraction >= 1e-6)
            throw GuardError("adjoint_apply: grid too small, tail fraction " +
                             std::to_string(fraction));
    }

    return parallel_sum<Cplx>(n, [&](std::size_t k) {
        const double w = grid.x_weight(k / nxi) * grid.xi_weight(k % nxi);
        return w * F.values[k] * G.values[k];
    });
}

double l2_inner(const Window& gamma, const Window& psi, const QuadSpec& quad) {
    return function_pairing(ModWindow::translate(gamma, Vec(gamma.dim(), 0.0)),
                            ModWindow::translate(psi, Vec(psi.dim(), 0.0)), quad)
        .real();
}

double reconstruct_error(const TestDistribution& f, const Window& psi,
                         const Window& gamma, const SmoothFunction& phi,
                         const GridSpec& grid, const QuadSpec& quad) {
    const double gp = l2_inner(gamma, psi, quad);
    if (std::fabs(gp) <= 1e-12)
        throw ConfigError("reconstruct_error: gamma is not a synthesis window for psi");
    const TimeFrequencyField F = stft(f, psi, grid, quad);
    const Cplx lhs = adjoint_apply(F, gamma, phi, quad) / gp;
    const Cplx exact = pairing(f, phi, quad);
    return std::abs(lhs - exact) / std::max(1e-30, std::abs(exact));
}

double l2_norm_sq(const TestDistribution& f, const QuadSpec& quad) {
    if (!f.is_l2())
        throw ConfigError("l2_norm_sq: distribution has non-L2 terms");
    if (f.is_zero()) return 0.0;
    const int d = f.dim();
    double T = 0.0;
    for (const auto& term : f.gauss_terms()) {
        double deg = 0;
        for (const auto& p : term.axis_polys) deg += p.degree();
        T = std::max(T, term.sigma * (10.0 + 2.0 * deg));
    }
    Box box{Vec(d, -T), Vec(d, T)};
    return integrate_box_real(
        [&](const Vec& t) {
            const Cplx v = f.smooth_value(t);
            return std::norm(v);
        },
        box, quad);
}

double field_l2_sq(const TimeFrequencyField& F) {
    const GridSpec& grid = F.grid;
    const std::size_t nxi = grid.xi_count();
    return parallel_sum<double>(F.values.size(), [&](std::size_t k) {
        const double w = grid.x_weight(k / nxi) * grid.xi_weight(k % nxi);
        return w * std::norm(F.values[k]);
    });
}

double isometry_gap(const TestDistribution& f, const Window& psi,
                    const GridSpec& grid, const QuadSpec& quad) {
    if (!f.is_l2())
        throw ConfigError("isometry_gap: distribution is not an L2 object");
    const double f2 = l2_norm_sq(f, quad);
    const double p2 = psi.l2_norm_sq();
    if (f2 <= 0.0 || p2 <= 0.0)
        throw ConfigError("isometry_gap: degenerate input");
    const TimeFrequencyField F = stft(f, psi, grid, quad);
    const double v2 = field_l2_sq(F);
    return std::fabs(v2 - p2 * f2) / (p2 * f2);
}

std::vector<Cplx> convolve(const TestDistribution& f, const Window& phi,
                           const std::vector<Vec>& xs, const QuadSpec& quad) {
    std::vector<Cplx> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        out[i] = pairing(f, ModWindow::reflected_translate(phi, xs[i]), quad);
    });
    return out;
}

nlohmann::json to_json(const GridSpec& g) {
    return {{"x_min", g.x_min},   {"x_max", g.x_max},
            {"xi_min", g.xi_min}, {"xi_max", g.xi_max},
            {"x_nodes", g.x_nodes}, {"xi_nodes", g.xi_nodes}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
    GridSpec g;
    g.x_min = j.at("x_min").get<Vec>();
    g.x_max = j.at("x_max").get<Vec>();
    g.xi_min = j.at("xi_min").get<Vec>();
    g.xi_max = j.at("xi_max").get<Vec>();
    g.x_nodes = j.at("x_nodes").get<std::vector<int>>();
    g.xi_nodes = j.at("xi_nodes").get<std::vector<int>>();
    g.validate();
    return g;
}

nlohmann::json to_json(const TimeFrequencyField& F) {
    nlohmann::json vals = nlohmann::json::array();
    for (const Cplx& v : F.values)
        vals.push_back(nlohmann::json::array({v.real(), v.imag()}));
    return {{"grid", to_json(F.grid)}, {"values", std::move(vals)}};
}

TimeFrequencyField field_from_json(const nlohmann::json& j) {
    TimeFrequencyField F;
    F.grid = grid_from_json(j.at("grid"));
    for (const auto& v : j.at("values"))
        F.values.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    if (F.values.size() != F.grid.total())
        throw ConfigError("field_from_json: value count does not match grid");
    return F;
}

void write_field_csv(std::ostream& os, const TimeFrequencyField& F,
                     const nlohmann::json& metadata) {
    os << "# " << metadata.dump() << "\n";
    const int d = F.grid.dim();
    for (int i = 0; i < d; ++i) os << "x" << i << ",";
    for (int i = 0; i < d; ++i) os << "xi" << i << ",";
    os << "re,im,abs\n";
    const std::size_t nxi = F.grid.xi_count();
    os.precision(17);
    for (std::size_t k = 0; k < F.values.size(); ++k) {
        const Vec x = F.grid.x_at(k / nxi);
        const Vec xi = F.grid.xi_at(k % nxi);
        for (int i = 0; i < d; ++i) os << x[i] << ",";
        for (int i = 0; i < d; ++i) os << xi[i] << ",";
        const Cplx v = F.values[k];
        os << v.real() << "," << v.imag() << "," << std::abs(v) << "\n";
    }
}

}  // namespace gstft
