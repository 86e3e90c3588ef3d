#include "gstft/quadrature.hpp"

#include <map>
#include <mutex>

namespace gstft {

namespace {

// Classic Newton-on-Legendre node computation.
void compute_gl(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

struct GlCache {
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> table;
    std::mutex mu;

    const std::pair<std::vector<double>, std::vector<double>>& get(int n) {
        std::lock_guard<std::mutex> lock(mu);
        auto it = table.find(n);
        if (it == table.end()) {
            std::vector<double> x, w;
            compute_gl(n, x, w);
            it = table.emplace(n, std::make_pair(std::move(x), std::move(w))).first;
        }
        return it->second;
    }
};

GlCache& cache() {
    static GlCache c;
    return c;
}

}  // namespace

const std::vector<double>& gl_nodes(int n) { return cache().get(n).first; }
const std::vector<double>& gl_weights(int n) { return cache().get(n).second; }

std::vector<double> ball_partial_integrals(
    const std::function<double(const Vec&)>& g, int dim,
    const std::vector<double>& radii, int radial_panels) {
    const auto dirs = probe_directions(dim);
    const double sphere_measure =
        dim == 1 ? 2.0 : (dim == 2 ? 2.0 * M_PI : 4.0 * M_PI);
    // In d = 1 the two axis directions are the whole sphere; keep them only.
    const std::size_t ndirs = dim == 1 ? 2 : dirs.size();

    auto shell_avg = [&](double s) {
        double acc = 0.0;
        Vec p(dim);
        for (std::size_t k = 0; k < ndirs; ++k) {
            for (int i = 0; i < dim; ++i) p[i] = s * dirs[k][i];
            acc += g(p);
        }
        return acc / static_cast<double>(ndirs);
    };

    const auto& xs = gl_nodes(16);
    const auto& ws = gl_weights(16);
    std::vector<double> partial(radii.size(), 0.0);
    double acc = 0.0, prev_r = 0.0;
    for (std::size_t j = 0; j < radii.size(); ++j) {
        const double seg = (radii[j] - prev_r) / radial_panels;
        for (int pan = 0; pan < radial_panels; ++pan) {
            const double a = prev_r + pan * seg;
            const double mid = a + 0.5 * seg, half = 0.5 * seg;
            for (std::size_t q = 0; q < xs.size(); ++q) {
                const double s = mid + half * xs[q];
                const double jac = dim == 1 ? 1.0 : std::pow(s, dim - 1);
                acc += half * ws[q] * jac * shell_avg(s) * sphere_measure;
            }
        }
        partial[j] = acc;
        prev_r = radii[j];
    }
    return partial;
}

}  // namespace gstft
