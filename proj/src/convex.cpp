#include "gstft/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gstft/simplex.hpp"

namespace gstft {

namespace {

constexpr double kIncTol = 1e-10;  // inclusion tolerance (spec-pinned)

void check_dim(int d) {
    if (d < 1 || d > 3) throw ConfigError("ConvexBody: dimension must be 1..3");
}

bool vec_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool vec_close(const Vec& a, const Vec& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::fabs(a[i] - b[i]) > tol) return false;
    return true;
}

std::vector<Vec> canonicalize_vertices(std::vector<Vec> v) {
    std::sort(v.begin(), v.end(), vec_less);
    std::vector<Vec> out;
    for (auto& p : v)
        if (out.empty() || !vec_close(out.back(), p, 1e-12)) out.push_back(std::move(p));
    return out;
}

// Solve the d x d system M y = r by Gaussian elimination with partial
// pivoting; returns false when (near-)singular.
bool solve_small(std::vector<Vec> M, Vec r, Vec& y) {
    const int d = static_cast<int>(r.size());
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int i = col + 1; i < d; ++i)
            if (std::fabs(M[i][col]) > std::fabs(M[piv][col])) piv = i;
        if (std::fabs(M[piv][col]) < 1e-10) return false;
        std::swap(M[piv], M[col]);
        std::swap(r[piv], r[col]);
        for (int i = col + 1; i < d; ++i) {
            const double f = M[i][col] / M[col][col];
            for (int j = col; j < d; ++j) M[i][j] -= f * M[col][j];
            r[i] -= f * r[col];
        }
    }
    y.assign(d, 0.0);
    for (int i = d - 1; i >= 0; --i) {
        double s = r[i];
        for (int j = i + 1; j < d; ++j) s -= M[i][j] * y[j];
        y[i] = s / M[i][i];
    }
    return true;
}

}  // namespace

struct ConvexBody::Node {
    BodyKind kind;
    int dim;
    Vec center;                    // Ball
    double radius = 0.0;           // Ball
    std::vector<Vec> vertices;     // VPolytope
    std::vector<Vec> A;            // HPolytope
    Vec b;                         // HPolytope
    double lambda = 1.0;           // Scaled
    std::vector<ConvexBody> parts; // Scaled/Reflected child at [0]; MinkowskiSum all
};

int ConvexBody::dim() const { return node_->dim; }
BodyKind ConvexBody::kind() const { return node_->kind; }
const Vec& ConvexBody::center() const { return node_->center; }
double ConvexBody::radius() const { return node_->radius; }
const std::vector<Vec>& ConvexBody::vertices() const { return node_->vertices; }
const std::vector<Vec>& ConvexBody::rows() const { return node_->A; }
const Vec& ConvexBody::offsets() const { return node_->b; }
double ConvexBody::lambda() const { return node_->lambda; }
const ConvexBody& ConvexBody::child() const { return node_->parts[0]; }
const std::vector<ConvexBody>& ConvexBody::parts() const { return node_->parts; }

bool ConvexBody::operator==(const ConvexBody& other) const {
    if (node_ == other.node_) return true;
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.kind != b.kind || a.dim != b.dim) return false;
    switch (a.kind) {
        case BodyKind::Ball:
            return a.center == b.center && a.radius == b.radius;
        case BodyKind::VPolytope:
            return a.vertices == b.vertices;
        case BodyKind::HPolytope:
            return a.A == b.A && a.b == b.b;
        case BodyKind::Scaled:
            return a.lambda == b.lambda && a.parts[0] == b.parts[0];
        case BodyKind::Reflected:
            return a.parts[0] == b.parts[0];
        case BodyKind::MinkowskiSum:
            return a.parts == b.parts;
    }
    return false;
}

ConvexBody ConvexBody::ball(Vec center, double radius) {
    check_dim(static_cast<int>(center.size()));
    if (!(radius >= 0.0) || !all_finite(center))
        throw ConfigError("Ball: radius must be >= 0 and center finite");
    auto n = std::make_shared<Node>();
    n->kind = BodyKind::Ball;
    n->dim = static_cast<int>(center.size());
    n->center = std::move(center);
    n->radius = radius;
    return ConvexBody(std::move(n));
}

ConvexBody ConvexBody::point(Vec p) { return ball(std::move(p), 0.0); }

ConvexBody ConvexBody::vpolytope(std::vector<Vec> vertices) {
    if (vertices.empty()) throw ConfigError("VPolytope: needs at least one vertex");
    const int d = static_cast<int>(vertices[0].size());
    check_dim(d);
    for (const auto& v : vertices)
        if (static_cast<int>(v.size()) != d || !all_finite(v))
            throw ConfigError("VPolytope: ragged or non-finite vertex");
    auto n = std::make_shared<Node>();
    n->kind = BodyKind::VPolytope;
    n->dim = d;
    n->vertices = canonicalize_vertices(std::move(vertices));
    return ConvexBody(std::move(n));
}

ConvexBody ConvexBody::hpolytope(std::vector<Vec> A, Vec b) {
    if (A.empty() || A.size() != b.size())
        throw ConfigError("HPolytope: A/b size mismatch or empty");
    const int d = static_cast<int>(A[0].size());
    check_dim(d);
    for (const auto& row : A)
        if (static_cast<int>(row.size()) != d || !all_finite(row))
            throw ConfigError("HPolytope: ragged or non-finite row");
    if (!all_finite(b)) throw ConfigError("HPolytope: non-finite offset");

    // Nonemptiness, then boundedness along the +-axis directions.
    Vec zero(d, 0.0);
    if (lp_solve(A, b, zero).status == LpStatus::Infeasible)
        throw ConfigError("HPolytope: empty polytope");
    for (int i = 0; i < d; ++i) {
        for (double s : {1.0, -1.0}) {
            Vec c(d, 0.0);
            c[i] = s;
            if (lp_solve(A, b, c).status == LpStatus::Unbounded)
                throw ConfigError("HPolytope: unbounded polyhedron");
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = BodyKind::HPolytope;
    n->dim = d;
    n->A = std::move(A);
    n->b = std::move(b);
    return ConvexBody(std::move(n));
}

ConvexBody ConvexBody::scaled(double lambda, ConvexBody body) {
    if (!(lambda >= 0.0))
        throw ConfigError("Scaled: lambda must be >= 0 (use reflected for -K)");
    auto n = std::make_shared<Node>();
    n->kind = BodyKind::Scaled;
    n->dim = body.dim();
    n->lambda = lambda;
    n->parts.push_back(std::move(body));
    return ConvexBody(std::move(n));
}

ConvexBody ConvexBody::reflected(ConvexBody body) {
    auto n = std::make_shared<Node>();
    n->kind = BodyKind::Reflected;
    n->dim = body.dim();
    n->parts.push_back(std::move(body));
    return ConvexBody(std::move(n));
}

ConvexBody ConvexBody::sum(std::vector<ConvexBody> parts) {
    if (parts.empty()) throw ConfigError("MinkowskiSum: needs at least one part");
    const int d = parts[0].dim();
    for (const auto& p : parts)
        if (p.dim() != d) throw ConfigError("MinkowskiSum: dimension mismatch");
    auto n = std::make_shared<Node>();
    n->kind = BodyKind::MinkowskiSum;
    n->dim = d;
    n->parts = std::move(parts);
    return ConvexBody(std::move(n));
}

double support_function(const ConvexBody& K, const Vec& x) {
    if (static_cast<int>(x.size()) != K.dim())
        throw ConfigError("support_function: direction dimension mismatch");
    switch (K.kind()) {
        case BodyKind::Ball:
            return dot(K.center(), x) + K.radius() * norm2(x);
        case BodyKind::VPolytope: {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& v : K.vertices()) best = std::max(best, dot(v, x));
            return best;
        }
        case BodyKind::HPolytope:
            return lp_maximize(K.rows(), K.offsets(), x).value;
        case BodyKind::Scaled:
            return K.lambda() * support_function(K.child(), x);
        case BodyKind::Reflected:
            return support_function(K.child(), negate(x));
        case BodyKind::MinkowskiSum: {
            double s = 0.0;
            for (const auto& p : K.parts()) s += support_function(p, x);
            return s;
        }
    }
    throw ConfigError("support_function: unknown body kind");
}

ConvexBody minkowski_sum(const ConvexBody& K1, const ConvexBody& K2) {
    if (K1.dim() != K2.dim())
        throw ConfigError("minkowski_sum: dimension mismatch");
    return ConvexBody::sum({K1, K2});
}

ConvexBody fatten(const ConvexBody& K, double eps) {
    if (!(eps > 0.0)) throw ConfigError("fatten: eps must be > 0");
    return minkowski_sum(K, ConvexBody::ball(Vec(K.dim(), 0.0), eps));
}

std::vector<Vec> enumerate_vertices(const std::vector<Vec>& A, const Vec& b) {
    const int m = static_cast<int>(A.size());
    const int d = m > 0 ? static_cast<int>(A[0].size()) : 0;
    std::vector<Vec> verts;
    std::vector<int> idx(d);

    auto try_subset = [&](const std::vector<int>& rows_idx) {
        std::vector<Vec> M;
        Vec r;
        for (int i : rows_idx) {
            M.push_back(A[i]);
            r.push_back(b[i]);
        }
        Vec y;
        if (!solve_small(std::move(M), std::move(r), y)) return;
        for (int i = 0; i < m; ++i)
            if (dot(A[i], y) > b[i] + 1e-8) return;
        verts.push_back(std::move(y));
    };

    if (d == 1) {
        for (int i = 0; i < m; ++i) try_subset({i});
    } else if (d == 2) {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) try_subset({i, j});
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                for (int k = j + 1; k < m; ++k) try_subset({i, j, k});
    }
    return canonicalize_vertices(std::move(verts));
}

VBallForm vball_form(const ConvexBody& K) {
    switch (K.kind()) {
        case BodyKind::Ball:
            return {{K.center()}, K.radius()};
        case BodyKind::VPolytope:
            return {K.vertices(), 0.0};
        case BodyKind::HPolytope: {
            auto v = enumerate_vertices(K.rows(), K.offsets());
            if (v.empty()) throw GuardError("vball_form: vertex enumeration found nothing");
            return {std::move(v), 0.0};
        }
        case BodyKind::Scaled: {
            VBallForm f = vball_form(K.child());
            for (auto& v : f.vertices) v = K.lambda() * v;
            f.radius *= K.lambda();
            f.vertices = canonicalize_vertices(std::move(f.vertices));
            return f;
        }
        case BodyKind::Reflected: {
            VBallForm f = vball_form(K.child());
            for (auto& v : f.vertices) v = negate(v);
            f.vertices = canonicalize_vertices(std::move(f.vertices));
            return f;
        }
        case BodyKind::MinkowskiSum: {
            VBallForm acc{{Vec(K.dim(), 0.0)}, 0.0};
            for (const auto& p : K.parts()) {
                VBallForm f = vball_form(p);
                std::vector<Vec> sums;
                sums.reserve(acc.vertices.size() * f.vertices.size());
                for (const auto& u : acc.vertices)
                    for (const auto& v : f.vertices) sums.push_back(u + v);
                if (sums.size() > 100000)
                    throw GuardError("vball_form: Minkowski vertex product too large");
                acc.vertices = canonicalize_vertices(std::move(sums));
                acc.radius += f.radius;
            }
            return acc;
        }
    }
    throw ConfigError("vball_form: unknown body kind");
}

std::optional<HalfspaceForm> halfspace_form(const ConvexBody& K) {
    switch (K.kind()) {
        case BodyKind::Ball: {
            if (K.radius() != 0.0) return std::nullopt;
            // Point {c} as the box of zero width.
            HalfspaceForm f;
            const int d = K.dim();
            for (int i = 0; i < d; ++i) {
                Vec e(d, 0.0);
                e[i] = 1.0;
                f.A.push_back(e);
                f.b.push_back(K.center()[i]);
                e[i] = -1.0;
                f.A.push_back(e);
                f.b.push_back(-K.center()[i]);
            }
            return f;
        }
        case BodyKind::HPolytope:
            return HalfspaceForm{K.rows(), K.offsets()};
        case BodyKind::Scaled: {
            auto f = halfspace_form(K.child());
            if (!f) return std::nullopt;
            if (K.lambda() == 0.0) return std::nullopt;  // degenerates to a point
            for (auto& bi : f->b) bi *= K.lambda();
            return f;
        }
        case BodyKind::Reflected: {
            auto f = halfspace_form(K.child());
            if (!f) return std::nullopt;
            for (auto& row : f->A) row = negate(row);
            return f;
        }
        case BodyKind::MinkowskiSum: {
            // H-form survives summing with points (translation).
            std::optional<HalfspaceForm> base;
            Vec shift(K.dim(), 0.0);
            for (const auto& p : K.parts()) {
                VBallForm vb = vball_form(p);
                if (vb.vertices.size() == 1 && vb.radius == 0.0) {
                    shift = shift + vb.vertices[0];
                    continue;
                }
                if (base) return std::nullopt;  // two non-point parts
                base = halfspace_form(p);
                if (!base) return std::nullopt;
            }
            if (!base) {
                // Pure translate of the origin: a point.
                return halfspace_form(ConvexBody::point(shift));
            }
            for (std::size_t i = 0; i < base->A.size(); ++i)
                base->b[i] += dot(base->A[i], shift);
            return base;
        }
        default:
            return std::nullopt;
    }
}

namespace {

bool contains_origin_exact(const ConvexBody& K) {
    switch (K.kind()) {
        case BodyKind::Ball:
            return norm2(K.center()) <= K.radius() + 1e-12;
        case BodyKind::HPolytope: {
            for (double bi : K.offsets())
                if (bi < -1e-12) return false;
            return true;
        }
        case BodyKind::VPolytope: {
            // 0 in conv(V): feasibility of sum(l_i v_i) = 0, sum l_i = 1, l >= 0.
            const auto& V = K.vertices();
            const int nv = static_cast<int>(V.size());
            const int d = K.dim();
            std::vector<Vec> A;
            Vec b;
            for (int r = 0; r < d; ++r) {
                Vec row(nv), neg(nv);
                for (int i = 0; i < nv; ++i) {
                    row[i] = V[i][r];
                    neg[i] = -V[i][r];
                }
                A.push_back(row);
                b.push_back(0.0);
                A.push_back(neg);
                b.push_back(0.0);
            }
            Vec ones(nv, 1.0);
            A.push_back(ones);
            b.push_back(1.0);
            A.push_back(negate(ones));
            b.push_back(-1.0);
            for (int i = 0; i < nv; ++i) {
                Vec row(nv, 0.0);
                row[i] = -1.0;
                A.push_back(row);
                b.push_back(0.0);
            }
            return lp_solve(A, b, Vec(nv, 0.0)).status == LpStatus::Optimal;
        }
        case BodyKind::Scaled:
            return K.lambda() == 0.0 ? true : contains_origin_exact(K.child());
        case BodyKind::Reflected:
            return contains_origin_exact(K.child());
        case BodyKind::MinkowskiSum: {
            for (const auto& p : K.parts())
                if (!contains_origin_exact(p)) return false;  // sufficient only
            return true;
        }
    }
    return false;
}

InclusionReport falsified_with(const Vec& u, int tested) {
    InclusionReport r;
    r.verdict = InclusionReport::Verdict::Falsified;
    r.witness_direction = u;
    r.directions_tested = tested;
    return r;
}

InclusionReport certified_with(std::string tag) {
    InclusionReport r;
    r.verdict = InclusionReport::Verdict::Certified;
    r.witness_tag = std::move(tag);
    return r;
}

}  // namespace

InclusionReport contains(const ConvexBody& inner, const ConvexBody& outer,
                         int n_dirs) {
    const int d = inner.dim();
    if (outer.dim() != d) throw ConfigError("contains: dimension mismatch");
    if (n_dirs < 2 * d) throw ConfigError("contains: n_dirs must be >= 2d");

    auto recheck = [&](const Vec& u) {
        return support_function(inner, u) >
               support_function(outer, u) + kIncTol;
    };

    // Structural rule: inner is a summand of outer and the remaining
    // summands all contain the origin.
    if (outer.kind() == BodyKind::MinkowskiSum) {
        for (std::size_t i = 0; i < outer.parts().size(); ++i) {
            if (!(outer.parts()[i] == inner)) continue;
            bool rest_ok = true;
            for (std::size_t j = 0; j < outer.parts().size(); ++j)
                if (j != i && !contains_origin_exact(outer.parts()[j])) {
                    rest_ok = false;
                    break;
                }
            if (rest_ok) return certified_with("minkowski-summand");
        }
    }

    // Exact and complete when the outer body is an intersection of
    // halfspaces: K1 in {Ax<=b} iff h_K1(a_i) <= b_i for every row.
    if (auto hf = halfspace_form(outer)) {
        for (std::size_t i = 0; i < hf->A.size(); ++i) {
            const double hv = support_function(inner, hf->A[i]);
            if (hv <= hf->b[i] + kIncTol) continue;
            const double len = norm2(hf->A[i]);
            if (len > 0.0) {
                Vec u = (1.0 / len) * hf->A[i];
                if (recheck(u)) return falsified_with(u, 1);
            }
            InclusionReport r;  // violated row but witness margin too thin
            r.verdict = InclusionReport::Verdict::Undetermined;
            r.witness_tag = "halfspace-margin-too-thin";
            return r;
        }
        return certified_with("support-vs-halfspaces");
    }

    // Exact when the outer body is a ball: reduce the inner body to
    // conv(V) + B(0, rho) and bound the farthest point.
    {
        VBallForm out = vball_form(outer);
        if (out.vertices.size() == 1) {
            const Vec& c = out.vertices[0];
            const double R = out.radius;
            VBallForm in = vball_form(inner);
            double worst = -1.0;
            Vec worst_v;
            for (const auto& v : in.vertices) {
                const double dist = norm2(v - c);
                if (dist > worst) {
                    worst = dist;
                    worst_v = v;
                }
            }
            if (worst + in.radius <= R + kIncTol)
                return certified_with("vball-in-ball");
            Vec u;
            if (worst > 1e-14) {
                u = (1.0 / worst) * (worst_v - c);
            } else {
                u = Vec(d, 0.0);
                u[0] = 1.0;
            }
            if (recheck(u)) return falsified_with(u, 1);
            InclusionReport r;
            r.verdict = InclusionReport::Verdict::Undetermined;
            r.witness_tag = "ball-margin-too-thin";
            return r;
        }
    }

    // Sampled fallback: can falsify, never certify.
    auto dirs = probe_directions(d, n_dirs - 2 * d);
    for (const auto& u : dirs)
        if (recheck(u))
            return falsified_with(u, static_cast<int>(dirs.size()));
    InclusionReport r;
    r.verdict = InclusionReport::Verdict::Undetermined;
    r.directions_tested = static_cast<int>(dirs.size());
    return r;
}

OpenConvexRegion OpenConvexRegion::hregion(std::vector<Vec> A, Vec b) {
    if (A.empty() || A.size() != b.size())
        throw ConfigError("HRegion: A/b size mismatch or empty");
    const int d = static_cast<int>(A[0].size());
    check_dim(d);
    // Interior point: maximize t with a_i . x + |a_i| t <= b_i. Unbounded
    // counts as interior (the region is fat somewhere).
    std::vector<Vec> Ae;
    for (const auto& row : A) {
        Vec r = row;
        r.push_back(norm2(row));
        Ae.push_back(std::move(r));
    }
    Vec c(d + 1, 0.0);
    c[d] = 1.0;
    LpResult lr = lp_solve(Ae, b, c);
    if (lr.status == LpStatus::Infeasible ||
        (lr.status == LpStatus::Optimal && lr.value <= 1e-12))
        throw ConfigError("HRegion: region has no interior point");
    OpenConvexRegion g;
    g.kind_ = RegionKind::HRegion;
    g.dim_ = d;
    g.A_ = std::move(A);
    g.b_ = std::move(b);
    return g;
}

OpenConvexRegion OpenConvexRegion::open_ball(Vec center, double radius) {
    check_dim(static_cast<int>(center.size()));
    if (!(radius > 0.0)) throw ConfigError("OpenBall: radius must be > 0");
    OpenConvexRegion g;
    g.kind_ = RegionKind::OpenBall;
    g.dim_ = static_cast<int>(center.size());
    g.center_ = std::move(center);
    g.radius_ = radius;
    return g;
}

OpenConvexRegion OpenConvexRegion::full_space(int dim) {
    check_dim(dim);
    OpenConvexRegion g;
    g.kind_ = RegionKind::FullSpace;
    g.dim_ = dim;
    return g;
}

OpenConvexRegion OpenConvexRegion::intersect(const OpenConvexRegion& a,
                                             const OpenConvexRegion& b) {
    if (a.dim() != b.dim()) throw ConfigError("region intersect: dimension mismatch");
    if (a.kind() == RegionKind::FullSpace) return b;
    if (b.kind() == RegionKind::FullSpace) return a;
    if (a.kind() == RegionKind::HRegion && b.kind() == RegionKind::HRegion) {
        std::vector<Vec> A = a.rows();
        Vec off = a.offsets();
        A.insert(A.end(), b.rows().begin(), b.rows().end());
        off.insert(off.end(), b.offsets().begin(), b.offsets().end());
        return hregion(std::move(A), std::move(off));
    }
    throw ConfigError("region intersect: unsupported kind combination");
}

namespace {

// Stacked rows of the H-region exhaustion at index N.
void exhaust_rows(const OpenConvexRegion& g, int N, std::vector<Vec>& A, Vec& b) {
    const int d = g.dim();
    A = g.rows();
    b = g.offsets();
    for (std::size_t i = 0; i < A.size(); ++i) b[i] -= norm2(A[i]) / N;
    for (int i = 0; i < d; ++i) {
        Vec e(d, 0.0);
        e[i] = 1.0;
        A.push_back(e);
        b.push_back(static_cast<double>(N));
        e[i] = -1.0;
        A.push_back(e);
        b.push_back(static_cast<double>(N));
    }
}

}  // namespace

int exhaustion_min_index(const OpenConvexRegion& region) {
    if (region.kind() != RegionKind::HRegion) return 1;
    for (int N = 1; N <= 4096; ++N) {
        std::vector<Vec> A;
        Vec b;
        exhaust_rows(region, N, A, b);
        if (lp_solve(A, b, Vec(region.dim(), 0.0)).status == LpStatus::Optimal)
            return N;
    }
    throw GuardError("exhaustion_min_index: no feasible index up to 4096");
}

ConvexBody exhaust(const OpenConvexRegion& region, int N) {
    if (N < 1) throw ConfigError("exhaust: exhaustion index too small");
    switch (region.kind()) {
        case RegionKind::FullSpace:
            return ConvexBody::ball(Vec(region.dim(), 0.0),
                                    static_cast<double>(N));
        case RegionKind::OpenBall:
            return ConvexBody::ball(region.center(),
                                    region.radius() * (1.0 - 1.0 / (N + 1)));
        case RegionKind::HRegion: {
            std::vector<Vec> A;
            Vec b;
            exhaust_rows(region, N, A, b);
            try {
                return ConvexBody::hpolytope(std::move(A), std::move(b));
            } catch (const ConfigError&) {
                throw ConfigError("exhaust: exhaustion index too small");
            }
        }
    }
    throw ConfigError("exhaust: unknown region kind");
}

std::vector<Vec> sample_points(const ConvexBody& K, int count,
                               std::uint64_t seed) {
    VBallForm f = vball_form(K);
    const int d = K.dim();
    std::vector<Vec> pts;
    for (const auto& v : f.vertices) {
        pts.push_back(v);
        if (static_cast<int>(pts.size()) >= count) return pts;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int nv = static_cast<int>(f.vertices.size());
    while (static_cast<int>(pts.size()) < count) {
        // Dirichlet(1) convex combination of the vertices...
        Vec w(nv);
        double tot = 0.0;
        for (int i = 0; i < nv; ++i) {
            w[i] = -std::log(std::max(unif(rng), 1e-300));
            tot += w[i];
        }
        Vec p(d, 0.0);
        for (int i = 0; i < nv; ++i)
            p = p + (w[i] / tot) * f.vertices[i];
        // ...plus a point of the radius-rho ball when present.
        if (f.radius > 0.0) {
            Vec u(d);
            for (int i = 0; i < d; ++i) u[i] = gauss(rng);
            const double n = norm2(u);
            if (n > 1e-12) {
                const double scale =
                    f.radius * std::pow(unif(rng), 1.0 / d) / n;
                p = p + scale * u;
            }
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

bool region_contains_body(const OpenConvexRegion& region, const ConvexBody& K) {
    if (region.dim() != K.dim()) return false;
    switch (region.kind()) {
        case RegionKind::FullSpace:
            return true;
        case RegionKind::HRegion: {
            for (std::size_t i = 0; i < region.rows().size(); ++i)
                if (support_function(K, region.rows()[i]) >=
                    region.offsets()[i] - 1e-12)
                    return false;
            return true;
        }
        case RegionKind::OpenBall: {
            VBallForm f = vball_form(K);
            double worst = 0.0;
            for (const auto& v : f.vertices)
                worst = std::max(worst, norm2(v - region.center()));
            return worst + f.radius < region.radius() - 1e-12;
        }
    }
    return false;
}

double bounding_radius(const ConvexBody& K) {
    VBallForm f = vball_form(K);
    double worst = 0.0;
    for (const auto& v : f.vertices) worst = std::max(worst, norm2(v));
    return worst + f.radius;
}

nlohmann::json to_json(const ConvexBody& K) {
    nlohmann::json j;
    switch (K.kind()) {
        case BodyKind::Ball:
            j["type"] = "ball";
            j["center"] = K.center();
            j["radius"] = K.radius();
            break;
        case BodyKind::VPolytope:
            j["type"] = "vpolytope";
            j["vertices"] = K.vertices();
            break;
        case BodyKind::HPolytope:
            j["type"] = "hpolytope";
            j["A"] = K.rows();
            j["b"] = K.offsets();
            break;
        case BodyKind::Scaled:
            j["type"] = "scaled";
            j["lambda"] = K.lambda();
            j["body"] = to_json(K.child());
            break;
        case BodyKind::Reflected:
            j["type"] = "reflected";
            j["body"] = to_json(K.child());
            break;
        case BodyKind::MinkowskiSum: {
            j["type"] = "minkowski_sum";
            nlohmann::json parts = nlohmann::json::array();
            for (const auto& p : K.parts()) parts.push_back(to_json(p));
            j["parts"] = std::move(parts);
            break;
        }
    }
    return j;
}

ConvexBody body_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "ball")
        return ConvexBody::ball(j.at("center").get<Vec>(),
                                j.at("radius").get<double>());
    if (type == "vpolytope")
        return ConvexBody::vpolytope(j.at("vertices").get<std::vector<Vec>>());
    if (type == "hpolytope")
        return ConvexBody::hpolytope(j.at("A").get<std::vector<Vec>>(),
                                     j.at("b").get<Vec>());
    if (type == "scaled")
        return ConvexBody::scaled(j.at("lambda").get<double>(),
                                  body_from_json(j.at("body")));
    if (type == "reflected")
        return ConvexBody::reflected(body_from_json(j.at("body")));
    if (type == "minkowski_sum") {
        std::vector<ConvexBody> parts;
        for (const auto& p : j.at("parts")) parts.push_back(body_from_json(p));
        return ConvexBody::sum(std::move(parts));
    }
    throw ConfigError("body_from_json: unknown type '" + type + "'");
}

nlohmann::json to_json(const OpenConvexRegion& region) {
    nlohmann::json j;
    switch (region.kind()) {
        case RegionKind::HRegion:
            j["type"] = "hregion";
            j["A"] = region.rows();
            j["b"] = region.offsets();
            break;
        case RegionKind::OpenBall:
            j["type"] = "open_ball";
            j["center"] = region.center();
            j["radius"] = region.radius();
            break;
        case RegionKind::FullSpace:
            j["type"] = "full_space";
            j["dim"] = region.dim();
            break;
    }
    return j;
}

OpenConvexRegion region_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "hregion")
        return OpenConvexRegion::hregion(j.at("A").get<std::vector<Vec>>(),
                                         j.at("b").get<Vec>());
    if (type == "open_ball")
        return OpenConvexRegion::open_ball(j.at("center").get<Vec>(),
                                           j.at("radius").get<double>());
    if (type == "full_space")
        return OpenConvexRegion::full_space(j.at("dim").get<int>());
    throw ConfigError("region_from_json: unknown type '" + type + "'");
}

}  // namespace gstft
