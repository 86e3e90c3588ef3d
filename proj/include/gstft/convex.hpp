#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gstft/common.hpp"

namespace gstft {

enum class BodyKind { Ball, VPolytope, HPolytope, Scaled, Reflected, MinkowskiSum };

/// Immutable compact convex body in dimension d <= 3, represented as an
/// expression tree over exact primitives. Support function evaluation is
/// exact for every variant (up to LP tolerance for H-polytopes).
class ConvexBody {
public:
    static ConvexBody ball(Vec center, double radius);
    static ConvexBody point(Vec p);  // zero-radius ball
    static ConvexBody vpolytope(std::vector<Vec> vertices);
    static ConvexBody hpolytope(std::vector<Vec> A, Vec b);
    static ConvexBody scaled(double lambda, ConvexBody body);
    static ConvexBody reflected(ConvexBody body);
    static ConvexBody sum(std::vector<ConvexBody> parts);

    int dim() const;
    BodyKind kind() const;

    // Variant accessors; only valid for the matching kind.
    const Vec& center() const;
    double radius() const;
    const std::vector<Vec>& vertices() const;
    const std::vector<Vec>& rows() const;
    const Vec& offsets() const;
    double lambda() const;
    const ConvexBody& child() const;
    const std::vector<ConvexBody>& parts() const;

    bool operator==(const ConvexBody& other) const;

private:
    struct Node;
    std::shared_ptr<const Node> node_;
    explicit ConvexBody(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

/// h_K(x) = max over eta in K of x . eta
double support_function(const ConvexBody& K, const Vec& x);

ConvexBody minkowski_sum(const ConvexBody& K1, const ConvexBody& K2);

/// K + closed ball of radius eps (eps > 0).
ConvexBody fatten(const ConvexBody& K, double eps);

struct InclusionReport {
    enum class Verdict { Certified, Falsified, Undetermined };
    Verdict verdict = Verdict::Undetermined;
    std::string witness_tag;               // certificate tag for exact paths
    std::optional<Vec> witness_direction;  // set iff Falsified
    int directions_tested = 0;

    bool certified() const { return verdict == Verdict::Certified; }
    bool falsified() const { return verdict == Verdict::Falsified; }
};

/// Three-valued inclusion test. Exact certificates when the outer body has
/// halfspace form or is a ball; sampled falsification otherwise.
InclusionReport contains(const ConvexBody& inner, const ConvexBody& outer,
                         int n_dirs = 256);

enum class RegionKind { HRegion, OpenBall, FullSpace };

/// Nonempty open convex region; the domain Gamma the exhaustions fill.
class OpenConvexRegion {
public:
    static OpenConvexRegion hregion(std::vector<Vec> A, Vec b);
    static OpenConvexRegion open_ball(Vec center, double radius);
    static OpenConvexRegion full_space(int dim);

    int dim() const { return dim_; }
    RegionKind kind() const { return kind_; }
    const std::vector<Vec>& rows() const { return A_; }
    const Vec& offsets() const { return b_; }
    const Vec& center() const { return center_; }
    double radius() const { return radius_; }

    /// Intersection (HRegion rows stack; FullSpace is the identity).
    static OpenConvexRegion intersect(const OpenConvexRegion& a,
                                      const OpenConvexRegion& b);

private:
    RegionKind kind_ = RegionKind::FullSpace;
    int dim_ = 1;
    std::vector<Vec> A_;
    Vec b_;
    Vec center_;
    double radius_ = 0.0;
};

/// Smallest N for which exhaust(region, N) is nonempty.
int exhaustion_min_index(const OpenConvexRegion& region);

/// K_N of the standard exhaustion: facets pulled in by |a_i|/N and boxed
/// at [-N, N]^d for H-regions; radius r(1 - 1/(N+1)) for open balls;
/// Ball(0, N) for the full space.
ConvexBody exhaust(const OpenConvexRegion& region, int N);

/// Exact decomposition body = conv(vertices) + Ball(0, radius); valid for
/// every body in the grammar (H-polytopes are vertex-enumerated, d <= 3).
struct VBallForm {
    std::vector<Vec> vertices;
    double radius = 0.0;
};
VBallForm vball_form(const ConvexBody& K);

/// Halfspace form {x : Ax <= b} when the body has one (H-polytopes,
/// their scalings/reflections, translates, points).
struct HalfspaceForm {
    std::vector<Vec> A;
    Vec b;
};
std::optional<HalfspaceForm> halfspace_form(const ConvexBody& K);

/// Vertices of {x : Ax <= b} by subset enumeration, d <= 3.
std::vector<Vec> enumerate_vertices(const std::vector<Vec>& A, const Vec& b);

/// Deterministic point sample of K: exact vertices first, then seeded
/// interior points, at most `count` total.
std::vector<Vec> sample_points(const ConvexBody& K, int count,
                               std::uint64_t seed);

/// Exact check that the compact body sits inside the open region.
bool region_contains_body(const OpenConvexRegion& region, const ConvexBody& K);

double bounding_radius(const ConvexBody& K);

nlohmann::json to_json(const ConvexBody& K);
ConvexBody body_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OpenConvexRegion& region);
OpenConvexRegion region_from_json(const nlohmann::json& j);

}  // namespace gstft
