#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "prox0/metric_tree.hpp"
#include "prox0/sym_matrix.hpp"

namespace prox0 {

enum class SpaceKind { Euclidean, Hyperbolic, Spd, MetricTree };

const char* space_kind_name(SpaceKind k);

// A point of one of the four backend spaces. The payload alternative must
// match the owning space's kind:
//   Euclidean   -> coordinate vector, length = dimension
//   Hyperbolic  -> Minkowski vector, length = dimension + 1, on the upper
//                  sheet of <p,p>_M = -1
//   Spd         -> symmetric positive definite matrix of the space's order
//   MetricTree  -> locus (edge id, offset)
struct Point {
    std::uint64_t space_id = 0;
    std::variant<std::vector<double>, SymMatrix, TreeLocus> payload;

    const std::vector<double>& vec() const { return std::get<std::vector<double>>(payload); }
    const SymMatrix& mat() const { return std::get<SymMatrix>(payload); }
    const TreeLocus& locus() const { return std::get<TreeLocus>(payload); }

    bool operator==(const Point& o) const = default;
};

// Direction descriptor of a geodesic ray at its origin. Vector tangents for
// the Euclidean/hyperboloid backends, a symmetric matrix tangent for SPD, and
// a declared end (leaf vertex) for finite trees, which have no true rays.
using RayDirection = std::variant<std::vector<double>, SymMatrix, int>;

struct GeodesicRay {
    Point origin;
    RayDirection direction;
};

struct GeodesicSegment {
    Point a;
    Point b;
    double length = 0.0;
};

struct Functional;  // functionals.hpp

// Closed convex subsets supported by project(). Sublevel sets reference a
// functional descriptor; evaluation of that branch lives with functionals.
struct ConvexSet {
    struct Singleton {
        Point p;
    };
    struct Segment {
        Point a;
        Point b;
    };
    struct Ball {
        Point center;
        double radius;
    };
    struct Sublevel {
        std::shared_ptr<const Functional> f;
        double level;
    };
    struct Subtree {
        std::vector<int> vertices;
    };

    std::variant<Singleton, Segment, Ball, Sublevel, Subtree> desc;
};

// Geodesic oracle over one of the four backends. Immutable after
// construction; all operations on it are pure. Each constructed space gets a
// unique id and points are tagged with it.
class Space {
  public:
    static Space euclidean(int dimension);
    static Space hyperbolic(int dimension);  // points live in R^{dimension+1}
    static Space spd(int order);
    static Space metric_tree(MetricTree tree);

    SpaceKind kind() const { return kind_; }
    int dimension() const { return dimension_; }
    std::uint64_t id() const { return id_; }
    double tolerance() const { return tolerance_; }
    void set_tolerance(double tol) { tolerance_ = tol; }
    const MetricTree& tree() const;

    // Payload -> validated point. Throws ValidationError on invariant
    // violations, so every Point in circulation is well-formed.
    Point point(std::vector<double> coords) const;
    Point point(SymMatrix m) const;
    Point point(TreeLocus locus) const;
    Point tree_vertex(const std::string& name) const;

    void validate_point(const Point& p) const;
    void require_member(const Point& p) const;  // space id check only

    GeodesicRay ray(const Point& origin, RayDirection direction) const;
    GeodesicSegment segment(const Point& a, const Point& b) const;

    bool approx_equal(const Point& p, const Point& q) const;

  private:
    Space() = default;

    SpaceKind kind_ = SpaceKind::Euclidean;
    int dimension_ = 0;
    std::uint64_t id_ = 0;
    double tolerance_ = 1e-9;
    std::shared_ptr<const MetricTree> tree_;
};

double minkowski_dot(const std::vector<double>& p, const std::vector<double>& q);

double distance(const Space& s, const Point& p, const Point& q);

// Point at parameter t of the geodesic from a to b: t = 0 gives a, t = 1
// gives b. This orientation is used everywhere in the library.
Point geodesic_point(const Space& s, const Point& a, const Point& b, double t);

// Same interpolation without the [0,1] restriction. Extension past the
// endpoints exists on the three manifold backends only; trees reject t
// outside [0,1].
Point geodesic_extend(const Space& s, const Point& a, const Point& b, double t);

// (1-t) d(x,a)^2 + t d(x,b)^2 - t(1-t) d(a,b)^2 - d(x, gamma(t))^2. In a
// CAT(0) space this is nonnegative; the Euclidean backend gives 0 exactly.
double cat0_residual(const Space& s, const Point& x, const Point& a, const Point& b, double t);

// Angle at x in the Euclidean comparison triangle of (y, x, z).
double comparison_angle(const Space& s, const Point& y, const Point& x, const Point& z);

// Metric projection onto a closed convex set.
Point project(const Space& s, const ConvexSet& set, const Point& x);

// Unit-speed point along a ray; t >= 0. On trees the ray is a maximal path
// toward the declared end, and t beyond that end is a domain error.
Point ray_point(const Space& s, const GeodesicRay& ray, double t);

double ray_reach(const Space& s, const GeodesicRay& ray);  // +inf off trees

// Tangent vectors at a base point of a manifold backend (Euclidean,
// hyperboloid, SPD). Trees have no tangent structure and these throw.
// Tangents at the same base point may be combined linearly.
struct Tangent {
    std::variant<std::vector<double>, SymMatrix> v;
};

Tangent log_map(const Space& s, const Point& base, const Point& target);
Point exp_map(const Space& s, const Point& base, const Tangent& t);
Tangent tangent_zero(const Space& s, const Point& base);
void tangent_axpy(Tangent& acc, double c, const Tangent& t);
double tangent_norm(const Space& s, const Point& base, const Tangent& t);

namespace detail {
// Minimizes a convex function over [lo, hi] by golden-section search.
template <class F>
double golden_min(F&& f, double lo, double hi, double tol = 1e-12, int max_iter = 200) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}
}  // namespace detail

}  // namespace prox0
