#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "prox0/geometry.hpp"

namespace prox0 {

// Distance-preserving map of a backend space. Construction goes through the
// checked factories below, which verify d(Tx, Ty) = d(x, y) on random pairs.
struct Isometry {
    struct EuclideanMap {
        std::vector<double> linear;  // n x n row-major, orthogonal
        std::vector<double> translation;
    };
    struct HyperbolicMap {
        std::vector<double> linear;  // (n+1) x (n+1) row-major, Minkowski-orthogonal
    };
    struct SpdCongruence {
        std::vector<double> g;  // n x n row-major, invertible; X -> G^T X G
    };
    struct TreeAutomorphism {
        std::vector<int> perm;  // vertex permutation preserving edges and lengths
    };

    std::variant<EuclideanMap, HyperbolicMap, SpdCongruence, TreeAutomorphism> kind;
};

Isometry euclidean_isometry(const Space& s, std::vector<double> linear,
                            std::vector<double> translation);
Isometry hyperbolic_isometry(const Space& s, std::vector<double> linear);
Isometry spd_congruence(const Space& s, std::vector<double> g);
Isometry tree_automorphism(const Space& s, std::vector<int> perm);

Point apply_isometry(const Space& s, const Isometry& iso, const Point& x);

struct Functional;

struct WeightedTerm;

// Descriptor of a geodesically convex lsc function on a backend space.
// SquaredDistance(a, w) evaluates to (w/2) d(x, a)^2; Distance(a, w) to
// w d(x, a). The optional metadata feeds the certificate machinery.
struct Functional {
    struct SquaredDistance {
        Point anchor;
        double weight;
    };
    struct Distance {
        Point anchor;
        double weight;
    };
    struct DistanceToSet {
        ConvexSet set;
    };
    struct Busemann {
        GeodesicRay ray;
    };
    struct Displacement {
        Isometry map;
    };
    struct Indicator {
        ConvexSet set;
    };
    struct WeightedSum {
        std::vector<WeightedTerm> terms;  // flattened, weights > 0
    };

    std::variant<SquaredDistance, Distance, DistanceToSet, Busemann, Displacement, Indicator,
                 WeightedSum>
        kind;
    std::optional<double> known_infimum;
    std::optional<Point> known_minimizer;
};

struct WeightedTerm {
    double weight = 1.0;
    Functional fn;
};

// Factories. Each validates its arguments; the metadata consistency check
// (evaluate(known_minimizer) = known_infimum within 1e-9) runs whenever both
// fields are set.
Functional squared_distance(const Space& s, Point anchor, double weight = 1.0);
Functional distance_to_point(const Space& s, Point anchor, double weight = 1.0);
Functional distance_to_set(const Space& s, ConvexSet set);
Functional busemann(const Space& s, GeodesicRay ray);  // rejected on SPD spaces
Functional displacement(const Space& s, Isometry map);
Functional indicator(const Space& s, ConvexSet set);
// Flattens nested sums (one level) and folds term weights into the sum.
Functional weighted_sum(const Space& s, std::vector<WeightedTerm> terms);

Functional with_metadata(const Space& s, Functional f, std::optional<double> infimum,
                         std::optional<Point> minimizer);

// Set membership at the space tolerance; used by Indicator evaluation.
bool set_contains(const Space& s, const ConvexSet& set, const Point& x);

// Value of f at x; +infinity off the effective domain.
double evaluate(const Space& s, const Functional& f, const Point& x);

// (1-t) f(a) + t f(b) - f(gamma(t)) with gamma(0) = a. Nonnegative for
// convex f; +infinity (vacuous) when an endpoint value is infinite.
double convexity_residual(const Space& s, const Functional& f, const Point& a, const Point& b,
                          double t);

// Convexity gap minus t(1-t) phi(d(a,b)).
double uniform_convexity_residual(const Space& s, const Functional& f, const Point& a,
                                  const Point& b, double t,
                                  const std::function<double(double)>& modulus);

// Modulus (w_total/2) r^2 when f has a squared-distance part, nothing
// otherwise.
std::optional<std::function<double(double)>> uniform_convexity_modulus(const Functional& f);

// Global Lipschitz constant when one exists for the kind (Distance: w,
// DistanceToSet/Busemann: 1, Displacement: 2, sums add up).
std::optional<double> lipschitz_bound(const Functional& f);
// Bound on the metric slope of f valid on the ball B(at, radius).
double lipschitz_estimate(const Space& s, const Functional& f, const Point& at, double radius);

struct MinimizationProbe {
    double f_at_x = 0.0;
    double best_sampled = 0.0;
    double improvement = 0.0;  // max(0, f_at_x - best_sampled)
    bool no_improvement = true;
    long samples = 0;
    bool heuristic = true;  // sampling evidence, not a proof
};

MinimizationProbe is_minimizing_certificate(const Space& s, const Functional& f, const Point& x,
                                            int sample_budget, std::uint64_t seed = 0x6d696e);

}  // namespace prox0
