#include "prox0/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prox0/errors.hpp"
#include "prox0/sampling.hpp"

namespace prox0 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_isometry(const Space& s, const Isometry& iso) {
    Rng rng(0x69736f6dULL);
    for (int i = 0; i < 8; ++i) {
        const Point x = random_point(s, rng);
        const Point y = random_point(s, rng);
        const double before = distance(s, x, y);
        const double after = distance(s, apply_isometry(s, iso, x), apply_isometry(s, iso, y));
        if (std::abs(before - after) > 1e-9)
            throw ValidationError("isometry: distances not preserved within 1e-9");
    }
}

std::vector<double> apply_linear(const std::vector<double>& m, const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<double> r(n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) r[i] += m[i * n + j] * x[j];
    return r;
}

}  // namespace

Isometry euclidean_isometry(const Space& s, std::vector<double> linear,
                            std::vector<double> translation) {
    if (s.kind() != SpaceKind::Euclidean) throw DomainError("euclidean_isometry: wrong space");
    const size_t n = static_cast<size_t>(s.dimension());
    if (linear.size() != n * n || translation.size() != n)
        throw ValidationError("euclidean_isometry: wrong matrix/vector size");
    Isometry iso{Isometry::EuclideanMap{std::move(linear), std::move(translation)}};
    check_isometry(s, iso);
    return iso;
}

Isometry hyperbolic_isometry(const Space& s, std::vector<double> linear) {
    if (s.kind() != SpaceKind::Hyperbolic) throw DomainError("hyperbolic_isometry: wrong space");
    const size_t n = static_cast<size_t>(s.dimension()) + 1;
    if (linear.size() != n * n) throw ValidationError("hyperbolic_isometry: wrong matrix size");
    Isometry iso{Isometry::HyperbolicMap{std::move(linear)}};
    // upper sheet preservation: image of the base point must have t > 0
    std::vector<double> base(n, 0.0);
    base[0] = 1.0;
    if (apply_linear(std::get<Isometry::HyperbolicMap>(iso.kind).linear, base)[0] <= 0.0)
        throw ValidationError("hyperbolic_isometry: does not preserve the upper sheet");
    check_isometry(s, iso);
    return iso;
}

Isometry spd_congruence(const Space& s, std::vector<double> g) {
    if (s.kind() != SpaceKind::Spd) throw DomainError("spd_congruence: wrong space");
    const size_t n = static_cast<size_t>(s.dimension());
    if (g.size() != n * n) throw ValidationError("spd_congruence: wrong matrix size");
    Isometry iso{Isometry::SpdCongruence{std::move(g)}};
    check_isometry(s, iso);
    return iso;
}

Isometry tree_automorphism(const Space& s, std::vector<int> perm) {
    if (s.kind() != SpaceKind::MetricTree) throw DomainError("tree_automorphism: wrong space");
    const auto& tr = s.tree();
    const int n = tr.vertex_count();
    if (static_cast<int>(perm.size()) != n)
        throw ValidationError("tree_automorphism: permutation size mismatch");
    std::vector<char> hit(n, 0);
    for (int v : perm) {
        if (v < 0 || v >= n || hit[v]) throw ValidationError("tree_automorphism: not a permutation");
        hit[v] = 1;
    }
    // edge structure must be preserved, including lengths
    for (int e = 0; e < tr.edge_count(); ++e) {
        const auto& ed = tr.edge(e);
        bool found = false;
        for (int e2 = 0; e2 < tr.edge_count(); ++e2) {
            const auto& f2 = tr.edge(e2);
            const bool same = (f2.u == perm[ed.u] && f2.v == perm[ed.v]) ||
                              (f2.u == perm[ed.v] && f2.v == perm[ed.u]);
            if (same && std::abs(f2.length - ed.length) <= 1e-12) {
                found = true;
                break;
            }
        }
        if (!found)
            throw ValidationError("tree_automorphism: edge structure not preserved");
    }
    Isometry iso{Isometry::TreeAutomorphism{std::move(perm)}};
    check_isometry(s, iso);
    return iso;
}

Point apply_isometry(const Space& s, const Isometry& iso, const Point& x) {
    s.require_member(x);
    switch (s.kind()) {
        case SpaceKind::Euclidean: {
            const auto& m = std::get<Isometry::EuclideanMap>(iso.kind);
            auto r = apply_linear(m.linear, x.vec());
            for (size_t i = 0; i < r.size(); ++i) r[i] += m.translation[i];
            return s.point(std::move(r));
        }
        case SpaceKind::Hyperbolic: {
            const auto& m = std::get<Isometry::HyperbolicMap>(iso.kind);
            return s.point(apply_linear(m.linear, x.vec()));
        }
        case SpaceKind::Spd: {
            const auto& m = std::get<Isometry::SpdCongruence>(iso.kind);
            return s.point(sym_congruence(x.mat(), m.g));
        }
        case SpaceKind::MetricTree: {
            const auto& m = std::get<Isometry::TreeAutomorphism>(iso.kind);
            const auto& tr = s.tree();
            const TreeLocus l = x.locus();
            const auto& ed = tr.edge(l.edge);
            const int iu = m.perm[ed.u];
            const int iv = m.perm[ed.v];
            for (int e = 0; e < tr.edge_count(); ++e) {
                const auto& f = tr.edge(e);
                if (f.u == iu && f.v == iv) return s.point(TreeLocus{e, l.offset});
                if (f.u == iv && f.v == iu) return s.point(TreeLocus{e, f.length - l.offset});
            }
            throw ValidationError("tree_automorphism: image edge missing");
        }
    }
    throw DomainError("apply_isometry: unknown space kind");
}

// ---- factories ----

namespace {

void check_metadata(const Space& s, const Functional& f) {
    if (f.known_minimizer && f.known_infimum) {
        const double v = evaluate(s, f, *f.known_minimizer);
        if (std::abs(v - *f.known_infimum) > 1e-9)
            throw ValidationError("functional metadata: evaluate(known_minimizer) != known_infimum");
    }
}

}  // namespace

Functional squared_distance(const Space& s, Point anchor, double weight) {
    s.validate_point(anchor);
    if (!(weight > 0.0)) throw ValidationError("squared_distance: weight must be positive");
    Functional f;
    f.kind = Functional::SquaredDistance{std::move(anchor), weight};
    f.known_infimum = 0.0;
    f.known_minimizer = std::get<Functional::SquaredDistance>(f.kind).anchor;
    return f;
}

Functional distance_to_point(const Space& s, Point anchor, double weight) {
    s.validate_point(anchor);
    if (!(weight > 0.0)) throw ValidationError("distance_to_point: weight must be positive");
    Functional f;
    f.kind = Functional::Distance{std::move(anchor), weight};
    f.known_infimum = 0.0;
    f.known_minimizer = std::get<Functional::Distance>(f.kind).anchor;
    return f;
}

Functional distance_to_set(const Space& s, ConvexSet set) {
    Functional f;
    f.kind = Functional::DistanceToSet{std::move(set)};
    f.known_infimum = 0.0;
    return f;
}

Functional busemann(const Space& s, GeodesicRay ray) {
    if (s.kind() == SpaceKind::Spd)
        throw ValidationError("busemann: no closed form is provided on the SPD backend");
    s.validate_point(ray.origin);
    Functional f;
    f.kind = Functional::Busemann{std::move(ray)};
    return f;
}

Functional displacement(const Space& s, Isometry map) {
    Functional f;
    f.kind = Functional::Displacement{std::move(map)};
    return f;
}

Functional indicator(const Space& s, ConvexSet set) {
    Functional f;
    f.kind = Functional::Indicator{std::move(set)};
    f.known_infimum = 0.0;
    return f;
}

Functional weighted_sum(const Space& s, std::vector<WeightedTerm> terms) {
    std::vector<WeightedTerm> flat;
    for (auto& t : terms) {
        if (!(t.weight > 0.0)) throw ValidationError("weighted_sum: weights must be positive");
        if (auto* inner = std::get_if<Functional::WeightedSum>(&t.fn.kind)) {
            for (const auto& it : inner->terms)
                flat.push_back({t.weight * it.weight, it.fn});
        } else {
            flat.push_back(std::move(t));
        }
    }
    for (const auto& t : flat)
        if (std::holds_alternative<Functional::WeightedSum>(t.fn.kind))
            throw ValidationError("weighted_sum: nesting deeper than one level");
    Functional f;
    f.kind = Functional::WeightedSum{std::move(flat)};
    if (std::get<Functional::WeightedSum>(f.kind).terms.empty()) f.known_infimum = 0.0;
    (void)s;
    return f;
}

Functional with_metadata(const Space& s, Functional f, std::optional<double> infimum,
                         std::optional<Point> minimizer) {
    if (minimizer) s.validate_point(*minimizer);
    f.known_infimum = infimum;
    f.known_minimizer = std::move(minimizer);
    check_metadata(s, f);
    return f;
}

// ---- evaluation ----

bool set_contains(const Space& s, const ConvexSet& set, const Point& x) {
    const double tol = s.tolerance();
    if (const auto* one = std::get_if<ConvexSet::Singleton>(&set.desc))
        return distance(s, one->p, x) <= tol;
    if (const auto* ball = std::get_if<ConvexSet::Ball>(&set.desc))
        return distance(s, ball->center, x) <= ball->radius + tol;
    if (const auto* sub = std::get_if<ConvexSet::Sublevel>(&set.desc))
        return evaluate(s, *sub->f, x) <= sub->level + tol;
    return distance(s, project(s, set, x), x) <= tol;
}

double evaluate(const Space& s, const Functional& f, const Point& x) {
    s.require_member(x);
    if (const auto* sq = std::get_if<Functional::SquaredDistance>(&f.kind)) {
        const double d = distance(s, sq->anchor, x);
        return 0.5 * sq->weight * d * d;
    }
    if (const auto* ds = std::get_if<Functional::Distance>(&f.kind))
        return ds->weight * distance(s, ds->anchor, x);
    if (const auto* dc = std::get_if<Functional::DistanceToSet>(&f.kind))
        return distance(s, project(s, dc->set, x), x);
    if (const auto* bu = std::get_if<Functional::Busemann>(&f.kind)) {
        switch (s.kind()) {
            case SpaceKind::Euclidean: {
                const auto& u = std::get<std::vector<double>>(bu->ray.direction);
                const auto& o = bu->ray.origin.vec();
                const auto& v = x.vec();
                double dot = 0.0;
                for (size_t i = 0; i < v.size(); ++i) dot += (v[i] - o[i]) * u[i];
                return -dot;
            }
            case SpaceKind::Hyperbolic: {
                // ideal point representative origin + direction is lightlike
                const auto& u = std::get<std::vector<double>>(bu->ray.direction);
                const auto& o = bu->ray.origin.vec();
                std::vector<double> xi(o.size());
                for (size_t i = 0; i < o.size(); ++i) xi[i] = o[i] + u[i];
                return std::log(-minkowski_dot(x.vec(), xi));
            }
            case SpaceKind::MetricTree: {
                // finite-tree surrogate through the declared end
                const auto& tr = s.tree();
                const TreeLocus end = tr.vertex_locus(std::get<int>(bu->ray.direction));
                return tr.distance(x.locus(), end) - tr.distance(bu->ray.origin.locus(), end);
            }
            case SpaceKind::Spd:
                throw DomainError("busemann: unavailable on the SPD backend");
        }
    }
    if (const auto* dp = std::get_if<Functional::Displacement>(&f.kind))
        return distance(s, x, apply_isometry(s, dp->map, x));
    if (const auto* in = std::get_if<Functional::Indicator>(&f.kind))
        return set_contains(s, in->set, x) ? 0.0 : kInf;
    if (const auto* ws = std::get_if<Functional::WeightedSum>(&f.kind)) {
        double total = 0.0;
        for (const auto& t : ws->terms) {
            const double v = evaluate(s, t.fn, x);
            if (v == kInf) return kInf;
            total += t.weight * v;
        }
        return total;
    }
    throw ValidationError("evaluate: unknown functional kind");
}

double convexity_residual(const Space& s, const Functional& f, const Point& a, const Point& b,
                          double t) {
    const double fa = evaluate(s, f, a);
    const double fb = evaluate(s, f, b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) return kInf;  // vacuous
    const double fg = evaluate(s, f, geodesic_point(s, a, b, t));
    return (1.0 - t) * fa + t * fb - fg;
}

double uniform_convexity_residual(const Space& s, const Functional& f, const Point& a,
                                  const Point& b, double t,
                                  const std::function<double(double)>& modulus) {
    const double gap = convexity_residual(s, f, a, b, t);
    if (!std::isfinite(gap)) return gap;
    return gap - t * (1.0 - t) * modulus(distance(s, a, b));
}

std::optional<std::function<double(double)>> uniform_convexity_modulus(const Functional& f) {
    double w = 0.0;
    if (const auto* sq = std::get_if<Functional::SquaredDistance>(&f.kind)) w = sq->weight;
    if (const auto* ws = std::get_if<Functional::WeightedSum>(&f.kind))
        for (const auto& t : ws->terms)
            if (const auto* sq = std::get_if<Functional::SquaredDistance>(&t.fn.kind))
                w += t.weight * sq->weight;
    if (w <= 0.0) return std::nullopt;
    return [w](double r) { return 0.5 * w * r * r; };
}

std::optional<double> lipschitz_bound(const Functional& f) {
    if (std::holds_alternative<Functional::Distance>(f.kind))
        return std::get<Functional::Distance>(f.kind).weight;
    if (std::holds_alternative<Functional::DistanceToSet>(f.kind)) return 1.0;
    if (std::holds_alternative<Functional::Busemann>(f.kind)) return 1.0;
    if (std::holds_alternative<Functional::Displacement>(f.kind)) return 2.0;
    if (const auto* ws = std::get_if<Functional::WeightedSum>(&f.kind)) {
        double total = 0.0;
        for (const auto& t : ws->terms) {
            const auto l = lipschitz_bound(t.fn);
            if (!l) return std::nullopt;
            total += t.weight * *l;
        }
        return total;
    }
    return std::nullopt;  // squared distance and indicators are not globally Lipschitz
}

double lipschitz_estimate(const Space& s, const Functional& f, const Point& at, double radius) {
    if (const auto* sq = std::get_if<Functional::SquaredDistance>(&f.kind))
        return sq->weight * (distance(s, sq->anchor, at) + radius);
    if (std::holds_alternative<Functional::Indicator>(f.kind)) return 0.0;  // within the set
    if (const auto* ws = std::get_if<Functional::WeightedSum>(&f.kind)) {
        double total = 0.0;
        for (const auto& t : ws->terms) total += t.weight * lipschitz_estimate(s, t.fn, at, radius);
        return total;
    }
    const auto l = lipschitz_bound(f);
    return l ? *l : 0.0;
}

MinimizationProbe is_minimizing_certificate(const Space& s, const Functional& f, const Point& x,
                                            int sample_budget, std::uint64_t seed) {
    if (sample_budget < 1) throw DomainError("is_minimizing_certificate: budget must be >= 1");
    MinimizationProbe probe;
    probe.f_at_x = evaluate(s, f, x);
    probe.best_sampled = probe.f_at_x;
    Rng rng(seed);
    for (int i = 0; i < sample_budget; ++i) {
        Rng sub = rng.substream(0x70726f6265, static_cast<std::uint64_t>(i));
        Point y = random_point(s, sub);
        // half the budget probes geodesically near x
        if (i % 2 == 1) y = geodesic_point(s, x, y, sub.uniform(0.0, 0.2));
        const double v = evaluate(s, f, y);
        probe.best_sampled = std::min(probe.best_sampled, v);
        ++probe.samples;
    }
    probe.improvement = std::max(0.0, probe.f_at_x - probe.best_sampled);
    probe.no_improvement = probe.improvement <= 1e-9;
    return probe;
}

// ---- sublevel projection (declared in geometry.cpp) ----

namespace detail {

Point project_sublevel(const Space& s, const ConvexSet::Sublevel& set, const Point& x) {
    if (!set.f) throw ValidationError("sublevel set: missing functional");
    const Functional& f = *set.f;
    const double level = set.level;
    if (evaluate(s, f, x) <= level + 1e-10) return x;
    if (!f.known_minimizer)
        throw ValidationError("sublevel projection requires known_minimizer metadata");
    const Point& m = *f.known_minimizer;
    const double fm = evaluate(s, f, m);
    if (fm > level) throw InfeasibleError("sublevel set is empty: min value above the level");
    // f along [x, m] is convex and crosses the level once; bisect on the
    // parameter, keeping the feasible end
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 100 && (hi - lo) > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (evaluate(s, f, geodesic_point(s, x, m, mid)) <= level)
            hi = mid;
        else
            lo = mid;
    }
    return geodesic_point(s, x, m, hi);
}

}  // namespace detail

}  // namespace prox0
