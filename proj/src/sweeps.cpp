#include "prox0/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "prox0/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prox0 {

namespace {

constexpr std::uint64_t kSweepLabel = 0x7377656570ULL;

std::string describe_point(const Space& s, const Point& p) {
    char buf[64];
    std::string out;
    switch (s.kind()) {
        case SpaceKind::Euclidean:
        case SpaceKind::Hyperbolic: {
            out = "[";
            for (size_t i = 0; i < p.vec().size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%s%.6g", i ? "," : "", p.vec()[i]);
                out += buf;
            }
            return out + "]";
        }
        case SpaceKind::Spd: {
            out = "sym[";
            for (int i = 0; i < p.mat().n; ++i)
                for (int j = 0; j < p.mat().n; ++j) {
                    std::snprintf(buf, sizeof(buf), "%s%.6g", (i || j) ? "," : "", p.mat().at(i, j));
                    out += buf;
                }
            return out + "]";
        }
        case SpaceKind::MetricTree:
            std::snprintf(buf, sizeof(buf), "locus(edge=%d,offset=%.6g)", p.locus().edge,
                          p.locus().offset);
            return buf;
    }
    return "?";
}

// Drives a per-sample kernel serially or with OpenMP. Samples draw their
// randomness from (seed, index) only, so both modes agree bitwise; among
// equal residuals the smallest index wins.
template <class Kernel>
SweepResult drive(const char* name, double tol, const Space& s, long budget, std::uint64_t seed,
                  ExecMode mode, Kernel&& kernel) {
    if (budget < 1) throw ValidationError("sweep: budget must be >= 1");
    SweepResult result;
    result.name = name;
    result.tolerance = tol;
    result.samples = budget;

    const Rng base(seed);
    double worst = -std::numeric_limits<double>::infinity();
    long worst_index = -1;

    bool parallel = (mode == ExecMode::Parallel);
#ifndef _OPENMP
    parallel = false;
#endif
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            double local_worst = -std::numeric_limits<double>::infinity();
            long local_index = -1;
#pragma omp for schedule(static) nowait
            for (long i = 0; i < budget; ++i) {
                Rng sub = base.substream(kSweepLabel, static_cast<std::uint64_t>(i));
                const double v = kernel(s, sub, i);
                if (v > local_worst || (v == local_worst && i < local_index)) {
                    local_worst = v;
                    local_index = i;
                }
            }
#pragma omp critical
            {
                if (local_worst > worst ||
                    (local_worst == worst && local_index >= 0 && local_index < worst_index)) {
                    worst = local_worst;
                    worst_index = local_index;
                }
            }
        }
#endif
    } else {
        for (long i = 0; i < budget; ++i) {
            Rng sub = base.substream(kSweepLabel, static_cast<std::uint64_t>(i));
            const double v = kernel(s, sub, i);
            if (v > worst) {
                worst = v;
                worst_index = i;
            }
        }
    }

    result.worst = worst;
    result.worst_index = worst_index;
    result.pass = worst <= tol;
    if (worst_index >= 0) {
        Rng sub = base.substream(kSweepLabel, static_cast<std::uint64_t>(worst_index));
        const Point witness = random_point(s, sub);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "sample %ld, first point %s", worst_index,
                      describe_point(s, witness).c_str());
        result.worst_detail = buf;
    }
    return result;
}

}  // namespace

ConvexSet random_convex_set(const Space& s, Rng& rng) {
    const int max_kind = (s.kind() == SpaceKind::MetricTree) ? 3 : 2;
    switch (rng.uniform_int(0, max_kind)) {
        case 0:
            return ConvexSet{ConvexSet::Singleton{random_point(s, rng)}};
        case 1: {
            Point a = random_point(s, rng);
            Point b = random_point(s, rng);
            return ConvexSet{ConvexSet::Segment{std::move(a), std::move(b)}};
        }
        case 2:
            return ConvexSet{ConvexSet::Ball{random_point(s, rng), rng.uniform(0.1, 1.5)}};
        default: {
            const auto& tr = s.tree();
            std::vector<int> verts{rng.uniform_int(0, tr.vertex_count() - 1)};
            std::vector<char> in(tr.vertex_count(), 0);
            in[verts[0]] = 1;
            const int extra = rng.uniform_int(0, tr.vertex_count() - 1);
            for (int step = 0; step < extra; ++step) {
                // grow by one random edge incident to the current set
                std::vector<std::pair<int, int>> frontier;
                for (int e = 0; e < tr.edge_count(); ++e) {
                    const auto& ed = tr.edge(e);
                    if (in[ed.u] && !in[ed.v]) frontier.push_back({e, ed.v});
                    if (in[ed.v] && !in[ed.u]) frontier.push_back({e, ed.u});
                }
                if (frontier.empty()) break;
                const auto pick = frontier[rng.uniform_int(0, static_cast<int>(frontier.size()) - 1)];
                in[pick.second] = 1;
                verts.push_back(pick.second);
            }
            std::sort(verts.begin(), verts.end());
            return ConvexSet{ConvexSet::Subtree{std::move(verts)}};
        }
    }
}

Point random_point_in_set(const Space& s, const ConvexSet& set, Rng& rng) {
    if (const auto* one = std::get_if<ConvexSet::Singleton>(&set.desc)) return one->p;
    if (const auto* seg = std::get_if<ConvexSet::Segment>(&set.desc))
        return geodesic_point(s, seg->a, seg->b, rng.next_u01());
    if (const auto* ball = std::get_if<ConvexSet::Ball>(&set.desc)) {
        const Point q = random_point(s, rng);
        const double d = distance(s, ball->center, q);
        if (d <= ball->radius) return q;
        return geodesic_point(s, ball->center, q, ball->radius * rng.next_u01() / d);
    }
    if (const auto* st = std::get_if<ConvexSet::Subtree>(&set.desc)) {
        const auto& tr = s.tree();
        std::vector<char> in(tr.vertex_count(), 0);
        for (int v : st->vertices) in[v] = 1;
        std::vector<int> edges;
        for (int e = 0; e < tr.edge_count(); ++e)
            if (in[tr.edge(e).u] && in[tr.edge(e).v]) edges.push_back(e);
        if (edges.empty()) return s.point(tr.vertex_locus(st->vertices.front()));
        const int e = edges[rng.uniform_int(0, static_cast<int>(edges.size()) - 1)];
        return s.point(TreeLocus{e, rng.uniform(0.0, tr.edge(e).length)});
    }
    // sublevel: fall back to the projection of a random sample
    return project(s, set, random_point(s, rng));
}

namespace {

std::vector<double> identity_matrix(int n) {
    std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) m[static_cast<size_t>(i) * n + i] = 1.0;
    return m;
}

void apply_rotation(std::vector<double>& m, int n, int i, int j, double theta) {
    const double c = std::cos(theta), sn = std::sin(theta);
    for (int k = 0; k < n; ++k) {
        const double a = m[static_cast<size_t>(i) * n + k];
        const double b = m[static_cast<size_t>(j) * n + k];
        m[static_cast<size_t>(i) * n + k] = c * a - sn * b;
        m[static_cast<size_t>(j) * n + k] = sn * a + c * b;
    }
}

void apply_boost(std::vector<double>& m, int n, int spatial, double phi) {
    const double ch = std::cosh(phi), sh = std::sinh(phi);
    for (int k = 0; k < n; ++k) {
        const double a = m[static_cast<size_t>(0) * n + k];
        const double b = m[static_cast<size_t>(spatial) * n + k];
        m[static_cast<size_t>(0) * n + k] = ch * a + sh * b;
        m[static_cast<size_t>(spatial) * n + k] = sh * a + ch * b;
    }
}

}  // namespace

Isometry random_isometry(const Space& s, Rng& rng) {
    switch (s.kind()) {
        case SpaceKind::Euclidean: {
            const int n = s.dimension();
            auto q = identity_matrix(n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    apply_rotation(q, n, i, j, rng.uniform(0.0, 6.283185307179586));
            std::vector<double> t(n);
            for (double& v : t) v = rng.uniform(-1.0, 1.0);
            return euclidean_isometry(s, std::move(q), std::move(t));
        }
        case SpaceKind::Hyperbolic: {
            const int n = s.dimension() + 1;
            auto l = identity_matrix(n);
            apply_boost(l, n, 1 + rng.uniform_int(0, s.dimension() - 1) % s.dimension(),
                        rng.uniform(-1.0, 1.0));
            for (int i = 1; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    apply_rotation(l, n, i, j, rng.uniform(0.0, 6.283185307179586));
            return hyperbolic_isometry(s, std::move(l));
        }
        case SpaceKind::Spd: {
            const int n = s.dimension();
            std::vector<double> g(static_cast<size_t>(n) * n);
            for (double& v : g) v = rng.uniform(-0.4, 0.4);
            for (int i = 0; i < n; ++i) g[static_cast<size_t>(i) * n + i] += 1.5;
            return spd_congruence(s, std::move(g));
        }
        case SpaceKind::MetricTree: {
            const auto& tr = s.tree();
            std::vector<int> perm(tr.vertex_count());
            for (int v = 0; v < tr.vertex_count(); ++v) perm[v] = v;
            // swap two sibling leaves joined to the same vertex by edges of
            // equal length, when the tree has such a pair
            for (int e1 = 0; e1 < tr.edge_count(); ++e1)
                for (int e2 = e1 + 1; e2 < tr.edge_count(); ++e2) {
                    const auto& a = tr.edge(e1);
                    const auto& b = tr.edge(e2);
                    if (std::abs(a.length - b.length) > 1e-12) continue;
                    for (int la : {a.u, a.v})
                        for (int lb : {b.u, b.v}) {
                            if (la == lb || !tr.is_leaf(la) || !tr.is_leaf(lb)) continue;
                            const int pa = (la == a.u) ? a.v : a.u;
                            const int pb = (lb == b.u) ? b.v : b.u;
                            if (pa != pb) continue;
                            std::swap(perm[la], perm[lb]);
                            return tree_automorphism(s, std::move(perm));
                        }
                }
            return tree_automorphism(s, std::move(perm));
        }
    }
    throw DomainError("random_isometry: unknown space kind");
}

SweepResult sweep_symmetry(const Space& s, long budget, std::uint64_t seed, ExecMode mode) {
    return drive("metric_symmetry", 1e-10, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long) {
                     const Point p = random_point(sp, rng);
                     const Point q = random_point(sp, rng);
                     return std::abs(distance(sp, p, q) - distance(sp, q, p));
                 });
}

SweepResult sweep_triangle(const Space& s, long budget, std::uint64_t seed, ExecMode mode) {
    return drive("metric_triangle", 1e-9, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long) {
                     const Point p = random_point(sp, rng);
                     const Point q = random_point(sp, rng);
                     const Point r = random_point(sp, rng);
                     const double direct = distance(sp, p, r);
                     const double relay = distance(sp, p, q) + distance(sp, q, r);
                     return std::max(direct - relay, -distance(sp, p, q));
                 });
}

SweepResult sweep_geodesic_parameterization(const Space& s, long budget, std::uint64_t seed,
                                            ExecMode mode) {
    return drive("geodesic_parameterization", 1e-8, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long) {
                     const Point a = random_point(sp, rng);
                     const Point b = random_point(sp, rng);
                     const double s1 = rng.next_u01();
                     const double s2 = rng.next_u01();
                     const double expected = std::abs(s1 - s2) * distance(sp, a, b);
                     const double got = distance(sp, geodesic_point(sp, a, b, s1),
                                                 geodesic_point(sp, a, b, s2));
                     return std::abs(got - expected);
                 });
}

SweepResult sweep_cat0(const Space& s, long budget, std::uint64_t seed, ExecMode mode) {
    const bool flat = s.kind() == SpaceKind::Euclidean;
    const double tol = flat ? 1e-10 : 1e-8;
    return drive("cat0_residual", tol, s, budget, seed, mode,
                 [flat](const Space& sp, Rng& rng, long) {
                     const Point x = random_point(sp, rng);
                     const Point a = random_point(sp, rng);
                     const Point b = random_point(sp, rng);
                     const double t = rng.next_u01();
                     const double r = cat0_residual(sp, x, a, b, t);
                     return flat ? std::abs(r) : -r;
                 });
}

SweepResult sweep_projection_nonexpansive(const Space& s, long budget, std::uint64_t seed,
                                          ExecMode mode) {
    return drive("projection_nonexpansive", 1e-9, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long) {
                     const Point x = random_point(sp, rng);
                     const Point y = random_point(sp, rng);
                     const ConvexSet set = random_convex_set(sp, rng);
                     const Point px = project(sp, set, x);
                     const Point py = project(sp, set, y);
                     return distance(sp, px, py) - distance(sp, x, y);
                 });
}

SweepResult sweep_projection_idempotent(const Space& s, long budget, std::uint64_t seed,
                                        ExecMode mode) {
    return drive("projection_idempotent", 1e-8, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long) {
                     const Point x = random_point(sp, rng);
                     const ConvexSet set = random_convex_set(sp, rng);
                     const Point px = project(sp, set, x);
                     return distance(sp, project(sp, set, px), px);
                 });
}

SweepResult sweep_projection_obtuse(const Space& s, long budget, std::uint64_t seed,
                                    ExecMode mode) {
    return drive("projection_obtuse", 1e-8, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long) {
                     const Point x = random_point(sp, rng);
                     const ConvexSet set = random_convex_set(sp, rng);
                     const Point p = project(sp, set, x);
                     const Point y = random_point_in_set(sp, set, rng);
                     const double dxy = distance(sp, x, y);
                     const double dxp = distance(sp, x, p);
                     const double dpy = distance(sp, p, y);
                     return dxp * dxp + dpy * dpy - dxy * dxy;
                 });
}

SweepResult sweep_projection_segment(const Space& s, long budget, std::uint64_t seed,
                                     ExecMode mode) {
    return drive("projection_segment_property", 1e-8, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long) {
                     const Point x = random_point(sp, rng);
                     const ConvexSet set = random_convex_set(sp, rng);
                     const Point p = project(sp, set, x);
                     const Point y = geodesic_point(sp, x, p, rng.next_u01());
                     return distance(sp, project(sp, set, y), p);
                 });
}

namespace {

// Functional of the sample's kind; trees never see Busemann rays toward the
// base point and SPD skips Busemann entirely.
Functional random_functional(const Space& s, Rng& rng, int which) {
    const bool no_busemann = (s.kind() == SpaceKind::Spd);
    switch (which % (no_busemann ? 6 : 7)) {
        case 0: return squared_distance(s, random_point(s, rng), rng.uniform(0.5, 2.0));
        case 1: return distance_to_point(s, random_point(s, rng), rng.uniform(0.5, 2.0));
        case 2: return distance_to_set(s, random_convex_set(s, rng));
        case 3: return displacement(s, random_isometry(s, rng));
        case 4: return indicator(s, random_convex_set(s, rng));
        case 5: {
            std::vector<WeightedTerm> terms;
            terms.push_back({rng.uniform(0.5, 2.0),
                             squared_distance(s, random_point(s, rng), rng.uniform(0.5, 2.0))});
            terms.push_back({rng.uniform(0.5, 2.0),
                             distance_to_point(s, random_point(s, rng), rng.uniform(0.5, 2.0))});
            return weighted_sum(s, std::move(terms));
        }
        default: {
            const Point origin = random_point(s, rng);
            const GeodesicRay ray = s.ray(origin, random_direction(s, origin, rng));
            return busemann(s, ray);
        }
    }
}

}  // namespace

SweepResult sweep_convexity(const Space& s, long budget, std::uint64_t seed, ExecMode mode) {
    return drive("convexity_residual", 1e-8, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long i) {
                     const Functional f = random_functional(sp, rng, static_cast<int>(i));
                     Point a = random_point(sp, rng);
                     Point b = random_point(sp, rng);
                     // indicators need endpoints inside the set to say anything
                     if (const auto* in = std::get_if<Functional::Indicator>(&f.kind)) {
                         a = random_point_in_set(sp, in->set, rng);
                         b = random_point_in_set(sp, in->set, rng);
                     }
                     const double r = convexity_residual(sp, f, a, b, rng.next_u01());
                     if (!std::isfinite(r)) return -std::numeric_limits<double>::infinity();
                     return -r;
                 });
}

SweepResult sweep_lipschitz(const Space& s, long budget, std::uint64_t seed, ExecMode mode) {
    return drive("lipschitz", 1e-8, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long i) {
                     Functional f;
                     switch (i % (sp.kind() == SpaceKind::Spd ? 3 : 4)) {
                         case 0: f = distance_to_point(sp, random_point(sp, rng), 1.0); break;
                         case 1: f = distance_to_set(sp, random_convex_set(sp, rng)); break;
                         case 2: f = displacement(sp, random_isometry(sp, rng)); break;
                         default: {
                             const Point origin = random_point(sp, rng);
                             f = busemann(sp, sp.ray(origin, random_direction(sp, origin, rng)));
                         }
                     }
                     const double lip = *lipschitz_bound(f);
                     const Point x = random_point(sp, rng);
                     const Point y = random_point(sp, rng);
                     return std::abs(evaluate(sp, f, x) - evaluate(sp, f, y)) -
                            lip * distance(sp, x, y);
                 });
}

SweepResult sweep_uniform_convexity(const Space& s, long budget, std::uint64_t seed,
                                    ExecMode mode) {
    return drive("uniform_convexity_squared_distance", 1e-8, s, budget, seed, mode,
                 [](const Space& sp, Rng& rng, long) {
                     const double w = rng.uniform(0.5, 2.0);
                     const Functional f = squared_distance(sp, random_point(sp, rng), w);
                     const Point a = random_point(sp, rng);
                     const Point b = random_point(sp, rng);
                     const double r = uniform_convexity_residual(
                         sp, f, a, b, rng.next_u01(), [w](double d) { return 0.5 * w * d * d; });
                     return -r;
                 });
}

std::vector<SweepResult> run_all_sweeps(const Space& s, long budget, std::uint64_t seed,
                                        ExecMode mode) {
    return {
        sweep_symmetry(s, budget, seed, mode),
        sweep_triangle(s, budget, seed, mode),
        sweep_geodesic_parameterization(s, budget, seed, mode),
        sweep_cat0(s, budget, seed, mode),
        sweep_projection_nonexpansive(s, budget, seed, mode),
        sweep_projection_idempotent(s, budget, seed, mode),
        sweep_projection_obtuse(s, budget, seed, mode),
        sweep_projection_segment(s, budget, seed, mode),
        sweep_convexity(s, budget, seed, mode),
        sweep_lipschitz(s, budget, seed, mode),
        sweep_uniform_convexity(s, budget, seed, mode),
    };
}

}  // namespace prox0
