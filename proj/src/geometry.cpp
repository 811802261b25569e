#include "prox0/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "prox0/errors.hpp"

namespace prox0 {

namespace detail {
// Defined in functionals.cpp: the sublevel branch needs functional evaluation.
Point project_sublevel(const Space& s, const ConvexSet::Sublevel& set, const Point& x);
}  // namespace detail

const char* space_kind_name(SpaceKind k) {
    switch (k) {
        case SpaceKind::Euclidean: return "euclidean";
        case SpaceKind::Hyperbolic: return "hyperbolic";
        case SpaceKind::Spd: return "spd";
        case SpaceKind::MetricTree: return "tree";
    }
    return "?";
}

namespace {

std::uint64_t next_space_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// ---- Euclidean vector helpers ----

double euclid_dist(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - q[i];
        s += d * d;
    }
    return std::sqrt(s);
}

std::vector<double> lerp(const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = (1.0 - t) * a[i] + t * b[i];
    return r;
}

// ---- hyperboloid helpers ----

std::vector<double> sheet_normalize(std::vector<double> p) {
    const double q = -minkowski_dot(p, p);
    if (!(q > 0.0)) throw ValidationError("hyperboloid: vector is not timelike");
    const double s = 1.0 / std::sqrt(q);
    for (double& x : p) x *= s;
    if (p[0] < 0.0)
        for (double& x : p) x = -x;
    return p;
}

double hyper_dist(const std::vector<double>& p, const std::vector<double>& q) {
    const double z = std::max(1.0, -minkowski_dot(p, q));
    return std::acosh(z);
}

std::vector<double> hyper_interp(const std::vector<double>& a, const std::vector<double>& b,
                                 double t) {
    const double theta = hyper_dist(a, b);
    if (theta < 1e-8) return sheet_normalize(lerp(a, b, t));
    const double s = std::sinh(theta);
    const double ca = std::sinh((1.0 - t) * theta) / s;
    const double cb = std::sinh(t * theta) / s;
    std::vector<double> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = ca * a[i] + cb * b[i];
    return sheet_normalize(std::move(r));
}

// Tangent at p orthogonal (Minkowski) to p, unit Minkowski norm.
std::vector<double> hyper_unit_tangent(const std::vector<double>& p, std::vector<double> v) {
    const double c = minkowski_dot(v, p);
    for (size_t i = 0; i < v.size(); ++i) v[i] += c * p[i];  // <p,p> = -1
    const double n2 = minkowski_dot(v, v);
    if (!(n2 > 1e-24)) throw ValidationError("hyperboloid ray: direction not normalizable");
    const double s = 1.0 / std::sqrt(n2);
    for (double& x : v) x *= s;
    return v;
}

std::vector<double> hyper_ray(const std::vector<double>& p, const std::vector<double>& u,
                              double t) {
    const double ch = std::cosh(t), sh = std::sinh(t);
    std::vector<double> r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[i] = ch * p[i] + sh * u[i];
    return sheet_normalize(std::move(r));
}

}  // namespace

double minkowski_dot(const std::vector<double>& p, const std::vector<double>& q) {
    double s = -p[0] * q[0];
    for (size_t i = 1; i < p.size(); ++i) s += p[i] * q[i];
    return s;
}

// ---- Space ----

Space Space::euclidean(int dimension) {
    if (dimension < 1) throw ValidationError("euclidean space: dimension must be >= 1");
    Space s;
    s.kind_ = SpaceKind::Euclidean;
    s.dimension_ = dimension;
    s.id_ = next_space_id();
    return s;
}

Space Space::hyperbolic(int dimension) {
    if (dimension < 1) throw ValidationError("hyperbolic space: dimension must be >= 1");
    Space s;
    s.kind_ = SpaceKind::Hyperbolic;
    s.dimension_ = dimension;
    s.id_ = next_space_id();
    return s;
}

Space Space::spd(int order) {
    if (order < 1) throw ValidationError("spd space: order must be >= 1");
    if (order > 16) throw ValidationError("spd space: order above 16 not supported");
    Space s;
    s.kind_ = SpaceKind::Spd;
    s.dimension_ = order;
    s.id_ = next_space_id();
    return s;
}

Space Space::metric_tree(MetricTree tree) {
    Space s;
    s.kind_ = SpaceKind::MetricTree;
    s.dimension_ = 1;
    s.id_ = next_space_id();
    s.tree_ = std::make_shared<const MetricTree>(std::move(tree));
    return s;
}

const MetricTree& Space::tree() const {
    if (!tree_) throw DomainError("tree(): not a metric tree space");
    return *tree_;
}

Point Space::point(std::vector<double> coords) const {
    Point p;
    p.space_id = id_;
    p.payload = std::move(coords);
    validate_point(p);
    return p;
}

Point Space::point(SymMatrix m) const {
    Point p;
    p.space_id = id_;
    p.payload = std::move(m);
    validate_point(p);
    return p;
}

Point Space::point(TreeLocus locus) const {
    Point p;
    p.space_id = id_;
    p.payload = tree().canonical(locus);
    return p;
}

Point Space::tree_vertex(const std::string& name) const {
    const int v = tree().vertex_index(name);
    if (v < 0) throw ValidationError("tree vertex '" + name + "' does not exist");
    return point(tree().vertex_locus(v));
}

void Space::require_member(const Point& p) const {
    if (p.space_id != id_)
        throw DomainError("point belongs to a different space (id mismatch)");
}

void Space::validate_point(const Point& p) const {
    require_member(p);
    switch (kind_) {
        case SpaceKind::Euclidean: {
            if (!std::holds_alternative<std::vector<double>>(p.payload))
                throw ValidationError("euclidean point: payload must be a coordinate vector");
            const auto& v = p.vec();
            if (static_cast<int>(v.size()) != dimension_)
                throw ValidationError("euclidean point: wrong dimension");
            if (!all_finite(v)) throw ValidationError("euclidean point: non-finite coordinate");
            break;
        }
        case SpaceKind::Hyperbolic: {
            if (!std::holds_alternative<std::vector<double>>(p.payload))
                throw ValidationError("hyperboloid point: payload must be a Minkowski vector");
            const auto& v = p.vec();
            if (static_cast<int>(v.size()) != dimension_ + 1)
                throw ValidationError("hyperboloid point: wrong dimension");
            if (!all_finite(v)) throw ValidationError("hyperboloid point: non-finite coordinate");
            if (std::abs(minkowski_dot(v, v) + 1.0) > 1e-10)
                throw ValidationError("hyperboloid point: <p,p>_M != -1 within 1e-10");
            if (!(v[0] > 0.0)) throw ValidationError("hyperboloid point: not on the upper sheet");
            break;
        }
        case SpaceKind::Spd: {
            if (!std::holds_alternative<SymMatrix>(p.payload))
                throw ValidationError("spd point: payload must be a symmetric matrix");
            const auto& m = p.mat();
            if (m.n != dimension_) throw ValidationError("spd point: wrong matrix order");
            for (double x : m.a)
                if (!std::isfinite(x)) throw ValidationError("spd point: non-finite entry");
            if (m.max_asymmetry() > 1e-12)
                throw ValidationError("spd point: matrix not symmetric within 1e-12");
            if (!spd_ldl_check(m))
                throw ValidationError("spd point: matrix not positive definite");
            break;
        }
        case SpaceKind::MetricTree: {
            if (!std::holds_alternative<TreeLocus>(p.payload))
                throw ValidationError("tree point: payload must be a locus");
            tree().validate_locus(p.locus());
            break;
        }
    }
}

GeodesicSegment Space::segment(const Point& a, const Point& b) const {
    return GeodesicSegment{a, b, distance(*this, a, b)};
}

bool Space::approx_equal(const Point& p, const Point& q) const {
    return distance(*this, p, q) <= tolerance_;
}

GeodesicRay Space::ray(const Point& origin, RayDirection direction) const {
    validate_point(origin);
    GeodesicRay r;
    r.origin = origin;
    switch (kind_) {
        case SpaceKind::Euclidean: {
            auto* v = std::get_if<std::vector<double>>(&direction);
            if (!v || static_cast<int>(v->size()) != dimension_)
                throw ValidationError("euclidean ray: direction must be a vector of space dimension");
            const double n = euclid_dist(*v, std::vector<double>(v->size(), 0.0));
            if (!(n > 1e-12)) throw ValidationError("euclidean ray: direction not normalizable");
            for (double& x : *v) x /= n;
            r.direction = std::move(*v);
            break;
        }
        case SpaceKind::Hyperbolic: {
            auto* v = std::get_if<std::vector<double>>(&direction);
            if (!v || static_cast<int>(v->size()) != dimension_ + 1)
                throw ValidationError("hyperboloid ray: direction must be a Minkowski vector");
            r.direction = hyper_unit_tangent(origin.vec(), std::move(*v));
            break;
        }
        case SpaceKind::Spd: {
            auto* m = std::get_if<SymMatrix>(&direction);
            if (!m || m->n != dimension_)
                throw ValidationError("spd ray: direction must be a symmetric matrix of space order");
            if (m->max_asymmetry() > 1e-12)
                throw ValidationError("spd ray: direction matrix not symmetric");
            const double n = spd_tangent_norm(origin.mat(), *m);
            if (!(n > 1e-14)) throw ValidationError("spd ray: direction not normalizable");
            r.direction = sym_scale(*m, 1.0 / n);
            break;
        }
        case SpaceKind::MetricTree: {
            auto* leaf = std::get_if<int>(&direction);
            if (!leaf) throw ValidationError("tree ray: direction must be a leaf vertex id");
            if (*leaf < 0 || *leaf >= tree().vertex_count())
                throw ValidationError("tree ray: vertex id out of range");
            if (!tree().is_leaf(*leaf))
                throw ValidationError("tree ray: declared end must be a leaf");
            if (tree().distance(origin.locus(), tree().vertex_locus(*leaf)) <= 0.0)
                throw ValidationError("tree ray: origin coincides with the declared end");
            r.direction = *leaf;
            break;
        }
    }
    return r;
}

// ---- operations ----

double distance(const Space& s, const Point& p, const Point& q) {
    s.require_member(p);
    s.require_member(q);
    switch (s.kind()) {
        case SpaceKind::Euclidean: return euclid_dist(p.vec(), q.vec());
        case SpaceKind::Hyperbolic: return hyper_dist(p.vec(), q.vec());
        case SpaceKind::Spd: return spd_distance(p.mat(), q.mat());
        case SpaceKind::MetricTree: return s.tree().distance(p.locus(), q.locus());
    }
    return 0.0;
}

Point geodesic_point(const Space& s, const Point& a, const Point& b, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geodesic_point: t outside [0,1]");
    return geodesic_extend(s, a, b, t);
}

Point geodesic_extend(const Space& s, const Point& a, const Point& b, double t) {
    s.require_member(a);
    s.require_member(b);
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    Point r;
    r.space_id = s.id();
    switch (s.kind()) {
        case SpaceKind::Euclidean:
            r.payload = lerp(a.vec(), b.vec(), t);
            break;
        case SpaceKind::Hyperbolic:
            r.payload = hyper_interp(a.vec(), b.vec(), t);
            break;
        case SpaceKind::Spd:
            r.payload = spd_geodesic(a.mat(), b.mat(), t);
            break;
        case SpaceKind::MetricTree:
            if (!(t >= 0.0 && t <= 1.0))
                throw DomainError("geodesic_extend: trees do not extend past endpoints");
            r.payload = s.tree().interpolate(a.locus(), b.locus(), t);
            break;
    }
    return r;
}

double cat0_residual(const Space& s, const Point& x, const Point& a, const Point& b, double t) {
    const double dxa = distance(s, x, a);
    const double dxb = distance(s, x, b);
    const double dab = distance(s, a, b);
    const double dxg = distance(s, x, geodesic_point(s, a, b, t));
    return (1.0 - t) * dxa * dxa + t * dxb * dxb - t * (1.0 - t) * dab * dab - dxg * dxg;
}

double comparison_angle(const Space& s, const Point& y, const Point& x, const Point& z) {
    const double dy = distance(s, x, y);
    const double dz = distance(s, x, z);
    if (dy <= s.tolerance() || dz <= s.tolerance())
        throw DomainError("comparison_angle: vertex coincides with a side endpoint");
    const double dyz = distance(s, y, z);
    const double c = std::clamp((dy * dy + dz * dz - dyz * dyz) / (2.0 * dy * dz), -1.0, 1.0);
    return std::acos(c);
}

namespace {

Point project_segment(const Space& s, const Point& a, const Point& b, const Point& x) {
    switch (s.kind()) {
        case SpaceKind::Euclidean: {
            const auto& va = a.vec();
            const auto& vb = b.vec();
            const auto& vx = x.vec();
            double num = 0.0, den = 0.0;
            for (size_t i = 0; i < va.size(); ++i) {
                const double e = vb[i] - va[i];
                num += (vx[i] - va[i]) * e;
                den += e * e;
            }
            if (den <= 0.0) return a;
            return geodesic_point(s, a, b, std::clamp(num / den, 0.0, 1.0));
        }
        case SpaceKind::MetricTree: {
            // Gromov product: the median point of the triple (a, b, x) lies
            // on [a, b] at arc length (d(x,a) + d(a,b) - d(x,b)) / 2 from a.
            const auto& tr = s.tree();
            const double dab = tr.distance(a.locus(), b.locus());
            if (dab <= 0.0) return a;
            const double sa = 0.5 * (tr.distance(x.locus(), a.locus()) + dab -
                                     tr.distance(x.locus(), b.locus()));
            Point r;
            r.space_id = s.id();
            r.payload = tr.walk(a.locus(), b.locus(), std::clamp(sa, 0.0, dab));
            return r;
        }
        default: {
            const double len = distance(s, a, b);
            if (len <= s.tolerance()) return a;
            const double t = detail::golden_min(
                [&](double u) { return distance(s, x, geodesic_point(s, a, b, u)); }, 0.0, 1.0);
            return geodesic_point(s, a, b, t);
        }
    }
}

Point project_subtree(const Space& s, const ConvexSet::Subtree& set, const Point& x) {
    const auto& tr = s.tree();
    if (set.vertices.empty()) throw ValidationError("subtree set: empty vertex list");
    std::vector<char> in_set(tr.vertex_count(), 0);
    for (int v : set.vertices) {
        if (v < 0 || v >= tr.vertex_count())
            throw ValidationError("subtree set: vertex id out of range");
        in_set[v] = 1;
    }
    // connectivity of the induced subgraph
    {
        std::vector<int> stack{set.vertices.front()};
        std::vector<char> seen(tr.vertex_count(), 0);
        seen[stack.front()] = 1;
        int reached = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int e = 0; e < tr.edge_count(); ++e) {
                const auto& ed = tr.edge(e);
                int other = -1;
                if (ed.u == v && in_set[ed.v]) other = ed.v;
                if (ed.v == v && in_set[ed.u]) other = ed.u;
                if (other >= 0 && !seen[other]) {
                    seen[other] = 1;
                    ++reached;
                    stack.push_back(other);
                }
            }
        }
        int total = 0;
        for (int v = 0; v < tr.vertex_count(); ++v) total += in_set[v];
        if (reached != total)
            throw ValidationError("subtree set: vertex set does not induce a connected subgraph");
    }

    TreeLocus best{};
    double best_dist = std::numeric_limits<double>::infinity();
    auto consider = [&](const TreeLocus& cand) {
        const TreeLocus c = tr.canonical(cand);
        const double d = tr.distance(x.locus(), c);
        if (d < best_dist - 1e-12 ||
            (d <= best_dist + 1e-12 &&
             (c.edge < best.edge || (c.edge == best.edge && c.offset < best.offset)))) {
            best_dist = std::min(d, best_dist);
            best = c;
        }
    };
    for (int v : set.vertices) consider(tr.vertex_locus(v));
    for (int e = 0; e < tr.edge_count(); ++e) {
        const auto& ed = tr.edge(e);
        if (!in_set[ed.u] || !in_set[ed.v]) continue;
        const TreeLocus lu{e, 0.0}, lv{e, ed.length};
        const double sa = 0.5 * (tr.distance(x.locus(), lu) + ed.length -
                                 tr.distance(x.locus(), lv));
        consider(tr.walk(lu, lv, std::clamp(sa, 0.0, ed.length)));
    }
    Point r;
    r.space_id = s.id();
    r.payload = best;
    return r;
}

}  // namespace

Point project(const Space& s, const ConvexSet& set, const Point& x) {
    s.require_member(x);
    if (const auto* one = std::get_if<ConvexSet::Singleton>(&set.desc)) {
        s.require_member(one->p);
        return one->p;
    }
    if (const auto* seg = std::get_if<ConvexSet::Segment>(&set.desc)) {
        s.require_member(seg->a);
        s.require_member(seg->b);
        return project_segment(s, seg->a, seg->b, x);
    }
    if (const auto* ball = std::get_if<ConvexSet::Ball>(&set.desc)) {
        if (!(ball->radius >= 0.0)) throw ValidationError("ball set: negative radius");
        s.require_member(ball->center);
        const double d = distance(s, ball->center, x);
        if (d <= ball->radius) return x;
        return geodesic_point(s, ball->center, x, ball->radius / d);
    }
    if (const auto* sub = std::get_if<ConvexSet::Sublevel>(&set.desc)) {
        return detail::project_sublevel(s, *sub, x);
    }
    if (const auto* st = std::get_if<ConvexSet::Subtree>(&set.desc)) {
        if (s.kind() != SpaceKind::MetricTree)
            throw DomainError("subtree sets exist only on metric tree spaces");
        return project_subtree(s, *st, x);
    }
    throw ValidationError("project: invalid set descriptor");
}

Point ray_point(const Space& s, const GeodesicRay& ray, double t) {
    if (!(t >= 0.0)) throw DomainError("ray_point: t must be nonnegative");
    s.require_member(ray.origin);
    if (t == 0.0) return ray.origin;
    Point r;
    r.space_id = s.id();
    switch (s.kind()) {
        case SpaceKind::Euclidean: {
            const auto& u = std::get<std::vector<double>>(ray.direction);
            std::vector<double> v = ray.origin.vec();
            for (size_t i = 0; i < v.size(); ++i) v[i] += t * u[i];
            r.payload = std::move(v);
            break;
        }
        case SpaceKind::Hyperbolic:
            r.payload = hyper_ray(ray.origin.vec(), std::get<std::vector<double>>(ray.direction), t);
            break;
        case SpaceKind::Spd:
            r.payload = spd_exp_map(ray.origin.mat(),
                                    sym_scale(std::get<SymMatrix>(ray.direction), t));
            break;
        case SpaceKind::MetricTree: {
            const int leaf = std::get<int>(ray.direction);
            const TreeLocus end = s.tree().vertex_locus(leaf);
            const double reach = s.tree().distance(ray.origin.locus(), end);
            if (t > reach + 1e-12)
                throw DomainError("ray_point: t beyond the declared end of a finite tree ray");
            r.payload = s.tree().walk(ray.origin.locus(), end, std::min(t, reach));
            break;
        }
    }
    return r;
}

double ray_reach(const Space& s, const GeodesicRay& ray) {
    if (s.kind() != SpaceKind::MetricTree) return std::numeric_limits<double>::infinity();
    const int leaf = std::get<int>(ray.direction);
    return s.tree().distance(ray.origin.locus(), s.tree().vertex_locus(leaf));
}

// ---- tangent helpers ----

Tangent log_map(const Space& s, const Point& base, const Point& target) {
    s.require_member(base);
    s.require_member(target);
    switch (s.kind()) {
        case SpaceKind::Euclidean: {
            std::vector<double> v(base.vec().size());
            for (size_t i = 0; i < v.size(); ++i) v[i] = target.vec()[i] - base.vec()[i];
            return Tangent{std::move(v)};
        }
        case SpaceKind::Hyperbolic: {
            const auto& p = base.vec();
            const auto& q = target.vec();
            const double theta = hyper_dist(p, q);
            std::vector<double> v(p.size(), 0.0);
            if (theta < 1e-12) return Tangent{std::move(v)};
            const double c = theta / std::sinh(theta);
            const double ch = std::cosh(theta);
            for (size_t i = 0; i < p.size(); ++i) v[i] = c * (q[i] - ch * p[i]);
            return Tangent{std::move(v)};
        }
        case SpaceKind::Spd:
            return Tangent{spd_log_map(base.mat(), target.mat())};
        case SpaceKind::MetricTree:
            throw DomainError("log_map: trees have no tangent structure");
    }
    throw DomainError("log_map: unknown space kind");
}

Point exp_map(const Space& s, const Point& base, const Tangent& t) {
    s.require_member(base);
    Point r;
    r.space_id = s.id();
    switch (s.kind()) {
        case SpaceKind::Euclidean: {
            const auto& v = std::get<std::vector<double>>(t.v);
            std::vector<double> p = base.vec();
            for (size_t i = 0; i < p.size(); ++i) p[i] += v[i];
            r.payload = std::move(p);
            return r;
        }
        case SpaceKind::Hyperbolic: {
            const auto& v = std::get<std::vector<double>>(t.v);
            const auto& p = base.vec();
            const double n2 = minkowski_dot(v, v);
            if (n2 < 1e-24) {
                std::vector<double> q(p.size());
                for (size_t i = 0; i < p.size(); ++i) q[i] = p[i] + v[i];
                r.payload = sheet_normalize(std::move(q));
                return r;
            }
            const double theta = std::sqrt(n2);
            const double ch = std::cosh(theta), sh = std::sinh(theta) / theta;
            std::vector<double> q(p.size());
            for (size_t i = 0; i < p.size(); ++i) q[i] = ch * p[i] + sh * v[i];
            r.payload = sheet_normalize(std::move(q));
            return r;
        }
        case SpaceKind::Spd:
            r.payload = spd_exp_map(base.mat(), std::get<SymMatrix>(t.v));
            return r;
        case SpaceKind::MetricTree:
            throw DomainError("exp_map: trees have no tangent structure");
    }
    throw DomainError("exp_map: unknown space kind");
}

Tangent tangent_zero(const Space& s, const Point& base) {
    switch (s.kind()) {
        case SpaceKind::Euclidean:
            return Tangent{std::vector<double>(base.vec().size(), 0.0)};
        case SpaceKind::Hyperbolic:
            return Tangent{std::vector<double>(base.vec().size(), 0.0)};
        case SpaceKind::Spd:
            return Tangent{SymMatrix(base.mat().n)};
        case SpaceKind::MetricTree:
            throw DomainError("tangent_zero: trees have no tangent structure");
    }
    throw DomainError("tangent_zero: unknown space kind");
}

void tangent_axpy(Tangent& acc, double c, const Tangent& t) {
    if (auto* av = std::get_if<std::vector<double>>(&acc.v)) {
        const auto& tv = std::get<std::vector<double>>(t.v);
        for (size_t i = 0; i < av->size(); ++i) (*av)[i] += c * tv[i];
        return;
    }
    auto& am = std::get<SymMatrix>(acc.v);
    const auto& tm = std::get<SymMatrix>(t.v);
    for (size_t i = 0; i < am.a.size(); ++i) am.a[i] += c * tm.a[i];
}

double tangent_norm(const Space& s, const Point& base, const Tangent& t) {
    switch (s.kind()) {
        case SpaceKind::Euclidean: {
            const auto& v = std::get<std::vector<double>>(t.v);
            double n2 = 0.0;
            for (double x : v) n2 += x * x;
            return std::sqrt(n2);
        }
        case SpaceKind::Hyperbolic: {
            const auto& v = std::get<std::vector<double>>(t.v);
            return std::sqrt(std::max(0.0, minkowski_dot(v, v)));
        }
        case SpaceKind::Spd:
            return spd_tangent_norm(base.mat(), std::get<SymMatrix>(t.v));
        case SpaceKind::MetricTree:
            throw DomainError("tangent_norm: trees have no tangent structure");
    }
    throw DomainError("tangent_norm: unknown space kind");
}

}  // namespace prox0
