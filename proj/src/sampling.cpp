#include "prox0/sampling.hpp"

#include <cmath>

#include "prox0/errors.hpp"

namespace prox0 {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_u01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_u01(); }

double Rng::normal() {
    // Box-Muller; u clamped away from 0 so the log is finite.
    const double u = std::max(next_u01(), 0x1.0p-53);
    const double v = next_u01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
}

int Rng::uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

Rng Rng::substream(std::uint64_t label, std::uint64_t index) const {
    std::uint64_t x = state_;
    x ^= 0x2545f4914f6cdd1dULL * (label + 1);
    std::uint64_t mixed = splitmix64(x);
    mixed ^= 0x9e3779b97f4a7c15ULL * (index + 1);
    Rng r(mixed);
    return r;
}

namespace {

std::vector<double> random_unit_vector(int n, Rng& rng) {
    std::vector<double> v(n);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = rng.normal();
            norm2 += v[i] * v[i];
        }
    } while (norm2 < 1e-12);
    const double s = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= s;
    return v;
}

SymMatrix random_sym(int n, Rng& rng, double scale) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = rng.uniform(-scale, scale);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    return m;
}

}  // namespace

Point random_point(const Space& s, Rng& rng, double scale) {
    switch (s.kind()) {
        case SpaceKind::Euclidean: {
            std::vector<double> v(s.dimension());
            for (double& x : v) x = rng.uniform(-scale, scale);
            return s.point(std::move(v));
        }
        case SpaceKind::Hyperbolic: {
            // exp from the base point (1, 0, ..., 0) along a random tangent
            std::vector<double> base(s.dimension() + 1, 0.0);
            base[0] = 1.0;
            auto dir = random_unit_vector(s.dimension(), rng);
            std::vector<double> tangent(s.dimension() + 1, 0.0);
            for (int i = 0; i < s.dimension(); ++i) tangent[i + 1] = dir[i];
            const double r = rng.uniform(0.0, scale);
            std::vector<double> p(s.dimension() + 1);
            const double ch = std::cosh(r), sh = std::sinh(r);
            for (size_t i = 0; i < p.size(); ++i) p[i] = ch * base[i] + sh * tangent[i];
            return s.point(std::move(p));
        }
        case SpaceKind::Spd: {
            // exp of a random symmetric matrix; eigenvalues stay in a bounded band
            const double band = scale / std::sqrt(static_cast<double>(s.dimension()));
            return s.point(spd_exp(random_sym(s.dimension(), rng, band)));
        }
        case SpaceKind::MetricTree: {
            const auto& tr = s.tree();
            const int e = rng.uniform_int(0, tr.edge_count() - 1);
            const double off = rng.uniform(0.0, tr.edge(e).length);
            return s.point(TreeLocus{e, off});
        }
    }
    throw DomainError("random_point: unknown space kind");
}

RayDirection random_direction(const Space& s, const Point& base, Rng& rng) {
    switch (s.kind()) {
        case SpaceKind::Euclidean:
            return random_unit_vector(s.dimension(), rng);
        case SpaceKind::Hyperbolic: {
            std::vector<double> v(s.dimension() + 1);
            for (double& x : v) x = rng.normal();
            return v;  // Space::ray orthogonalizes and normalizes
        }
        case SpaceKind::Spd:
            return random_sym(s.dimension(), rng, 1.0);
        case SpaceKind::MetricTree: {
            const auto& tr = s.tree();
            std::vector<int> leaves;
            for (int v = 0; v < tr.vertex_count(); ++v)
                if (tr.is_leaf(v) &&
                    tr.distance(base.locus(), tr.vertex_locus(v)) > 1e-12)
                    leaves.push_back(v);
            if (leaves.empty()) throw ValidationError("tree has no leaf away from the base point");
            return leaves[rng.uniform_int(0, static_cast<int>(leaves.size()) - 1)];
        }
    }
    throw DomainError("random_direction: unknown space kind");
}

GeodesicSegment random_geodesic_through(const Space& s, const Point& x, Rng& rng,
                                        double* t_of_x) {
    if (s.kind() != SpaceKind::MetricTree) {
        const auto dir = random_direction(s, x, rng);
        const GeodesicRay forward = s.ray(x, dir);
        const double len = rng.uniform(0.5, 2.0);
        const double t = rng.uniform(0.2, 0.8);
        // a sits behind x, b ahead; on manifold backends extension is exact
        const Point b = ray_point(s, forward, (1.0 - t) * len);
        const Point a = geodesic_extend(s, x, b, -t / (1.0 - t));
        if (t_of_x) *t_of_x = distance(s, a, x) / distance(s, a, b);
        return s.segment(a, b);
    }
    // trees: walk away from x toward two leaves whose first steps diverge
    const auto& tr = s.tree();
    for (int attempt = 0; attempt < 64; ++attempt) {
        Rng sub = rng.substream(0x7265657472, attempt);
        const auto d1 = random_direction(s, x, sub);
        const auto d2 = random_direction(s, x, sub);
        const GeodesicRay r1 = s.ray(x, d1);
        const GeodesicRay r2 = s.ray(x, d2);
        const double m1 = ray_reach(s, r1) * sub.uniform(0.3, 1.0);
        const double m2 = ray_reach(s, r2) * sub.uniform(0.3, 1.0);
        if (m1 <= 1e-9 || m2 <= 1e-9) continue;
        const Point a = ray_point(s, r1, m1);
        const Point b = ray_point(s, r2, m2);
        const double dab = tr.distance(a.locus(), b.locus());
        const double via_x = tr.distance(a.locus(), x.locus()) + tr.distance(x.locus(), b.locus());
        if (std::abs(via_x - dab) <= 1e-9 && dab > 1e-9) {
            if (t_of_x) *t_of_x = tr.distance(a.locus(), x.locus()) / dab;
            return s.segment(a, b);
        }
    }
    throw SolverError("random_geodesic_through: no geodesic through the point found", 0.0);
}

}  // namespace prox0
