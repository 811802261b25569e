#include "prox0/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "prox0/errors.hpp"
#include "prox0/sampling.hpp"

namespace prox0 {

namespace {

double window_radius(const Space& s, const SequenceWindow& w, const Point& y) {
    double r = 0.0;
    for (const auto& p : w.points) r = std::max(r, distance(s, p, y));
    return r;
}

}  // namespace

Point asymptotic_center(const Space& s, const SequenceWindow& window, const CenterSearch& search) {
    if (window.points.empty()) throw ValidationError("asymptotic_center: empty window");
    if (search.budget < 1) throw ValidationError("asymptotic_center: budget must be >= 1");

    std::vector<Point> candidates = window.points;
    // midpoints of far pairs sharpen two-cluster windows
    const size_t m = window.points.size();
    for (size_t i = 0; i + 1 < m && candidates.size() < 4 * m; i += std::max<size_t>(1, m / 8))
        candidates.push_back(geodesic_point(s, window.points[i], window.points[m - 1 - i], 0.5));

    Rng rng(search.seed);
    double spread = 0.0;
    for (const auto& p : window.points) spread = std::max(spread, distance(s, window.points[0], p));
    for (int i = 0; i < search.budget; ++i) {
        Rng sub = rng.substream(0x63616e64, static_cast<std::uint64_t>(i));
        const Point base = window.points[sub.uniform_int(0, static_cast<int>(m) - 1)];
        Point cand = random_point(s, sub, std::max(0.5, spread));
        // pull the global sample toward the window so candidates stay relevant
        cand = geodesic_point(s, base, cand, sub.uniform(0.0, 0.5));
        if (search.within) cand = project(s, *search.within, cand);
        candidates.push_back(std::move(cand));
    }

    Point best = candidates.front();
    double best_r = window_radius(s, window, best);
    for (const auto& c : candidates) {
        const double r = window_radius(s, window, c);
        if (r < best_r) {
            best_r = r;
            best = c;
        }
    }

    // golden-section refinement along geodesics from the incumbent to the
    // strongest other candidates
    for (int round = 0; round < 3; ++round) {
        std::vector<std::pair<double, const Point*>> ranked;
        for (const auto& c : candidates) ranked.push_back({window_radius(s, window, c), &c});
        std::sort(ranked.begin(), ranked.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const size_t top = std::min<size_t>(8, ranked.size());
        for (size_t i = 0; i < top; ++i) {
            const Point& other = *ranked[i].second;
            if (distance(s, best, other) <= 1e-14) continue;
            const double t = detail::golden_min(
                [&](double u) {
                    return window_radius(s, window, geodesic_point(s, best, other, u));
                },
                0.0, 1.0, 1e-10);
            const Point refined = geodesic_point(s, best, other, t);
            const double r = window_radius(s, window, refined);
            if (r < best_r) {
                best_r = r;
                best = refined;
            }
        }
    }
    return best;
}

WeakConvergenceReport weak_convergence_check(const Space& s, const SequenceWindow& window,
                                             const Point& x, int geodesic_budget,
                                             double tolerance, std::uint64_t seed) {
    if (geodesic_budget < 1) throw ValidationError("weak_convergence_check: budget must be >= 1");
    if (window.points.empty()) throw ValidationError("weak_convergence_check: empty window");
    s.validate_point(x);

    WeakConvergenceReport rep;
    rep.candidate_limit = x;
    rep.tolerance = tolerance;
    rep.window_length = static_cast<long>(window.points.size());

    Rng rng(seed);
    for (int g = 0; g < geodesic_budget; ++g) {
        Rng sub = rng.substream(0x67656f, static_cast<std::uint64_t>(g));
        const GeodesicSegment gamma = random_geodesic_through(s, x, sub);
        const ConvexSet seg{ConvexSet::Segment{gamma.a, gamma.b}};
        double worst = 0.0;
        for (const auto& p : window.points)
            worst = std::max(worst, distance(s, x, project(s, seg, p)));
        rep.per_geodesic_gaps.push_back(worst);
    }
    rep.max_gap = *std::max_element(rep.per_geodesic_gaps.begin(), rep.per_geodesic_gaps.end());
    rep.pass = rep.max_gap <= tolerance;
    return rep;
}

CertificateReport fejer_analysis(const Space& s, const SequenceWindow& window,
                                 const ConvexSet& set) {
    CertificateReport rep;
    rep.name = "fejer_analysis";
    rep.tolerance = 1e-9;
    if (window.points.empty()) throw ValidationError("fejer_analysis: empty window");

    // d_C along the window must not increase
    std::vector<double> dist_to_set;
    dist_to_set.reserve(window.points.size());
    for (const auto& p : window.points)
        dist_to_set.push_back(distance(s, project(s, set, p), p));
    for (size_t n = 1; n < dist_to_set.size(); ++n)
        rep.record(dist_to_set[n] - dist_to_set[n - 1], static_cast<long>(n));

    // boundedness via one fixed point of the set: every distance stays
    // within the first one
    const Point c = project(s, set, window.points.front());
    const double bound = distance(s, window.points.front(), c);
    for (size_t n = 1; n < window.points.size(); ++n)
        rep.record(distance(s, window.points[n], c) - bound, static_cast<long>(n));
    return rep;
}

WeakLscReport weak_lsc_probe(const Space& s, const Functional& f, const SequenceWindow& window,
                             const Point& x) {
    if (window.points.empty()) throw ValidationError("weak_lsc_probe: empty window");
    WeakLscReport rep;
    rep.f_at_x = evaluate(s, f, x);
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& p : window.points) lo = std::min(lo, evaluate(s, f, p));
    rep.min_tail_value = lo;
    rep.residual = rep.f_at_x - lo;
    rep.pass = rep.residual <= rep.tolerance;
    return rep;
}

}  // namespace prox0
