#pragma once

#include <string>
#include <vector>

#include "prox0/functionals.hpp"
#include "prox0/report.hpp"

namespace prox0 {

// Finite tail x_K..x_N of a trace, standing in for the infinite sequence.
struct SequenceWindow {
    std::vector<Point> points;
    std::string origin_trace_id;
};

struct WeakConvergenceReport {
    Point candidate_limit;
    std::vector<double> per_geodesic_gaps;  // tail max of d(x, P_gamma(x_n)) per probe
    double max_gap = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    long window_length = 0;
};

struct CenterSearch {
    int budget = 200;                    // sampled candidates
    std::optional<ConvexSet> within;     // restrict candidates to this set
    std::uint64_t seed = 0x63656e746572ULL;
};

// Minimizer of y -> max_n d(x_n, y) over the window (finite surrogate of the
// asymptotic center). Sampled candidates refined by golden-section over
// geodesics between the best ones; the result is never worse than any
// sampled candidate.
Point asymptotic_center(const Space& s, const SequenceWindow& window,
                        const CenterSearch& search = {});

// Projection characterization of weak convergence: for random geodesics
// through x, the tail maximum of d(x, P_gamma(x_n)) must fall below the
// tolerance.
WeakConvergenceReport weak_convergence_check(const Space& s, const SequenceWindow& window,
                                             const Point& x, int geodesic_budget,
                                             double tolerance = 1e-3,
                                             std::uint64_t seed = 0x7765616bULL);

// Distance to the set must not increase along the window, and distances to a
// point of the set stay bounded by the first one.
CertificateReport fejer_analysis(const Space& s, const SequenceWindow& window,
                                 const ConvexSet& set);

struct WeakLscReport {
    double min_tail_value = 0.0;
    double f_at_x = 0.0;
    double residual = 0.0;  // f(x) - min tail value
    bool pass = false;
    double tolerance = 1e-6;
};

// Finite surrogate of liminf f(x_n) >= f(x) along a weakly convergent tail.
WeakLscReport weak_lsc_probe(const Space& s, const Functional& f, const SequenceWindow& window,
                             const Point& x);

}  // namespace prox0
