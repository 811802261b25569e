#pragma once

#include <utility>
#include <vector>

#include "prox0/functionals.hpp"
#include "prox0/report.hpp"

namespace prox0 {

enum class ResolveStrategy { Auto, Analytic, InnerSplit, GridExhaustive };

const char* strategy_name(ResolveStrategy s);

struct ResolventOptions {
    ResolveStrategy strategy = ResolveStrategy::Auto;
    double inner_tolerance = 1e-10;
    long max_inner_iterations = 10000;
    double grid_resolution = 0.0;  // trees; 0 means edge length / 1e4 per edge
};

// y approximately minimizing F(y) = f(y) + d(y, x)^2 / (2 lambda), together
// with a certified bound `residual` on F(y) - inf F (0 for closed forms,
// a grid-cell bound for exhaustive search, a contraction-derived bound for
// the inner solver).
struct ResolventResult {
    Point point;
    double objective_value = 0.0;
    ResolveStrategy strategy_used = ResolveStrategy::Analytic;
    long inner_iterations = 0;
    double residual = 0.0;
};

// Thrown when the inner solver runs out of iterations; carries the best
// iterate found and the residual it could certify for it.
struct ResolventBudgetError : SolverError {
    ResolventResult best;
    ResolventBudgetError(const std::string& what, ResolventResult b)
        : SolverError(what, b.residual), best(std::move(b)) {}
};

// Moreau-Yosida resolvent J_lambda(x). lambda = 0 returns x unchanged.
//
// Closed forms, used under Auto/Analytic:
//   (w/2) d(.,a)^2   -> point of [x,a] at t = w*lambda / (1 + w*lambda)
//   w d(.,a)         -> move from x toward a by min(w*lambda, d(x,a))
//   indicator of C   -> P_C(x) for every lambda > 0
//   d_C              -> move from x toward P_C(x) by min(lambda, d_C(x))
ResolventResult resolve(const Space& s, const Functional& f, const Point& x, double lambda,
                        const ResolventOptions& opts = {});

// Splitting solver for sums whose every summand has a closed-form resolvent.
// Runs cyclic proximal passes over the summands (the quadratic coupling term
// counts as one summand) with per-pass steps eta_j = eta_0 / j, then refines:
// a fixed-point polish for pure squared-distance sums, or step-size
// continuation with Richardson extrapolation otherwise. The residual is the
// strong-convexity gap bound computed from the final pass movement.
ResolventResult inner_split_minimize(const Space& s, const Functional& f, const Point& x,
                                     double lambda, const ResolventOptions& opts = {});

// Whether resolve() can serve this functional without iterating.
bool has_closed_form(const Functional& f);
// Whether every summand admits a closed-form proximal step.
bool is_splittable(const Functional& f);

// d(J x, J y) <= d(x, y) + 1e-8 over the given pairs.
CertificateReport nonexpansiveness_check(const Space& s, const Functional& f,
                                         const std::vector<std::pair<Point, Point>>& pairs,
                                         double lambda, const ResolventOptions& opts = {});

}  // namespace prox0
