#pragma once

#include "prox0/ppa.hpp"

namespace prox0 {

struct FlowOptions {
    double doubling_tolerance = 1e-8;
    int max_doublings = 24;
    long initial_n = 1;
    ResolventOptions resolvent;
};

struct FlowResult {
    Point point;
    long n_used = 0;
    double last_gap = 0.0;  // distance between the last two doubling approximants
    bool converged = false;
};

// Gradient-flow map T_lambda x, computed as n-fold resolvent powers
// (J_{lambda/n})^n x with n doubling until consecutive approximants are
// within tolerance. Non-convergence within max_doublings returns the best
// approximant with converged = false, never a silent answer.
FlowResult flow_apply(const Space& s, const Functional& f, const Point& x, double lambda,
                      const FlowOptions& opts = {});

// d(T_{s+t} x, T_s T_t x) <= 3 * doubling_tolerance.
CertificateReport semigroup_certificate(const Space& sp, const Functional& f, const Point& x,
                                        double s, double t, const FlowOptions& opts = {});

// d(T_lambda x, T_lambda y) <= d(x, y) + 3 * doubling_tolerance.
CertificateReport flow_nonexpansive_certificate(const Space& s, const Functional& f,
                                                const Point& x, const Point& y, double lambda,
                                                const FlowOptions& opts = {});

// Evaluates the flow on a strictly increasing positive grid. Grid entries
// are independent and run in parallel when OpenMP is available; results are
// ordered by grid index either way. The returned trace records value
// monotonicity along the grid and, when a minimizer is known, the distance
// certificate.
Trace flow_convergence_run(const Space& s, const Functional& f, const Point& x,
                           const std::vector<double>& lambda_grid, const FlowOptions& opts = {});

}  // namespace prox0
