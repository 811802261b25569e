#include "prox0/flow.hpp"

#include <cmath>

#include "prox0/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prox0 {

namespace {

Point resolvent_power(const Space& s, const Functional& f, Point y, double lambda, long n,
                      const ResolventOptions& opts) {
    const double step = lambda / static_cast<double>(n);
    for (long i = 0; i < n; ++i) y = resolve(s, f, y, step, opts).point;
    return y;
}

}  // namespace

FlowResult flow_apply(const Space& s, const Functional& f, const Point& x, double lambda,
                      const FlowOptions& opts) {
    if (!(lambda >= 0.0)) throw DomainError("flow_apply: lambda must be nonnegative");
    if (opts.max_doublings < 1 || opts.initial_n < 1)
        throw ValidationError("flow options: max_doublings and initial_n must be >= 1");
    if (!(opts.doubling_tolerance > 0.0))
        throw ValidationError("flow options: tolerance must be positive");
    s.validate_point(x);
    if (!std::isfinite(evaluate(s, f, x)))
        throw DomainError("flow_apply: starting point outside the domain of f");

    FlowResult r;
    if (lambda == 0.0) {
        r.point = x;
        r.n_used = 0;
        r.converged = true;
        return r;
    }

    long n = opts.initial_n;
    Point prev = resolvent_power(s, f, x, lambda, n, opts.resolvent);
    for (int k = 0; k < opts.max_doublings; ++k) {
        n *= 2;
        Point cur = resolvent_power(s, f, x, lambda, n, opts.resolvent);
        const double gap = distance(s, prev, cur);
        r.point = cur;
        r.n_used = n;
        r.last_gap = gap;
        if (gap <= opts.doubling_tolerance) {
            r.converged = true;
            return r;
        }
        prev = std::move(cur);
    }
    r.converged = false;
    return r;
}

CertificateReport semigroup_certificate(const Space& sp, const Functional& f, const Point& x,
                                        double s, double t, const FlowOptions& opts) {
    if (!(s >= 0.0 && t >= 0.0))
        throw DomainError("semigroup_certificate: times must be nonnegative");
    CertificateReport rep;
    rep.name = "semigroup";
    rep.tolerance = 3.0 * opts.doubling_tolerance;
    const FlowResult whole = flow_apply(sp, f, x, s + t, opts);
    const FlowResult inner = flow_apply(sp, f, x, t, opts);
    const FlowResult outer = flow_apply(sp, f, inner.point, s, opts);
    if (!whole.converged || !inner.converged || !outer.converged) {
        rep.skipped = true;
        rep.note = "flow evaluation did not converge; certificate inconclusive";
        return rep;
    }
    rep.record(distance(sp, whole.point, outer.point), 0);
    return rep;
}

CertificateReport flow_nonexpansive_certificate(const Space& s, const Functional& f,
                                                const Point& x, const Point& y, double lambda,
                                                const FlowOptions& opts) {
    CertificateReport rep;
    rep.name = "flow_nonexpansive";
    rep.tolerance = 3.0 * opts.doubling_tolerance;
    const FlowResult fx = flow_apply(s, f, x, lambda, opts);
    const FlowResult fy = flow_apply(s, f, y, lambda, opts);
    if (!fx.converged || !fy.converged) {
        rep.skipped = true;
        rep.note = "flow evaluation did not converge; certificate inconclusive";
        return rep;
    }
    rep.record(distance(s, fx.point, fy.point) - distance(s, x, y), 0);
    return rep;
}

Trace flow_convergence_run(const Space& s, const Functional& f, const Point& x,
                           const std::vector<double>& lambda_grid, const FlowOptions& opts) {
    if (lambda_grid.empty()) throw ValidationError("flow grid: empty");
    for (size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > 0.0)) throw ValidationError("flow grid: entries must be positive");
        if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
            throw ValidationError("flow grid: entries must be strictly increasing");
    }
    s.validate_point(x);

    const int m = static_cast<int>(lambda_grid.size());
    std::vector<FlowResult> results(m);
    std::exception_ptr first_error = nullptr;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (int i = 0; i < m; ++i) {
        try {
            results[i] = flow_apply(s, f, x, lambda_grid[i], opts);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    Trace trace;
    trace.is_flow = true;
    trace.minimizer = f.known_minimizer;
    trace.infimum = f.known_infimum;
    trace.iterates.push_back(x);
    trace.values.push_back(evaluate(s, f, x));
    for (int i = 0; i < m; ++i) {
        trace.iterates.push_back(results[i].point);
        trace.lambdas.push_back(lambda_grid[i]);
        trace.values.push_back(evaluate(s, f, results[i].point));
        trace.step_distances.push_back(
            distance(s, trace.iterates[static_cast<size_t>(i)], results[i].point));
        trace.wall_times.push_back(0.0);
    }

    const double tol = 3.0 * opts.doubling_tolerance;
    CertificateReport mono;
    mono.name = "flow_value_monotone";
    mono.tolerance = tol;
    for (size_t i = 1; i < trace.values.size(); ++i)
        mono.record(trace.values[i] - trace.values[i - 1], static_cast<long>(i));
    trace.certificates["flow_value_monotone"] = mono;

    if (trace.minimizer) {
        CertificateReport fejer;
        fejer.name = "flow_fejer";
        fejer.tolerance = tol;
        double prev = distance(s, x, *trace.minimizer);
        for (size_t i = 1; i < trace.iterates.size(); ++i) {
            const double cur = distance(s, trace.iterates[i], *trace.minimizer);
            fejer.record(cur - prev, static_cast<long>(i));
            prev = cur;
        }
        trace.certificates["flow_fejer"] = fejer;
    } else {
        CertificateReport skipped;
        skipped.name = "flow_fejer";
        skipped.skipped = true;
        skipped.note = "no known_minimizer metadata";
        trace.certificates["flow_fejer"] = skipped;
    }
    return trace;
}

}  // namespace prox0
