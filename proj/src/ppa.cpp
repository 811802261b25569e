#include "prox0/ppa.hpp"

#include <chrono>
#include <cmath>

#include "prox0/errors.hpp"

namespace prox0 {

StepSchedule StepSchedule::constant(double lambda) {
    StepSchedule s;
    s.kind = Kind::Constant;
    s.c = lambda;
    s.validate();
    return s;
}

StepSchedule StepSchedule::harmonic(double c) {
    StepSchedule s;
    s.kind = Kind::Harmonic;
    s.c = c;
    s.validate();
    return s;
}

StepSchedule StepSchedule::polynomial(double c, double p) {
    StepSchedule s;
    s.kind = Kind::Polynomial;
    s.c = c;
    s.p = p;
    s.validate();
    return s;
}

StepSchedule StepSchedule::explicit_list(std::vector<double> values) {
    StepSchedule s;
    s.kind = Kind::Explicit;
    s.values = std::move(values);
    s.divergence_validated = false;  // no divergence proof for a finite list
    s.validate();
    return s;
}

void StepSchedule::validate() const {
    switch (kind) {
        case Kind::Constant:
        case Kind::Harmonic:
            if (!(c > 0.0)) throw ValidationError("schedule: c must be positive");
            break;
        case Kind::Polynomial:
            if (!(c > 0.0)) throw ValidationError("schedule: c must be positive");
            if (!(p >= 0.0 && p <= 1.0))
                throw ValidationError("schedule: polynomial exponent must lie in [0,1]");
            break;
        case Kind::Explicit:
            if (values.empty()) throw ValidationError("schedule: empty explicit list");
            for (double v : values)
                if (!(v > 0.0)) throw ValidationError("schedule: nonpositive step size");
            break;
    }
}

double StepSchedule::lambda(long n) const {
    if (n < 1) throw DomainError("schedule: step index starts at 1");
    switch (kind) {
        case Kind::Constant: return c;
        case Kind::Harmonic: return c / static_cast<double>(n);
        case Kind::Polynomial: return c * std::pow(static_cast<double>(n), -p);
        case Kind::Explicit:
            if (n > static_cast<long>(values.size()))
                throw DomainError("schedule: explicit list exhausted");
            return values[static_cast<size_t>(n - 1)];
    }
    throw DomainError("schedule: unknown kind");
}

namespace {

void attach_certificates(const Space& s, const Functional& f, Trace& trace) {
    if (trace.minimizer) {
        trace.certificates["fejer"] = fejer_certificate(s, trace, *trace.minimizer);
        if (trace.infimum) {
            trace.certificates["rate"] =
                rate_certificate(s, trace, *trace.minimizer, *trace.infimum);
            trace.certificates["estimate"] =
                estimate_certificate(s, trace, *trace.minimizer, *trace.infimum);
        }
    } else {
        CertificateReport skipped;
        skipped.skipped = true;
        skipped.note = "no known_minimizer metadata";
        for (const char* name : {"fejer", "rate", "estimate"}) {
            skipped.name = name;
            trace.certificates[name] = skipped;
        }
    }
    const auto modulus = uniform_convexity_modulus(f);
    if (modulus) {
        trace.certificates["strong_convergence"] =
            strong_convergence_certificate(s, f, trace, *modulus);
    } else {
        CertificateReport rep;
        rep.name = "strong_convergence";
        rep.skipped = true;
        rep.note = "functional is not uniformly convex";
        trace.certificates["strong_convergence"] = rep;
    }
}

}  // namespace

Trace run_ppa(const Space& s, const Functional& f, const Point& x0, const StepSchedule& schedule,
              const StopRule& stop, const ResolventOptions& opts) {
    schedule.validate();
    if (stop.max_iterations < 1) throw ValidationError("stop rule: max_iterations must be >= 1");
    s.validate_point(x0);

    Trace trace;
    trace.minimizer = f.known_minimizer;
    trace.infimum = f.known_infimum;
    trace.iterates.push_back(x0);
    trace.values.push_back(evaluate(s, f, x0));

    Point x = x0;
    for (long n = 1; n <= stop.max_iterations; ++n) {
        const double lam = schedule.lambda(n);
        const auto t0 = std::chrono::steady_clock::now();
        ResolventResult step;
        try {
            step = resolve(s, f, x, lam, opts);
        } catch (const SolverError& e) {
            throw SolverError("ppa step " + std::to_string(n) + ": " + e.what(), e.residual);
        } catch (const InfeasibleError& e) {
            throw InfeasibleError("ppa step " + std::to_string(n) + ": " + e.what());
        }
        const auto t1 = std::chrono::steady_clock::now();

        const double moved = distance(s, step.point, x);
        x = step.point;
        trace.iterates.push_back(x);
        trace.lambdas.push_back(lam);
        trace.step_distances.push_back(moved);
        trace.wall_times.push_back(std::chrono::duration<double>(t1 - t0).count());
        const double fx = evaluate(s, f, x);
        trace.values.push_back(fx);
        if (n == 1 && !std::isfinite(trace.values[0]) && !std::isfinite(fx))
            throw InfeasibleError("ppa: first resolvent step did not reach the domain of f");

        if (stop.step_distance_below && moved < *stop.step_distance_below) {
            trace.stop_reason = "step_distance_below";
            break;
        }
        if (stop.value_gap_below && f.known_infimum &&
            fx - *f.known_infimum < *stop.value_gap_below) {
            trace.stop_reason = "value_gap_below";
            break;
        }
        if (n == stop.max_iterations) trace.stop_reason = "max_iterations";
    }

    attach_certificates(s, f, trace);
    return trace;
}

CertificateReport fejer_certificate(const Space& s, const Trace& trace, const Point& c) {
    CertificateReport rep;
    rep.name = "fejer";
    rep.tolerance = 1e-9;
    double prev = distance(s, trace.iterates.front(), c);
    for (size_t n = 1; n < trace.iterates.size(); ++n) {
        const double cur = distance(s, trace.iterates[n], c);
        rep.record(cur - prev, static_cast<long>(n));
        prev = cur;
    }
    return rep;
}

CertificateReport rate_certificate(const Space& s, const Trace& trace, const Point& c,
                                   double inf_f) {
    CertificateReport rep;
    rep.name = "rate";
    rep.tolerance = 1e-9;
    const double d0 = distance(s, trace.iterates.front(), c);
    double lambda_sum = 0.0;
    for (long n = 1; n <= trace.steps(); ++n) {
        lambda_sum += trace.lambdas[static_cast<size_t>(n - 1)];
        const double gap = trace.values[static_cast<size_t>(n)] - inf_f;
        rep.record(gap - d0 * d0 / lambda_sum, n);
    }
    return rep;
}

CertificateReport estimate_certificate(const Space& s, const Trace& trace, const Point& c,
                                       double inf_f) {
    CertificateReport rep;
    rep.name = "estimate";
    rep.tolerance = 1e-9;
    for (long k = 1; k <= trace.steps(); ++k) {
        const double dk_prev = distance(s, trace.iterates[static_cast<size_t>(k - 1)], c);
        const double dk = distance(s, trace.iterates[static_cast<size_t>(k)], c);
        const double lhs = trace.lambdas[static_cast<size_t>(k - 1)] *
                           (trace.values[static_cast<size_t>(k)] - inf_f);
        const double rhs = 0.5 * dk_prev * dk_prev - 0.5 * dk * dk;
        rep.record(lhs - rhs, k);
    }
    return rep;
}

double tail_diameter(const Space& s, const Trace& trace, long from) {
    const long n = static_cast<long>(trace.iterates.size());
    double diam = 0.0;
    for (long i = std::max<long>(from, 0); i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            diam = std::max(diam, distance(s, trace.iterates[static_cast<size_t>(i)],
                                           trace.iterates[static_cast<size_t>(j)]));
    return diam;
}

CertificateReport strong_convergence_certificate(const Space& s, const Functional& f,
                                                 const Trace& trace,
                                                 const std::function<double(double)>& modulus) {
    CertificateReport rep;
    rep.name = "strong_convergence";
    rep.tolerance = 1e-9;
    if (!uniform_convexity_modulus(f)) {
        rep.skipped = true;
        rep.note = "functional is not uniformly convex";
        return rep;
    }
    if (!trace.infimum) {
        rep.skipped = true;
        rep.note = "no known_infimum metadata";
        return rep;
    }
    const double inf_f = *trace.infimum;
    const long n = static_cast<long>(trace.iterates.size());

    // Cauchy witness on sampled pairs
    const long stride = std::max<long>(1, n * n / 4000);
    long pair_id = 0;
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j) {
            if ((pair_id++) % stride != 0) continue;
            const double d = distance(s, trace.iterates[static_cast<size_t>(i)],
                                      trace.iterates[static_cast<size_t>(j)]);
            const double lhs = 0.25 * modulus(d);
            const double rhs = 0.5 * (trace.values[static_cast<size_t>(i)] - inf_f) +
                               0.5 * (trace.values[static_cast<size_t>(j)] - inf_f);
            rep.record(lhs - rhs, pair_id);
        }

    // tail diameters must not grow as the tail start advances
    double prev_diam = tail_diameter(s, trace, 0);
    for (long from : {n / 4, n / 2, (3 * n) / 4}) {
        const double diam = tail_diameter(s, trace, from);
        rep.record(diam - prev_diam, -from);  // negative index marks the tail check
        prev_diam = diam;
    }
    return rep;
}

}  // namespace prox0
