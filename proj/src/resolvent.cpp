#include "prox0/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prox0/errors.hpp"

namespace prox0 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double coupling_objective(const Space& s, const Functional& f, const Point& x, double lambda,
                          const Point& y) {
    const double fy = evaluate(s, f, y);
    if (lambda == 0.0) return fy;
    const double d = distance(s, y, x);
    return fy + d * d / (2.0 * lambda);
}

bool atom_has_closed_prox(const Functional& f) {
    return std::holds_alternative<Functional::SquaredDistance>(f.kind) ||
           std::holds_alternative<Functional::Distance>(f.kind) ||
           std::holds_alternative<Functional::Indicator>(f.kind) ||
           std::holds_alternative<Functional::DistanceToSet>(f.kind);
}

// One exact proximal step: argmin_z [ w * atom(z) + d(z, y)^2 / (2 eta) ].
Point closed_prox(const Space& s, const Functional& atom, double w, const Point& y, double eta) {
    if (const auto* sq = std::get_if<Functional::SquaredDistance>(&atom.kind)) {
        const double we = w * sq->weight * eta;
        const double t = std::isfinite(we) ? we / (1.0 + we) : 1.0;
        return geodesic_point(s, y, sq->anchor, t);
    }
    if (const auto* ds = std::get_if<Functional::Distance>(&atom.kind)) {
        const double reach = distance(s, y, ds->anchor);
        if (reach <= 0.0) return y;
        const double step = w * ds->weight * eta;
        if (step >= reach) return ds->anchor;
        return geodesic_point(s, y, ds->anchor, step / reach);
    }
    if (const auto* in = std::get_if<Functional::Indicator>(&atom.kind)) {
        return project(s, in->set, y);
    }
    if (const auto* dc = std::get_if<Functional::DistanceToSet>(&atom.kind)) {
        const Point p = project(s, dc->set, y);
        const double reach = distance(s, y, p);
        if (reach <= 0.0) return y;
        const double step = w * eta;
        if (step >= reach) return p;
        return geodesic_point(s, y, p, step / reach);
    }
    throw StrategyError("closed_prox: no closed form for this functional kind");
}

struct SplitTerm {
    double weight;            // outer weight within the sum
    const Functional* atom;   // has a closed-form prox
};

// Flat view of f as a sum of closed-form atoms. Empty when f is identically
// zero (empty weighted sum).
std::vector<SplitTerm> split_terms(const Functional& f) {
    std::vector<SplitTerm> terms;
    if (const auto* ws = std::get_if<Functional::WeightedSum>(&f.kind)) {
        for (const auto& t : ws->terms) {
            if (!atom_has_closed_prox(t.fn))
                throw StrategyError("inner split: a summand has no closed-form resolvent");
            terms.push_back({t.weight, &t.fn});
        }
        return terms;
    }
    if (!atom_has_closed_prox(f))
        throw StrategyError("inner split: functional is not decomposable");
    terms.push_back({1.0, &f});
    return terms;
}

double strong_convexity_lower_bound(const std::vector<SplitTerm>& terms, double lambda) {
    double sigma = 1.0 / lambda;
    for (const auto& t : terms)
        if (const auto* sq = std::get_if<Functional::SquaredDistance>(&t.atom->kind))
            sigma += t.weight * sq->weight;
    return sigma;
}

bool all_squared(const std::vector<SplitTerm>& terms) {
    for (const auto& t : terms)
        if (!std::holds_alternative<Functional::SquaredDistance>(t.atom->kind)) return false;
    return true;
}

}  // namespace

const char* strategy_name(ResolveStrategy s) {
    switch (s) {
        case ResolveStrategy::Auto: return "auto";
        case ResolveStrategy::Analytic: return "analytic";
        case ResolveStrategy::InnerSplit: return "inner_split";
        case ResolveStrategy::GridExhaustive: return "grid_exhaustive";
    }
    return "?";
}

bool has_closed_form(const Functional& f) {
    if (atom_has_closed_prox(f)) return true;
    if (const auto* ws = std::get_if<Functional::WeightedSum>(&f.kind)) {
        if (ws->terms.empty()) return true;
        if (ws->terms.size() == 1) return atom_has_closed_prox(ws->terms.front().fn);
    }
    return false;
}

bool is_splittable(const Functional& f) {
    if (atom_has_closed_prox(f)) return true;
    if (const auto* ws = std::get_if<Functional::WeightedSum>(&f.kind)) {
        for (const auto& t : ws->terms)
            if (!atom_has_closed_prox(t.fn)) return false;
        return true;
    }
    return false;
}

namespace {

ResolventResult resolve_analytic(const Space& s, const Functional& f, const Point& x,
                                 double lambda) {
    ResolventResult r;
    r.strategy_used = ResolveStrategy::Analytic;
    if (const auto* ws = std::get_if<Functional::WeightedSum>(&f.kind)) {
        if (ws->terms.empty()) {
            r.point = x;  // f == 0: the quadratic term alone is minimized at x
        } else {
            r.point = closed_prox(s, ws->terms.front().fn, ws->terms.front().weight, x, lambda);
        }
    } else {
        r.point = closed_prox(s, f, 1.0, x, lambda);
    }
    r.objective_value = coupling_objective(s, f, x, lambda, r.point);
    if (!std::isfinite(r.objective_value))
        throw InfeasibleError("resolve: objective is infinite at the analytic resolvent point");
    return r;
}

ResolventResult resolve_grid(const Space& s, const Functional& f, const Point& x, double lambda,
                             const ResolventOptions& opts) {
    if (s.kind() != SpaceKind::MetricTree)
        throw StrategyError("grid-exhaustive resolvents exist only on metric trees");
    const auto& tr = s.tree();
    ResolventResult r;
    r.strategy_used = ResolveStrategy::GridExhaustive;
    double best = kInf;
    double cell = 0.0;
    Point best_point = x;
    long evals = 0;
    for (int e = 0; e < tr.edge_count(); ++e) {
        const double len = tr.edge(e).length;
        const double res = opts.grid_resolution > 0.0 ? opts.grid_resolution : len / 1e4;
        const long steps = std::max<long>(1, static_cast<long>(std::ceil(len / res)));
        cell = std::max(cell, len / static_cast<double>(steps));
        for (long k = 0; k <= steps; ++k) {
            const double off = std::min(len, (len * static_cast<double>(k)) / steps);
            const Point y = s.point(TreeLocus{e, off});
            const double v = coupling_objective(s, f, x, lambda, y);
            ++evals;
            if (v < best) {
                best = v;
                best_point = y;
            }
        }
    }
    if (!std::isfinite(best))
        throw InfeasibleError("resolve: objective is infinite on the entire grid");
    r.point = best_point;
    r.objective_value = best;
    r.inner_iterations = evals;
    const double slope = lipschitz_estimate(s, f, best_point, cell) +
                         (distance(s, best_point, x) + cell) / lambda;
    r.residual = 0.5 * cell * slope;
    return r;
}

}  // namespace

ResolventResult inner_split_minimize(const Space& s, const Functional& f, const Point& x,
                                     double lambda, const ResolventOptions& opts) {
    if (!(lambda > 0.0)) throw DomainError("inner_split_minimize: lambda must be positive");
    const auto terms = split_terms(f);
    ResolventResult r;
    r.strategy_used = ResolveStrategy::InnerSplit;
    if (terms.empty()) {
        r.point = x;
        r.objective_value = coupling_objective(s, f, x, lambda, x);
        return r;
    }

    const double sigma = strong_convexity_lower_bound(terms, lambda);
    const double eta0 = 2.0 / sigma;
    long passes = 0;
    const long budget = std::max<long>(opts.max_inner_iterations, 1);

    auto one_pass = [&](const Point& y, double eta) {
        Point z = y;
        for (const auto& t : terms) z = closed_prox(s, *t.atom, t.weight, z, eta);
        // quadratic coupling term, a squared distance anchored at x
        const double we = eta / lambda;
        z = geodesic_point(s, z, x, we / (1.0 + we));
        return z;
    };

    // warm-up ladder with diminishing steps
    Point y = x;
    for (long j = 1; j <= 24 && passes < budget; ++j) {
        const Point next = one_pass(y, eta0 / static_cast<double>(j));
        ++passes;
        const double move = distance(s, next, y);
        y = next;
        if (move < opts.inner_tolerance && j >= 4) break;
    }

    const bool manifold = s.kind() != SpaceKind::MetricTree;

    if (all_squared(terms) && manifold) {
        // fixed-point polish: one tangent-average step is exact in flat
        // configurations and contracts linearly otherwise
        const double w_quad = 1.0 / lambda;
        double w_total = w_quad;
        for (const auto& t : terms)
            w_total += t.weight * std::get<Functional::SquaredDistance>(t.atom->kind).weight;
        double move = kInf;
        double fy = coupling_objective(s, f, x, lambda, y);
        const double stop = std::max(1e-15, 1e-2 * opts.inner_tolerance);
        while (passes < budget) {
            Tangent v = tangent_zero(s, y);
            for (const auto& t : terms) {
                const auto& sq = std::get<Functional::SquaredDistance>(t.atom->kind);
                tangent_axpy(v, t.weight * sq.weight / w_total, log_map(s, y, sq.anchor));
            }
            tangent_axpy(v, w_quad / w_total, log_map(s, y, x));
            move = tangent_norm(s, y, v);
            Point next = exp_map(s, y, v);
            double fn = coupling_objective(s, f, x, lambda, next);
            ++passes;
            // backtrack if curvature made the full step overshoot
            for (int half = 0; half < 20 && fn > fy + 1e-15; ++half) {
                tangent_axpy(v, -0.5, v);
                next = exp_map(s, y, v);
                fn = coupling_objective(s, f, x, lambda, next);
                move *= 0.5;
            }
            y = next;
            fy = fn;
            if (move <= stop) break;
        }
        r.point = y;
        r.objective_value = fy;
        r.inner_iterations = passes;
        // gradient norm w_total * move, strong convexity at least sigma
        r.residual = (w_total * move) * (w_total * move) / (2.0 * sigma);
        if (move > std::max(1e-12, opts.inner_tolerance) && passes >= budget)
            throw ResolventBudgetError("inner split: iteration budget exhausted", r);
        return r;
    }

    // step-size continuation: solve the fixed point of the constant-step
    // pass at eta, halve eta, and Richardson-extrapolate the level points
    // (the fixed-point bias is linear in eta)
    const double scale = std::max(1.0, distance(s, y, x));
    const double level_target = std::max(opts.inner_tolerance, 1e-12);
    double eta = eta0;
    Point level_prev = y;
    Point extrap_prev = y;
    bool have_level = false;
    bool have_extrap = false;
    double cert_move = kInf;
    Point best_point = y;
    double best_value = coupling_objective(s, f, x, lambda, y);

    auto consider = [&](const Point& cand) {
        const double v = coupling_objective(s, f, x, lambda, cand);
        if (v < best_value) {
            best_value = v;
            best_point = cand;
        }
    };

    for (int level = 0; level < 48 && passes < budget; ++level) {
        const double fp_tol = std::max(1e-16, 1e-4 * eta * scale);
        const long level_cap =
            std::min<long>(budget - passes, static_cast<long>(64.0 / (eta * sigma)) + 64);
        double move = kInf;
        for (long i = 0; i < level_cap; ++i) {
            const Point next = one_pass(y, eta);
            ++passes;
            move = distance(s, next, y);
            y = next;
            if (move <= fp_tol) break;
        }
        consider(y);
        if (have_level) {
            Point extrap = manifold ? geodesic_extend(s, level_prev, y, 2.0) : y;
            consider(extrap);
            const double level_gap = distance(s, level_prev, y);
            if (have_extrap) {
                const double egap = distance(s, extrap, extrap_prev);
                cert_move = egap + move;
                if (egap <= level_target) {
                    extrap_prev = extrap;
                    level_prev = y;
                    break;
                }
            }
            extrap_prev = extrap;
            have_extrap = true;
            (void)level_gap;
        }
        level_prev = y;
        have_level = true;
        eta *= 0.5;
    }

    r.point = best_point;
    r.objective_value = best_value;
    r.inner_iterations = passes;
    if (!std::isfinite(cert_move)) cert_move = scale;
    const double slope = lipschitz_estimate(s, f, best_point, 2.0 * cert_move) +
                         (distance(s, best_point, x) + cert_move) / lambda;
    r.residual = cert_move * slope;
    if (cert_move > std::max(1e-9, level_target) && passes >= budget)
        throw ResolventBudgetError("inner split: iteration budget exhausted", r);
    return r;
}

ResolventResult resolve(const Space& s, const Functional& f, const Point& x, double lambda,
                        const ResolventOptions& opts) {
    if (!(lambda >= 0.0)) throw DomainError("resolve: lambda must be nonnegative");
    s.validate_point(x);
    if (lambda == 0.0) {
        ResolventResult r;
        r.point = x;  // J_0 is the identity, bitwise
        r.strategy_used = ResolveStrategy::Analytic;
        r.objective_value = evaluate(s, f, x);
        return r;
    }
    switch (opts.strategy) {
        case ResolveStrategy::Analytic:
            if (!has_closed_form(f))
                throw StrategyError("resolve: no analytic resolvent for this functional");
            return resolve_analytic(s, f, x, lambda);
        case ResolveStrategy::InnerSplit:
            return inner_split_minimize(s, f, x, lambda, opts);
        case ResolveStrategy::GridExhaustive:
            return resolve_grid(s, f, x, lambda, opts);
        case ResolveStrategy::Auto:
            break;
    }
    if (has_closed_form(f)) return resolve_analytic(s, f, x, lambda);
    if (is_splittable(f)) return inner_split_minimize(s, f, x, lambda, opts);
    if (s.kind() == SpaceKind::MetricTree) return resolve_grid(s, f, x, lambda, opts);
    throw StrategyError("resolve: no strategy applies (not analytic, not splittable, not a tree)");
}

CertificateReport nonexpansiveness_check(const Space& s, const Functional& f,
                                         const std::vector<std::pair<Point, Point>>& pairs,
                                         double lambda, const ResolventOptions& opts) {
    CertificateReport rep;
    rep.name = "resolvent_nonexpansive";
    rep.tolerance = 1e-8;
    long idx = 0;
    for (const auto& [p, q] : pairs) {
        const Point jp = resolve(s, f, p, lambda, opts).point;
        const Point jq = resolve(s, f, q, lambda, opts).point;
        rep.record(distance(s, jp, jq) - distance(s, p, q), idx++);
    }
    return rep;
}

}  // namespace prox0
