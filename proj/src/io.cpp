#include "prox0/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "prox0/errors.hpp"

namespace prox0 {

namespace {

void check_keys(const json& j, const char* what, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ValidationError(std::string(what) + ": expected a JSON object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ValidationError(std::string(what) + ": unknown field '" + item.key() + "'");
    }
}

const json& require(const json& j, const char* what, const char* key) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ValidationError(std::string(what) + ": missing required field '" + key + "'");
    return *it;
}

std::vector<double> to_vector(const json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw ValidationError(std::string(what) + ": non-numeric entry");
        v.push_back(x.get<double>());
    }
    return v;
}

std::vector<double> to_matrix(const json& j, const char* what, int* order) {
    if (!j.is_array() || j.empty())
        throw ValidationError(std::string(what) + ": expected a nested array matrix");
    const int n = static_cast<int>(j.size());
    std::vector<double> m;
    m.reserve(static_cast<size_t>(n) * n);
    for (const auto& row : j) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ValidationError(std::string(what) + ": matrix rows must all have length n");
        for (const auto& x : row) m.push_back(x.get<double>());
    }
    *order = n;
    return m;
}

json matrix_to_json(const std::vector<double>& m, int n) {
    json rows = json::array();
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j2 = 0; j2 < n; ++j2) row.push_back(m[static_cast<size_t>(i) * n + j2]);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

json space_to_json(const Space& s) {
    json j;
    j["kind"] = space_kind_name(s.kind());
    if (s.kind() == SpaceKind::MetricTree) {
        const auto& tr = s.tree();
        json verts = json::array();
        for (int v = 0; v < tr.vertex_count(); ++v) verts.push_back(tr.vertex_name(v));
        json edges = json::array();
        for (int e = 0; e < tr.edge_count(); ++e) {
            const auto& ed = tr.edge(e);
            edges.push_back({{"u", tr.vertex_name(ed.u)},
                             {"v", tr.vertex_name(ed.v)},
                             {"length", ed.length}});
        }
        j["vertices"] = std::move(verts);
        j["edges"] = std::move(edges);
    } else {
        j["dimension"] = s.dimension();
    }
    return j;
}

Space space_from_json(const json& j) {
    const std::string kind = require(j, "space", "kind").get<std::string>();
    if (kind == "tree") {
        check_keys(j, "space", {"kind", "vertices", "edges"});
        std::vector<std::string> names;
        for (const auto& v : require(j, "space", "vertices")) names.push_back(v.get<std::string>());
        std::vector<TreeEdge> edges;
        for (const auto& e : require(j, "space", "edges")) {
            check_keys(e, "space.edges", {"u", "v", "length"});
            const std::string u = require(e, "edge", "u").get<std::string>();
            const std::string v = require(e, "edge", "v").get<std::string>();
            auto find = [&](const std::string& n) {
                for (size_t i = 0; i < names.size(); ++i)
                    if (names[i] == n) return static_cast<int>(i);
                throw ValidationError("space: edge endpoint '" + n + "' is not a vertex");
            };
            edges.push_back({find(u), find(v), require(e, "edge", "length").get<double>()});
        }
        return Space::metric_tree(MetricTree(std::move(names), std::move(edges)));
    }
    check_keys(j, "space", {"kind", "dimension"});
    const int dim = require(j, "space", "dimension").get<int>();
    if (kind == "euclidean") return Space::euclidean(dim);
    if (kind == "hyperbolic") return Space::hyperbolic(dim);
    if (kind == "spd") return Space::spd(dim);
    throw ValidationError("space: unknown kind '" + kind + "'");
}

json point_to_json(const Space& s, const Point& p) {
    switch (s.kind()) {
        case SpaceKind::Euclidean:
        case SpaceKind::Hyperbolic:
            return json(p.vec());
        case SpaceKind::Spd:
            return matrix_to_json(p.mat().a, p.mat().n);
        case SpaceKind::MetricTree:
            return json{{"edge", p.locus().edge}, {"offset", p.locus().offset}};
    }
    throw DomainError("point_to_json: unknown space kind");
}

Point point_from_json(const Space& s, const json& j) {
    switch (s.kind()) {
        case SpaceKind::Euclidean:
        case SpaceKind::Hyperbolic:
            return s.point(to_vector(j, "point"));
        case SpaceKind::Spd: {
            int n = 0;
            auto m = to_matrix(j, "point", &n);
            SymMatrix sm(n);
            sm.a = std::move(m);
            return s.point(std::move(sm));
        }
        case SpaceKind::MetricTree: {
            if (j.is_object() && j.contains("vertex")) {
                check_keys(j, "point", {"vertex"});
                return s.tree_vertex(j["vertex"].get<std::string>());
            }
            check_keys(j, "point", {"edge", "offset"});
            return s.point(TreeLocus{require(j, "point", "edge").get<int>(),
                                     require(j, "point", "offset").get<double>()});
        }
    }
    throw DomainError("point_from_json: unknown space kind");
}

json ray_to_json(const Space& s, const GeodesicRay& ray) {
    json j;
    j["origin"] = point_to_json(s, ray.origin);
    switch (s.kind()) {
        case SpaceKind::Euclidean:
        case SpaceKind::Hyperbolic:
            j["direction"] = std::get<std::vector<double>>(ray.direction);
            break;
        case SpaceKind::Spd: {
            const auto& m = std::get<SymMatrix>(ray.direction);
            j["direction"] = matrix_to_json(m.a, m.n);
            break;
        }
        case SpaceKind::MetricTree:
            j["direction"] = s.tree().vertex_name(std::get<int>(ray.direction));
            break;
    }
    return j;
}

GeodesicRay ray_from_json(const Space& s, const json& j) {
    check_keys(j, "ray", {"origin", "direction"});
    const Point origin = point_from_json(s, require(j, "ray", "origin"));
    const json& d = require(j, "ray", "direction");
    switch (s.kind()) {
        case SpaceKind::Euclidean:
        case SpaceKind::Hyperbolic:
            return s.ray(origin, to_vector(d, "ray.direction"));
        case SpaceKind::Spd: {
            int n = 0;
            auto m = to_matrix(d, "ray.direction", &n);
            SymMatrix sm(n);
            sm.a = std::move(m);
            return s.ray(origin, std::move(sm));
        }
        case SpaceKind::MetricTree: {
            const int leaf = s.tree().vertex_index(d.get<std::string>());
            if (leaf < 0) throw ValidationError("ray: unknown end vertex");
            return s.ray(origin, leaf);
        }
    }
    throw DomainError("ray_from_json: unknown space kind");
}

json isometry_to_json(const Space& s, const Isometry& iso) {
    json j;
    if (const auto* e = std::get_if<Isometry::EuclideanMap>(&iso.kind)) {
        j["kind"] = "euclidean";
        j["linear"] = matrix_to_json(e->linear, s.dimension());
        j["translation"] = e->translation;
    } else if (const auto* h = std::get_if<Isometry::HyperbolicMap>(&iso.kind)) {
        j["kind"] = "hyperbolic";
        j["linear"] = matrix_to_json(h->linear, s.dimension() + 1);
    } else if (const auto* g = std::get_if<Isometry::SpdCongruence>(&iso.kind)) {
        j["kind"] = "spd_congruence";
        j["g"] = matrix_to_json(g->g, s.dimension());
    } else if (const auto* t = std::get_if<Isometry::TreeAutomorphism>(&iso.kind)) {
        j["kind"] = "tree_automorphism";
        json map = json::object();
        for (size_t v = 0; v < t->perm.size(); ++v)
            map[s.tree().vertex_name(static_cast<int>(v))] = s.tree().vertex_name(t->perm[v]);
        j["map"] = std::move(map);
    }
    return j;
}

Isometry isometry_from_json(const Space& s, const json& j) {
    const std::string kind = require(j, "isometry", "kind").get<std::string>();
    if (kind == "euclidean") {
        check_keys(j, "isometry", {"kind", "linear", "translation"});
        int n = 0;
        auto lin = to_matrix(require(j, "isometry", "linear"), "isometry.linear", &n);
        return euclidean_isometry(s, std::move(lin),
                                  to_vector(require(j, "isometry", "translation"),
                                            "isometry.translation"));
    }
    if (kind == "hyperbolic") {
        check_keys(j, "isometry", {"kind", "linear"});
        int n = 0;
        auto lin = to_matrix(require(j, "isometry", "linear"), "isometry.linear", &n);
        return hyperbolic_isometry(s, std::move(lin));
    }
    if (kind == "spd_congruence") {
        check_keys(j, "isometry", {"kind", "g"});
        int n = 0;
        auto g = to_matrix(require(j, "isometry", "g"), "isometry.g", &n);
        return spd_congruence(s, std::move(g));
    }
    if (kind == "tree_automorphism") {
        check_keys(j, "isometry", {"kind", "map"});
        const auto& tr = s.tree();
        std::vector<int> perm(tr.vertex_count(), -1);
        for (const auto& item : require(j, "isometry", "map").items()) {
            const int from = tr.vertex_index(item.key());
            const int to = tr.vertex_index(item.value().get<std::string>());
            if (from < 0 || to < 0) throw ValidationError("isometry: unknown vertex in map");
            perm[from] = to;
        }
        for (int v : perm)
            if (v < 0) throw ValidationError("isometry: map must cover every vertex");
        return tree_automorphism(s, std::move(perm));
    }
    throw ValidationError("isometry: unknown kind '" + kind + "'");
}

json convex_set_to_json(const Space& s, const ConvexSet& set) {
    json j;
    if (const auto* one = std::get_if<ConvexSet::Singleton>(&set.desc)) {
        j["kind"] = "singleton";
        j["point"] = point_to_json(s, one->p);
    } else if (const auto* seg = std::get_if<ConvexSet::Segment>(&set.desc)) {
        j["kind"] = "segment";
        j["a"] = point_to_json(s, seg->a);
        j["b"] = point_to_json(s, seg->b);
    } else if (const auto* ball = std::get_if<ConvexSet::Ball>(&set.desc)) {
        j["kind"] = "ball";
        j["center"] = point_to_json(s, ball->center);
        j["radius"] = ball->radius;
    } else if (const auto* sub = std::get_if<ConvexSet::Sublevel>(&set.desc)) {
        j["kind"] = "sublevel";
        j["functional"] = functional_to_json(s, *sub->f);
        j["level"] = sub->level;
    } else if (const auto* st = std::get_if<ConvexSet::Subtree>(&set.desc)) {
        j["kind"] = "subtree";
        json verts = json::array();
        for (int v : st->vertices) verts.push_back(s.tree().vertex_name(v));
        j["vertices"] = std::move(verts);
    }
    return j;
}

ConvexSet convex_set_from_json(const Space& s, const json& j) {
    const std::string kind = require(j, "set", "kind").get<std::string>();
    if (kind == "singleton") {
        check_keys(j, "set", {"kind", "point"});
        return ConvexSet{ConvexSet::Singleton{point_from_json(s, require(j, "set", "point"))}};
    }
    if (kind == "segment") {
        check_keys(j, "set", {"kind", "a", "b"});
        return ConvexSet{ConvexSet::Segment{point_from_json(s, require(j, "set", "a")),
                                            point_from_json(s, require(j, "set", "b"))}};
    }
    if (kind == "ball") {
        check_keys(j, "set", {"kind", "center", "radius"});
        const double r = require(j, "set", "radius").get<double>();
        if (!(r >= 0.0)) throw ValidationError("set: ball radius must be nonnegative");
        return ConvexSet{ConvexSet::Ball{point_from_json(s, require(j, "set", "center")), r}};
    }
    if (kind == "sublevel") {
        check_keys(j, "set", {"kind", "functional", "level"});
        auto f = std::make_shared<Functional>(
            functional_from_json(s, require(j, "set", "functional")));
        return ConvexSet{
            ConvexSet::Sublevel{std::move(f), require(j, "set", "level").get<double>()}};
    }
    if (kind == "subtree") {
        check_keys(j, "set", {"kind", "vertices"});
        std::vector<int> verts;
        for (const auto& v : require(j, "set", "vertices")) {
            const int idx = s.tree().vertex_index(v.get<std::string>());
            if (idx < 0) throw ValidationError("set: unknown subtree vertex");
            verts.push_back(idx);
        }
        return ConvexSet{ConvexSet::Subtree{std::move(verts)}};
    }
    throw ValidationError("set: unknown kind '" + kind + "'");
}

json functional_to_json(const Space& s, const Functional& f) {
    json j;
    if (const auto* sq = std::get_if<Functional::SquaredDistance>(&f.kind)) {
        j["kind"] = "squared_distance";
        j["anchor"] = point_to_json(s, sq->anchor);
        j["weight"] = sq->weight;
    } else if (const auto* ds = std::get_if<Functional::Distance>(&f.kind)) {
        j["kind"] = "distance";
        j["anchor"] = point_to_json(s, ds->anchor);
        j["weight"] = ds->weight;
    } else if (const auto* dc = std::get_if<Functional::DistanceToSet>(&f.kind)) {
        j["kind"] = "distance_to_set";
        j["set"] = convex_set_to_json(s, dc->set);
    } else if (const auto* bu = std::get_if<Functional::Busemann>(&f.kind)) {
        j["kind"] = "busemann";
        j["ray"] = ray_to_json(s, bu->ray);
    } else if (const auto* dp = std::get_if<Functional::Displacement>(&f.kind)) {
        j["kind"] = "displacement";
        j["isometry"] = isometry_to_json(s, dp->map);
    } else if (const auto* in = std::get_if<Functional::Indicator>(&f.kind)) {
        j["kind"] = "indicator";
        j["set"] = convex_set_to_json(s, in->set);
    } else if (const auto* ws = std::get_if<Functional::WeightedSum>(&f.kind)) {
        j["kind"] = "weighted_sum";
        json terms = json::array();
        for (const auto& t : ws->terms)
            terms.push_back({{"weight", t.weight}, {"functional", functional_to_json(s, t.fn)}});
        j["terms"] = std::move(terms);
    }
    if (f.known_infimum) j["known_infimum"] = *f.known_infimum;
    if (f.known_minimizer) j["known_minimizer"] = point_to_json(s, *f.known_minimizer);
    return j;
}

Functional functional_from_json(const Space& s, const json& j) {
    const std::string kind = require(j, "functional", "kind").get<std::string>();
    Functional f;
    if (kind == "squared_distance") {
        check_keys(j, "functional",
                   {"kind", "anchor", "weight", "known_infimum", "known_minimizer"});
        f = squared_distance(s, point_from_json(s, require(j, "functional", "anchor")),
                             j.value("weight", 1.0));
    } else if (kind == "distance") {
        check_keys(j, "functional",
                   {"kind", "anchor", "weight", "known_infimum", "known_minimizer"});
        f = distance_to_point(s, point_from_json(s, require(j, "functional", "anchor")),
                              j.value("weight", 1.0));
    } else if (kind == "distance_to_set") {
        check_keys(j, "functional", {"kind", "set", "known_infimum", "known_minimizer"});
        f = distance_to_set(s, convex_set_from_json(s, require(j, "functional", "set")));
    } else if (kind == "busemann") {
        check_keys(j, "functional", {"kind", "ray", "known_infimum", "known_minimizer"});
        f = busemann(s, ray_from_json(s, require(j, "functional", "ray")));
    } else if (kind == "displacement") {
        check_keys(j, "functional", {"kind", "isometry", "known_infimum", "known_minimizer"});
        f = displacement(s, isometry_from_json(s, require(j, "functional", "isometry")));
    } else if (kind == "indicator") {
        check_keys(j, "functional", {"kind", "set", "known_infimum", "known_minimizer"});
        f = indicator(s, convex_set_from_json(s, require(j, "functional", "set")));
    } else if (kind == "weighted_sum") {
        check_keys(j, "functional", {"kind", "terms", "known_infimum", "known_minimizer"});
        std::vector<WeightedTerm> terms;
        for (const auto& t : require(j, "functional", "terms")) {
            check_keys(t, "functional.terms", {"weight", "functional"});
            terms.push_back({require(t, "term", "weight").get<double>(),
                             functional_from_json(s, require(t, "term", "functional"))});
        }
        f = weighted_sum(s, std::move(terms));
    } else {
        throw ValidationError("functional: unknown kind '" + kind + "'");
    }

    std::optional<double> inf = f.known_infimum;
    std::optional<Point> minimizer = f.known_minimizer;
    if (j.contains("known_infimum")) inf = j["known_infimum"].get<double>();
    if (j.contains("known_minimizer")) minimizer = point_from_json(s, j["known_minimizer"]);
    return with_metadata(s, std::move(f), inf, std::move(minimizer));
}

json schedule_to_json(const StepSchedule& sched) {
    json j;
    switch (sched.kind) {
        case StepSchedule::Kind::Constant:
            j["kind"] = "constant";
            j["lambda"] = sched.c;
            break;
        case StepSchedule::Kind::Harmonic:
            j["kind"] = "harmonic";
            j["c"] = sched.c;
            break;
        case StepSchedule::Kind::Polynomial:
            j["kind"] = "polynomial";
            j["c"] = sched.c;
            j["p"] = sched.p;
            break;
        case StepSchedule::Kind::Explicit:
            j["kind"] = "explicit";
            j["values"] = sched.values;
            break;
    }
    return j;
}

StepSchedule schedule_from_json(const json& j) {
    const std::string kind = require(j, "schedule", "kind").get<std::string>();
    if (kind == "constant") {
        check_keys(j, "schedule", {"kind", "lambda"});
        return StepSchedule::constant(require(j, "schedule", "lambda").get<double>());
    }
    if (kind == "harmonic") {
        check_keys(j, "schedule", {"kind", "c"});
        return StepSchedule::harmonic(require(j, "schedule", "c").get<double>());
    }
    if (kind == "polynomial") {
        check_keys(j, "schedule", {"kind", "c", "p"});
        return StepSchedule::polynomial(require(j, "schedule", "c").get<double>(),
                                        require(j, "schedule", "p").get<double>());
    }
    if (kind == "explicit") {
        check_keys(j, "schedule", {"kind", "values"});
        return StepSchedule::explicit_list(to_vector(require(j, "schedule", "values"), "schedule"));
    }
    throw ValidationError("schedule: unknown kind '" + kind + "'");
}

StopRule stop_rule_from_json(const json& j) {
    check_keys(j, "stop", {"max_iterations", "step_distance_below", "value_gap_below"});
    StopRule r;
    if (j.contains("max_iterations")) r.max_iterations = j["max_iterations"].get<long>();
    if (j.contains("step_distance_below"))
        r.step_distance_below = j["step_distance_below"].get<double>();
    if (j.contains("value_gap_below")) r.value_gap_below = j["value_gap_below"].get<double>();
    return r;
}

ResolventOptions resolvent_options_from_json(const json& j) {
    check_keys(j, "resolvent",
               {"strategy", "inner_tolerance", "max_inner_iterations", "grid_resolution"});
    ResolventOptions o;
    if (j.contains("strategy")) {
        const std::string s = j["strategy"].get<std::string>();
        if (s == "auto")
            o.strategy = ResolveStrategy::Auto;
        else if (s == "analytic")
            o.strategy = ResolveStrategy::Analytic;
        else if (s == "inner_split")
            o.strategy = ResolveStrategy::InnerSplit;
        else if (s == "grid_exhaustive")
            o.strategy = ResolveStrategy::GridExhaustive;
        else
            throw ValidationError("resolvent: unknown strategy '" + s + "'");
    }
    if (j.contains("inner_tolerance")) o.inner_tolerance = j["inner_tolerance"].get<double>();
    if (j.contains("max_inner_iterations"))
        o.max_inner_iterations = j["max_inner_iterations"].get<long>();
    if (j.contains("grid_resolution")) o.grid_resolution = j["grid_resolution"].get<double>();
    if (!(o.inner_tolerance > 0.0))
        throw ValidationError("resolvent: inner_tolerance must be positive");
    if (o.max_inner_iterations < 1)
        throw ValidationError("resolvent: max_inner_iterations must be >= 1");
    return o;
}

FlowOptions flow_options_from_json(const json& j) {
    check_keys(j, "flow", {"doubling_tolerance", "max_doublings", "initial_n"});
    FlowOptions o;
    if (j.contains("doubling_tolerance"))
        o.doubling_tolerance = j["doubling_tolerance"].get<double>();
    if (j.contains("max_doublings")) o.max_doublings = j["max_doublings"].get<int>();
    if (j.contains("initial_n")) o.initial_n = j["initial_n"].get<long>();
    return o;
}

ExperimentConfig config_from_json(const json& j) {
    check_keys(j, "config",
               {"space", "functional", "algorithm", "schedule", "lambda_grid", "start", "stop",
                "resolvent", "flow", "seed", "out"});
    ExperimentConfig cfg{.space = space_from_json(require(j, "config", "space"))};
    cfg.functional = functional_from_json(cfg.space, require(j, "config", "functional"));
    cfg.algorithm = require(j, "config", "algorithm").get<std::string>();
    if (cfg.algorithm != "ppa" && cfg.algorithm != "flow" && cfg.algorithm != "both")
        throw ValidationError("config: algorithm must be one of ppa|flow|both");
    cfg.start = point_from_json(cfg.space, require(j, "config", "start"));
    if (!j.contains("seed") || !j["seed"].is_number_unsigned())
        throw ValidationError("config: a nonnegative integer seed is mandatory");
    cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("schedule")) cfg.schedule = schedule_from_json(j["schedule"]);
    if (j.contains("lambda_grid")) cfg.lambda_grid = to_vector(j["lambda_grid"], "lambda_grid");
    if (j.contains("stop")) cfg.stop = stop_rule_from_json(j["stop"]);
    if (j.contains("resolvent")) cfg.resolvent = resolvent_options_from_json(j["resolvent"]);
    if (j.contains("flow")) cfg.flow = flow_options_from_json(j["flow"]);
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    cfg.flow.resolvent = cfg.resolvent;

    const bool needs_schedule = cfg.algorithm == "ppa" || cfg.algorithm == "both";
    const bool needs_grid = cfg.algorithm == "flow" || cfg.algorithm == "both";
    if (needs_schedule && !cfg.schedule)
        throw ValidationError("config: algorithm '" + cfg.algorithm + "' needs a schedule");
    if (needs_grid && cfg.lambda_grid.empty())
        throw ValidationError("config: algorithm '" + cfg.algorithm + "' needs a lambda_grid");
    return cfg;
}

std::string config_hash_hex(const json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string trace_csv_string(const Space& s, const Trace& trace) {
    std::ostringstream out;
    const bool flow = trace.is_flow;
    out << (flow ? "lambda" : "n")
        << (flow ? "" : ",lambda")
        << ",f_value,step_distance,dist_to_minimizer,fejer_residual,rate_bound\n";
    double lambda_sum = 0.0;
    double d0 = 0.0, prev_dist = 0.0;
    if (trace.minimizer) {
        d0 = distance(s, trace.iterates.front(), *trace.minimizer);
        prev_dist = d0;
    }
    for (long n = 1; n <= trace.steps(); ++n) {
        const double lam = trace.lambdas[static_cast<size_t>(n - 1)];
        lambda_sum += lam;
        if (flow)
            out << fmt(lam);
        else
            out << n << ',' << fmt(lam);
        out << ',' << fmt(trace.values[static_cast<size_t>(n)]) << ','
            << fmt(trace.step_distances[static_cast<size_t>(n - 1)]);
        if (trace.minimizer) {
            const double dist = distance(s, trace.iterates[static_cast<size_t>(n)],
                                         *trace.minimizer);
            out << ',' << fmt(dist) << ',' << fmt(dist - prev_dist);
            prev_dist = dist;
            out << ',' << (flow ? "" : fmt(d0 * d0 / lambda_sum));
        } else {
            out << ",,,";
        }
        out << '\n';
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open for writing: " + path);
    f << content;
    if (!f) throw ValidationError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json certificate_to_json(const CertificateReport& rep) {
    json j;
    j["pass"] = rep.pass;
    j["skipped"] = rep.skipped;
    j["worst"] = rep.worst;
    j["worst_index"] = rep.worst_index;
    j["checked"] = rep.checked;
    j["tolerance"] = rep.tolerance;
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

json certificates_to_json(const std::map<std::string, CertificateReport>& reps) {
    json j = json::object();
    for (const auto& [name, rep] : reps) j[name] = certificate_to_json(rep);
    return j;
}

json sweep_result_to_json(const SweepResult& r) {
    json j;
    j["name"] = r.name;
    j["samples"] = r.samples;
    j["worst"] = r.worst;
    j["worst_index"] = r.worst_index;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    if (!r.worst_detail.empty()) j["worst_detail"] = r.worst_detail;
    return j;
}

json manifest_json(const std::string& config_hash,
                   const std::map<std::string, CertificateReport>& certificates,
                   const std::vector<std::string>& outputs) {
    json j;
    j["artifact_version"] = kArtifactVersion;
    j["config_hash"] = config_hash;
    json verdicts = json::object();
    for (const auto& [name, rep] : certificates)
        verdicts[name] = rep.skipped ? "skipped" : (rep.pass ? "pass" : "fail");
    j["certificates"] = std::move(verdicts);
    j["outputs"] = outputs;
    return j;
}

}  // namespace prox0
