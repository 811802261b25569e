#include <doctest.h>

#include <cmath>

#include "prox0/errors.hpp"
#include "prox0/functionals.hpp"
#include "prox0/sampling.hpp"
#include "prox0/sweeps.hpp"

using namespace prox0;

TEST_CASE("segment projection matches the 1-D quadratic oracle") {
    const Space s = Space::euclidean(2);
    const ConvexSet seg{ConvexSet::Segment{s.point({1.0, -1.0}), s.point({1.0, 1.0})}};
    const Point x = s.point({0.0, 0.0});
    const Point p = project(s, seg, x);
    CHECK(p.vec()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.vec()[1] == doctest::Approx(0.0).absolute(1e-12));

    // dense scan over the parameter
    const auto& sd = std::get<ConvexSet::Segment>(seg.desc);
    double best_t = 0.0, best = 1e300;
    for (int k = 0; k <= 20000; ++k) {
        const double t = k / 20000.0;
        const double d = distance(s, x, geodesic_point(s, sd.a, sd.b, t));
        if (d < best) {
            best = d;
            best_t = t;
        }
    }
    CHECK(distance(s, p, geodesic_point(s, sd.a, sd.b, best_t)) <= 1e-4);
}

TEST_CASE("points already in the set are fixed") {
    const Space s = Space::euclidean(2);
    const ConvexSet ball{ConvexSet::Ball{s.point({0.0, 0.0}), 1.0}};
    const Point inside = s.point({0.25, 0.25});
    CHECK(project(s, ball, inside) == inside);
}

TEST_CASE("ball projection is radial") {
    const Space s = Space::euclidean(2);
    const ConvexSet ball{ConvexSet::Ball{s.point({0.0, 0.0}), 1.0}};
    const Point p = project(s, ball, s.point({2.0, 0.0}));
    CHECK(p.vec()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.vec()[1] == doctest::Approx(0.0).absolute(1e-14));
}

TEST_CASE("sublevel projection via bisection agrees with the radial oracle") {
    // (1/2) d(x,0)^2 <= 0.5 is exactly the unit ball
    const Space s = Space::euclidean(2);
    auto f = std::make_shared<Functional>(squared_distance(s, s.point({0.0, 0.0})));
    const ConvexSet sub{ConvexSet::Sublevel{f, 0.5}};
    const Point p = project(s, sub, s.point({2.0, 0.0}));
    CHECK(p.vec()[0] == doctest::Approx(1.0).epsilon(1e-9));

    // feasibility of the result
    CHECK(evaluate(s, *f, p) <= 0.5 + 1e-10);
}

TEST_CASE("sublevel projection error paths") {
    const Space s = Space::euclidean(1);
    Functional f = squared_distance(s, s.point({0.0}));
    f.known_minimizer.reset();
    auto fp = std::make_shared<Functional>(f);
    const ConvexSet sub{ConvexSet::Sublevel{fp, 0.5}};
    CHECK_THROWS_AS((void)project(s, sub, s.point({3.0})), ValidationError);

    auto ok = std::make_shared<Functional>(squared_distance(s, s.point({0.0})));
    const ConvexSet empty{ConvexSet::Sublevel{ok, -1.0}};  // min value 0 > level
    CHECK_THROWS_AS((void)project(s, empty, s.point({3.0})), InfeasibleError);
}

TEST_CASE("subtree projection walks to the nearest entry point") {
    const Space s = Space::metric_tree(
        MetricTree({"c", "l1", "l2", "l3"}, {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 1.0}}));
    const int c = 0, l2 = 2, l3 = 3;
    const ConvexSet sub{ConvexSet::Subtree{{c, l2}}};  // the c-l2 arm
    const Point from_l1 = project(s, sub, s.tree_vertex("l1"));
    CHECK(distance(s, from_l1, s.tree_vertex("c")) <= 1e-12);

    const ConvexSet bad{ConvexSet::Subtree{{l2, l3}}};  // not connected without c
    CHECK_THROWS_AS((void)project(s, bad, s.tree_vertex("l1")), ValidationError);

    const Space e = Space::euclidean(2);
    CHECK_THROWS_AS((void)project(e, sub, e.point({0.0, 0.0})), DomainError);
}

TEST_CASE("negative ball radius is rejected") {
    const Space s = Space::euclidean(2);
    const ConvexSet bad{ConvexSet::Ball{s.point({0.0, 0.0}), -0.5}};
    CHECK_THROWS_AS((void)project(s, bad, s.point({2.0, 0.0})), ValidationError);
}

TEST_CASE("projection properties on random instances") {
    const Space spaces[] = {Space::euclidean(3), Space::hyperbolic(2), Space::spd(2),
                            Space::metric_tree(MetricTree(
                                {"c", "l1", "l2", "l3"}, {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 1.0}}))};
    for (const Space& s : spaces) {
        Rng rng(47);
        for (int trial = 0; trial < 30; ++trial) {
            Rng sub = rng.substream(1, trial);
            const ConvexSet set = random_convex_set(s, sub);
            const Point x = random_point(s, sub);
            const Point y = random_point(s, sub);
            const Point px = project(s, set, x);
            const Point py = project(s, set, y);

            // nonexpansive
            CHECK(distance(s, px, py) <= distance(s, x, y) + 1e-9);
            // idempotent
            CHECK(distance(s, project(s, set, px), px) <= 1e-8);
            // quadratic obtuse-angle consequence against a member of the set
            const Point w = random_point_in_set(s, set, sub);
            const double dxw = distance(s, x, w);
            const double dxp = distance(s, x, px);
            const double dpw = distance(s, px, w);
            CHECK(dxw * dxw >= dxp * dxp + dpw * dpw - 1e-8);
            // projection is constant along [x, P_C(x)]
            const Point between = geodesic_point(s, x, px, sub.next_u01());
            CHECK(distance(s, project(s, set, between), px) <= 1e-8);
        }
    }
}
