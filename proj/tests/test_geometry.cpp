#include <doctest.h>

#include <cmath>

#include "prox0/errors.hpp"
#include "prox0/geometry.hpp"
#include "prox0/sampling.hpp"

using namespace prox0;

namespace {

Space tree_space() {
    return Space::metric_tree(
        MetricTree({"c", "l1", "l2", "l3"}, {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 1.0}}));
}

}  // namespace

TEST_CASE("euclidean distance") {
    const Space s = Space::euclidean(2);
    CHECK(distance(s, s.point({0.0, 0.0}), s.point({3.0, 4.0})) == doctest::Approx(5.0));
}

TEST_CASE("hyperboloid distance agrees with chained small steps") {
    const Space s = Space::hyperbolic(2);
    const Point p = s.point({1.0, 0.0, 0.0});
    const Point q = s.point({std::cosh(1.0), std::sinh(1.0), 0.0});
    CHECK(distance(s, p, q) == doctest::Approx(1.0).epsilon(1e-12));

    // chain M geodesic steps and add their lengths
    const int m = 1000;
    double total = 0.0;
    Point prev = p;
    for (int k = 1; k <= m; ++k) {
        const Point cur = geodesic_point(s, p, q, static_cast<double>(k) / m);
        total += distance(s, prev, cur);
        prev = cur;
    }
    CHECK(std::abs(total - distance(s, p, q)) <= 1e-8);
}

TEST_CASE("spd distance of identity and e^2 identity") {
    const Space s = Space::spd(2);
    const Point a = s.point(SymMatrix::identity(2));
    const Point b = s.point(SymMatrix::scaled_identity(2, std::exp(2.0)));
    CHECK(distance(s, a, b) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("geodesic points") {
    SUBCASE("euclidean midpoint") {
        const Space s = Space::euclidean(2);
        const Point m = geodesic_point(s, s.point({0.0, 0.0}), s.point({2.0, 0.0}), 0.5);
        CHECK(m.vec()[0] == doctest::Approx(1.0));
        CHECK(m.vec()[1] == doctest::Approx(0.0));
    }
    SUBCASE("spd midpoint of I and 4I is 2I") {
        const Space s = Space::spd(2);
        const Point m = geodesic_point(s, s.point(SymMatrix::identity(2)),
                                       s.point(SymMatrix::scaled_identity(2, 4.0)), 0.5);
        CHECK(m.mat().at(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(m.mat().at(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(m.mat().at(0, 1) == doctest::Approx(0.0).absolute(1e-12));
    }
    SUBCASE("tree path through a branch vertex") {
        const Space s = tree_space();
        const Point l1 = s.tree_vertex("l1");
        const Point l2 = s.tree_vertex("l2");
        const Point g = geodesic_point(s, l1, l2, 2.0 / 3.0);
        CHECK(distance(s, l1, g) == doctest::Approx(2.0));
        CHECK(distance(s, g, l2) == doctest::Approx(1.0));
    }
    SUBCASE("parameter out of range") {
        const Space s = Space::euclidean(1);
        CHECK_THROWS_AS((void)geodesic_point(s, s.point({0.0}), s.point({1.0}), 1.5), DomainError);
        CHECK_THROWS_AS((void)geodesic_point(s, s.point({0.0}), s.point({1.0}), -0.1),
                        DomainError);
    }
}

TEST_CASE("geodesics are parameterized proportionally to arc length") {
    for (const Space& s :
         {Space::euclidean(3), Space::hyperbolic(2), Space::spd(2), tree_space()}) {
        Rng rng(23);
        for (int trial = 0; trial < 40; ++trial) {
            const Point a = random_point(s, rng);
            const Point b = random_point(s, rng);
            const double s1 = rng.next_u01();
            const double s2 = rng.next_u01();
            const double expected = std::abs(s1 - s2) * distance(s, a, b);
            const double got =
                distance(s, geodesic_point(s, a, b, s1), geodesic_point(s, a, b, s2));
            CHECK(std::abs(got - expected) <= 1e-8);
        }
    }
}

TEST_CASE("cat0 residual") {
    SUBCASE("euclidean equality case") {
        const Space s = Space::euclidean(2);
        Rng rng(31);
        for (int trial = 0; trial < 100; ++trial) {
            const double r = cat0_residual(s, random_point(s, rng), random_point(s, rng),
                                           random_point(s, rng), rng.next_u01());
            CHECK(std::abs(r) <= 1e-12);
        }
    }
    SUBCASE("hyperbolic strict thinness") {
        const Space s = Space::hyperbolic(2);
        const Point x = s.point({std::cosh(1.0), 0.0, std::sinh(1.0)});
        const Point a = s.point({1.0, 0.0, 0.0});
        const Point b = s.point({std::cosh(2.0), std::sinh(2.0), 0.0});
        CHECK(cat0_residual(s, x, a, b, 0.5) > 0.01);
    }
    SUBCASE("endpoint parameter gives exact zero") {
        const Space s = Space::spd(2);
        Rng rng(37);
        const double r = cat0_residual(s, random_point(s, rng), random_point(s, rng),
                                       random_point(s, rng), 0.0);
        CHECK(r == 0.0);
    }
}

TEST_CASE("comparison angle") {
    const Space s = Space::euclidean(2);
    const Point x = s.point({0.0, 0.0});
    const Point y = s.point({1.0, 0.0});
    const Point z = s.point({0.0, 1.0});
    CHECK(comparison_angle(s, y, x, z) == doctest::Approx(M_PI / 2));
    CHECK(comparison_angle(s, y, x, y) == doctest::Approx(0.0));  // degenerate y = z
    CHECK(comparison_angle(s, y, x, s.point({-1.0, 0.0})) == doctest::Approx(M_PI));
    CHECK_THROWS_AS((void)comparison_angle(s, x, x, z), DomainError);
}

TEST_CASE("ray points") {
    SUBCASE("euclidean") {
        const Space s = Space::euclidean(2);
        const GeodesicRay ray = s.ray(s.point({0.0, 0.0}), std::vector<double>{2.0, 0.0});
        const Point p = ray_point(s, ray, 3.0);  // direction gets normalized
        CHECK(p.vec()[0] == doctest::Approx(3.0));
        CHECK(ray_point(s, ray, 0.0) == ray.origin);
        CHECK_THROWS_AS((void)ray_point(s, ray, -1.0), DomainError);
    }
    SUBCASE("hyperboloid formula and unit speed") {
        const Space s = Space::hyperbolic(2);
        const Point origin = s.point({1.0, 0.0, 0.0});
        const GeodesicRay ray = s.ray(origin, std::vector<double>{0.0, 1.0, 0.0});
        const Point p = ray_point(s, ray, 1.0);
        CHECK(p.vec()[0] == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
        CHECK(p.vec()[1] == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
        CHECK(p.vec()[2] == doctest::Approx(0.0).absolute(1e-12));
        for (double t1 : {0.3, 1.7})
            for (double t2 : {0.9, 2.4})
                CHECK(distance(s, ray_point(s, ray, t1), ray_point(s, ray, t2)) ==
                      doctest::Approx(std::abs(t1 - t2)).epsilon(1e-10));
    }
    SUBCASE("tree rays stop at the declared end") {
        const Space s = tree_space();
        const GeodesicRay ray = s.ray(s.tree_vertex("l1"), s.tree().vertex_index("l2"));
        CHECK(ray_reach(s, ray) == doctest::Approx(3.0));
        const Point p = ray_point(s, ray, 2.0);
        CHECK(distance(s, p, s.tree_vertex("l2")) == doctest::Approx(1.0));
        CHECK_THROWS_AS((void)ray_point(s, ray, 3.5), DomainError);
        CHECK_THROWS_AS((void)s.ray(s.tree_vertex("l1"), s.tree().vertex_index("c")),
                        ValidationError);  // not a leaf
    }
}

TEST_CASE("point validation") {
    const Space e = Space::euclidean(2);
    CHECK_THROWS_AS((void)e.point({1.0}), ValidationError);

    const Space h = Space::hyperbolic(2);
    CHECK_THROWS_AS((void)h.point({1.0, 1.0, 0.0}), ValidationError);   // off the sheet
    CHECK_THROWS_AS((void)h.point({-1.0, 0.0, 0.0}), ValidationError);  // lower sheet

    const Space m = Space::spd(2);
    SymMatrix asym(2);
    asym.at(0, 0) = 1.0;
    asym.at(0, 1) = 0.3;
    asym.at(1, 0) = 0.1;
    asym.at(1, 1) = 1.0;
    CHECK_THROWS_AS((void)m.point(asym), ValidationError);
    SymMatrix neg(2);
    neg.at(0, 0) = 1.0;
    neg.at(1, 1) = -1.0;
    CHECK_THROWS_AS((void)m.point(neg), ValidationError);

    const Space t = tree_space();
    CHECK_THROWS_AS((void)t.point(TreeLocus{9, 0.0}), ValidationError);

    // mixing spaces is a domain error
    const Space e2 = Space::euclidean(2);
    CHECK_THROWS_AS((void)distance(e, e.point({0.0, 0.0}), e2.point({0.0, 0.0})), DomainError);
}

TEST_CASE("exp and log maps invert on manifold backends") {
    for (const Space& s : {Space::euclidean(3), Space::hyperbolic(2), Space::spd(2)}) {
        Rng rng(41);
        for (int trial = 0; trial < 25; ++trial) {
            const Point p = random_point(s, rng);
            const Point q = random_point(s, rng);
            const Tangent v = log_map(s, p, q);
            CHECK(tangent_norm(s, p, v) == doctest::Approx(distance(s, p, q)).absolute(1e-9));
            CHECK(distance(s, exp_map(s, p, v), q) <= 1e-8);
        }
    }
}

TEST_CASE("metric axioms on random triples") {
    for (const Space& s :
         {Space::euclidean(3), Space::hyperbolic(2), Space::spd(2), tree_space()}) {
        Rng rng(43);
        for (int trial = 0; trial < 60; ++trial) {
            const Point p = random_point(s, rng);
            const Point q = random_point(s, rng);
            const Point r = random_point(s, rng);
            const double dpq = distance(s, p, q);
            CHECK(dpq >= 0.0);
            CHECK(std::abs(dpq - distance(s, q, p)) <= 1e-10);
            CHECK(distance(s, p, r) <= dpq + distance(s, q, r) + 1e-9);
            CHECK(distance(s, p, p) == 0.0);
        }
    }
}
