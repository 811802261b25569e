#include <doctest.h>

#include "prox0/errors.hpp"
#include "prox0/metric_tree.hpp"

using namespace prox0;

namespace {

// center c with three arms: l1-c length 1, c-l2 length 2, c-l3 length 1
MetricTree degree3_tree() {
    return MetricTree({"c", "l1", "l2", "l3"}, {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 1.0}});
}

}  // namespace

TEST_CASE("construction validates the tree") {
    CHECK_THROWS_AS(MetricTree({"a", "b"}, {{0, 1, -1.0}}), ValidationError);
    CHECK_THROWS_AS(MetricTree({"a", "b", "c"}, {{0, 1, 1.0}}), ValidationError);   // edge count
    CHECK_THROWS_AS(MetricTree({"a", "b", "c", "d"},
                               {{0, 1, 1.0}, {0, 1, 1.0}, {2, 3, 1.0}}),
                    ValidationError);  // disconnected (and a parallel edge)
    CHECK_THROWS_AS(MetricTree({"a", "a"}, {{0, 1, 1.0}}), ValidationError);  // duplicate name
}

TEST_CASE("vertex distances along the unique path") {
    const MetricTree t = degree3_tree();
    CHECK(t.vertex_distance(1, 2) == doctest::Approx(3.0));
    CHECK(t.vertex_distance(1, 3) == doctest::Approx(2.0));
    CHECK(t.vertex_distance(0, 2) == doctest::Approx(2.0));
}

TEST_CASE("locus distances, same and different edges") {
    const MetricTree t = degree3_tree();
    const TreeLocus a{0, 0.25};  // on c-l1, 0.25 from c
    const TreeLocus b{0, 0.75};
    CHECK(t.distance(a, b) == doctest::Approx(0.5));
    const TreeLocus c{1, 0.5};  // on c-l2, 0.5 from c
    CHECK(t.distance(a, c) == doctest::Approx(0.75));
}

TEST_CASE("interpolation unrolls the path through a degree-3 vertex") {
    // path l1 -> l2 has total length 3; t = 2/3 sits 2 units from l1,
    // i.e. 1 unit into the c-l2 edge
    const MetricTree t = degree3_tree();
    const TreeLocus l1{0, 1.0};
    const TreeLocus l2{1, 2.0};
    CHECK(t.distance(l1, l2) == doctest::Approx(3.0));
    const TreeLocus mid = t.interpolate(l1, l2, 2.0 / 3.0);
    CHECK(mid.edge == 1);
    CHECK(mid.offset == doctest::Approx(1.0));
    CHECK(t.distance(l1, mid) == doctest::Approx(2.0));
    CHECK(t.distance(mid, l2) == doctest::Approx(1.0));

    // explicit unrolling oracle at a grid of parameters
    for (double u : {0.0, 0.1, 0.3, 1.0 / 3.0, 0.5, 0.9, 1.0}) {
        const TreeLocus p = t.interpolate(l1, l2, u);
        CHECK(t.distance(l1, p) == doctest::Approx(3.0 * u).epsilon(1e-12));
    }
}

TEST_CASE("endpoints are returned exactly and vertices canonicalized") {
    const MetricTree t = degree3_tree();
    const TreeLocus l1{0, 1.0};
    const TreeLocus l2{1, 2.0};
    CHECK(t.interpolate(l1, l2, 0.0) == l1);
    CHECK(t.interpolate(l1, l2, 1.0) == l2);
    // the center vertex has three representations; canonical uses edge 0
    const TreeLocus center_via_edge1 = t.canonical({1, 0.0});
    CHECK(center_via_edge1.edge == 0);
    CHECK(center_via_edge1.offset == 0.0);
    CHECK(t.vertex_of(center_via_edge1) == 0);
}

TEST_CASE("locus validation") {
    const MetricTree t = degree3_tree();
    CHECK_THROWS_AS(t.validate_locus({5, 0.0}), ValidationError);
    CHECK_THROWS_AS(t.validate_locus({0, 1.5}), ValidationError);
    CHECK_THROWS_AS(t.validate_locus({0, -0.1}), ValidationError);
}
