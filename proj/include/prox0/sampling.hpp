#pragma once

#include <cstdint>

#include "prox0/geometry.hpp"

namespace prox0 {

// Deterministic splittable generator (splitmix64 core). Streams derived via
// substream() are independent of evaluation order, which keeps parallel
// sweeps bit-identical to serial ones.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double next_u01();                       // in [0, 1)
    double uniform(double lo, double hi);
    double normal();                         // Box-Muller, one value per call
    int uniform_int(int lo, int hi);         // inclusive bounds

    // Independent generator for (label, index); pure function of the seed.
    Rng substream(std::uint64_t label, std::uint64_t index) const;

    std::uint64_t seed() const { return seed_of_construction_; }

  private:
    std::uint64_t state_;
    std::uint64_t seed_of_construction_ = 0;
};

// Random well-formed point of the space. Scale bounds the distance from the
// backend's base point (origin / identity / first edge midpoint).
Point random_point(const Space& s, Rng& rng, double scale = 2.0);

// Unit direction at base, usable with Space::ray. For trees this picks a
// random leaf not equal to the base location.
RayDirection random_direction(const Space& s, const Point& base, Rng& rng);

// Random geodesic [a, b] passing through x with x strictly inside; the
// parameter of x on [a, b] is returned through t_of_x.
GeodesicSegment random_geodesic_through(const Space& s, const Point& x, Rng& rng,
                                        double* t_of_x = nullptr);

}  // namespace prox0
