#pragma once

#include <string>
#include <vector>

#include "prox0/functionals.hpp"
#include "prox0/sampling.hpp"

namespace prox0 {

// The sampled verification kernels come in two interchangeable drivers: a
// serial reference loop and an OpenMP-parallel loop. Per-sample generators
// are seeded by (seed, sample index), so both drivers produce bit-identical
// results; the parallel merge keeps the lowest index among equal residuals.
enum class ExecMode { Serial, Parallel };

struct SweepResult {
    std::string name;
    long samples = 0;
    double worst = 0.0;      // largest violation; <= tolerance means pass
    long worst_index = -1;
    double tolerance = 0.0;
    bool pass = true;
    std::string worst_detail;
};

SweepResult sweep_symmetry(const Space& s, long budget, std::uint64_t seed, ExecMode mode);
SweepResult sweep_triangle(const Space& s, long budget, std::uint64_t seed, ExecMode mode);
SweepResult sweep_geodesic_parameterization(const Space& s, long budget, std::uint64_t seed,
                                            ExecMode mode);
SweepResult sweep_cat0(const Space& s, long budget, std::uint64_t seed, ExecMode mode);
SweepResult sweep_projection_nonexpansive(const Space& s, long budget, std::uint64_t seed,
                                          ExecMode mode);
SweepResult sweep_projection_idempotent(const Space& s, long budget, std::uint64_t seed,
                                        ExecMode mode);
SweepResult sweep_projection_obtuse(const Space& s, long budget, std::uint64_t seed,
                                    ExecMode mode);
SweepResult sweep_projection_segment(const Space& s, long budget, std::uint64_t seed,
                                     ExecMode mode);
SweepResult sweep_convexity(const Space& s, long budget, std::uint64_t seed, ExecMode mode);
SweepResult sweep_lipschitz(const Space& s, long budget, std::uint64_t seed, ExecMode mode);
SweepResult sweep_uniform_convexity(const Space& s, long budget, std::uint64_t seed,
                                    ExecMode mode);

// Every sweep above, in a fixed order.
std::vector<SweepResult> run_all_sweeps(const Space& s, long budget, std::uint64_t seed,
                                        ExecMode mode);

// Random convex set of the space (singleton / segment / ball, subtrees on
// trees). Shared by the projection sweeps and tests.
ConvexSet random_convex_set(const Space& s, Rng& rng);
// Random point of the set (exact member, not a projection approximation).
Point random_point_in_set(const Space& s, const ConvexSet& set, Rng& rng);
// Random isometry; trees fall back to the identity permutation unless a
// swappable pair of equal sibling leaf edges exists.
Isometry random_isometry(const Space& s, Rng& rng);

}  // namespace prox0
