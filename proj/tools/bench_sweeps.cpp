// Times the sampled verification kernels in serial and OpenMP modes and
// prints the speedup per backend. Both modes compute identical results; this
// binary only compares throughput.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "prox0/sweeps.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace prox0;

namespace {

double run_timed(const Space& s, long budget, ExecMode mode) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_all_sweeps(s, budget, 7, mode);
    const auto t1 = std::chrono::steady_clock::now();
    for (const auto& r : results)
        if (!r.pass) std::fprintf(stderr, "unexpected failure in %s\n", r.name.c_str());
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    long budget = 4000;
    if (argc > 1) budget = std::stol(argv[1]);

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel mode falls back to serial\n");
#endif
    std::printf("budget %ld samples per sweep\n\n", budget);
    std::printf("%-12s %12s %12s %9s\n", "backend", "serial [s]", "parallel [s]", "speedup");

    std::vector<Space> spaces{Space::euclidean(3), Space::hyperbolic(2), Space::spd(2)};
    spaces.push_back(Space::metric_tree(
        MetricTree({"r", "a", "b", "c", "d", "e"},
                   {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 0.5}, {3, 4, 2.0}, {3, 5, 2.0}})));

    for (const Space& s : spaces) {
        const double serial = run_timed(s, budget, ExecMode::Serial);
        const double parallel = run_timed(s, budget, ExecMode::Parallel);
        std::printf("%-12s %12.3f %12.3f %8.2fx\n", space_kind_name(s.kind()), serial, parallel,
                    serial / parallel);
    }
    return 0;
}
