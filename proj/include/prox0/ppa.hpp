#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prox0/resolvent.hpp"

namespace prox0 {

// Step size sequence (lambda_n), n >= 1. The built-in families diverge in
// sum by construction; explicit lists are accepted but flagged, since the
// convergence theorem needs a divergent sum.
struct StepSchedule {
    enum class Kind { Constant, Harmonic, Polynomial, Explicit };

    Kind kind = Kind::Constant;
    double c = 1.0;
    double p = 0.0;               // polynomial exponent in [0, 1]
    std::vector<double> values;   // explicit entries
    bool divergence_validated = true;

    static StepSchedule constant(double lambda);
    static StepSchedule harmonic(double c);              // lambda_n = c / n
    static StepSchedule polynomial(double c, double p);  // lambda_n = c * n^-p
    static StepSchedule explicit_list(std::vector<double> values);

    double lambda(long n) const;  // 1-based; throws past the end of a list
    void validate() const;
};

struct StopRule {
    long max_iterations = 1000;
    std::optional<double> step_distance_below = 1e-10;
    std::optional<double> value_gap_below;  // needs known_infimum
};

// Full record of a run: iterates x_0..x_N, per-step data, certificates.
struct Trace {
    std::vector<Point> iterates;
    std::vector<double> lambdas;         // lambda_1..lambda_N (flow: the grid)
    std::vector<double> values;          // f(x_0)..f(x_N)
    std::vector<double> step_distances;  // d(x_n, x_{n-1}), n = 1..N
    std::vector<double> wall_times;      // seconds per step
    std::map<std::string, CertificateReport> certificates;
    std::string stop_reason;
    bool is_flow = false;
    std::optional<Point> minimizer;  // copied from the functional's metadata
    std::optional<double> infimum;

    long steps() const { return static_cast<long>(lambdas.size()); }
};

// x_n = J_{lambda_n}(x_{n-1}). Certificates that need the minimizer or the
// infimum run when that metadata is present and are recorded as skipped
// otherwise.
Trace run_ppa(const Space& s, const Functional& f, const Point& x0, const StepSchedule& schedule,
              const StopRule& stop = {}, const ResolventOptions& opts = {});

// d(x_n, c) <= d(x_{n-1}, c) for a minimizer c.
CertificateReport fejer_certificate(const Space& s, const Trace& trace, const Point& c);

// f(x_n) - inf f <= d(x_0, c)^2 / sum_{k<=n} lambda_k.
CertificateReport rate_certificate(const Space& s, const Trace& trace, const Point& c,
                                   double inf_f);

// lambda_k (f(x_k) - inf f) <= d(x_{k-1}, c)^2/2 - d(x_k, c)^2/2.
CertificateReport estimate_certificate(const Space& s, const Trace& trace, const Point& c,
                                       double inf_f);

// Cauchy witness under uniform convexity: phi(d(x_n,x_m))/4 bounded by the
// value gaps, and tail diameters shrinking. Skipped when f is not uniformly
// convex or the infimum is unknown.
CertificateReport strong_convergence_certificate(const Space& s, const Functional& f,
                                                 const Trace& trace,
                                                 const std::function<double(double)>& modulus);

// Largest pairwise distance among iterates with index >= from.
double tail_diameter(const Space& s, const Trace& trace, long from);

}  // namespace prox0
