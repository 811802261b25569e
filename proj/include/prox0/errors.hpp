#pragma once

#include <stdexcept>
#include <string>

namespace prox0 {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A well-formed value used outside its domain (wrong space, parameter out of
// range, mismatched dimensions).
struct DomainError : Error {
    using Error::Error;
};

// A descriptor that violates its own invariants (non-SPD matrix payload,
// disconnected tree, negative edge weight, ...).
struct ValidationError : Error {
    using Error::Error;
};

// The requested minimization has no feasible point.
struct InfeasibleError : Error {
    using Error::Error;
};

// An iterative solver stopped before reaching its tolerance. Carries the
// residual it could certify for the best iterate it found.
struct SolverError : Error {
    double residual;
    explicit SolverError(const std::string& what, double res)
        : Error(what), residual(res) {}
};

// No applicable solution strategy for the given functional/space combination.
struct StrategyError : Error {
    using Error::Error;
};

}  // namespace prox0
