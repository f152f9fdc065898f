#pragma once

#include <stdexcept>
#include <string>

namespace hartree {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Bad or missing configuration (flags, config keys, grid sizes).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature, factorization or eigensolver failure.
struct NumericalError : std::runtime_error {
    NumericalError(const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), achieved(achieved) {}
    double achieved;  ///< achieved tolerance / residual at failure
};

/// Nonlinear iteration did not converge.
struct IterationError : std::runtime_error {
    IterationError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual(last_residual) {}
    double last_residual;
};

/// Iterate left the admissible set (e.g. lost positivity).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hartree
