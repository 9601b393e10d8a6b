#pragma once

#include <stdexcept>
#include <string>

namespace commonbath {

// Inputs that violate a precondition. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Quadrature non-convergence, eigensolver failure, or a computed state that
// breaks density-matrix invariants. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Brute-force Hilbert space larger than the configured budget.
class CapacityError : public ValidationError {
public:
    explicit CapacityError(const std::string& what) : ValidationError(what) {}
};

// Fock truncation too small for the bath temperature.
class TruncationError : public ValidationError {
public:
    explicit TruncationError(const std::string& what) : ValidationError(what) {}
};

} // namespace commonbath
