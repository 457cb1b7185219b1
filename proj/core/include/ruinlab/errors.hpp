#pragma once

#include <stdexcept>
#include <string>

namespace ruinlab {

// Raised for inputs outside a documented parameter domain. The CLI maps it
// to exit code 1.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A quantity that does not exist for the given law (an infinite moment, a
// missing moment generating function).
class UnavailableError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A numerical gate (quadrature tolerance, ODE property check, convergence
// condition) did not pass. The CLI maps it to exit code 2.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ruinlab
