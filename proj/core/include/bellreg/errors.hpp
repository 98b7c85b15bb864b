#pragma once

#include <stdexcept>
#include <string>

namespace bellreg {

// Argument outside the mathematical domain of a function (negative Lambert W
// argument, nonpositive digamma argument, theta <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or inconsistent user input: bad CSV cells, dimension mismatches,
// invalid configuration.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced a non-finite value or failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An MCMC run failed a convergence gate.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bellreg
