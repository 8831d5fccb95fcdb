#pragma once

#include <stdexcept>
#include <string>

namespace csege {

/// Invalid parameters: bad (l, n, k), eps out of range, malformed config.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine broke down (singular factorization, quadrature
/// non-convergence). Sweeps count these per realization.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// More than the allowed fraction of realizations failed in a sweep.
class FailureBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csege
