#pragma once

#include <stdexcept>
#include <string>

namespace opo {

/// Invalid parameters or configuration supplied by the caller.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (quadrature, integrator blow-up, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The steady-state density has no finite normalization (mu >= 1 without
/// the quartic term).
class NonNormalizableError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Too many stochastic trajectories crossed the divergence bound.
class EscapeRateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A vector field failed the curl-free test where a potential was required.
class PotentialConditionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace opo
