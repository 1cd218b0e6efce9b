#pragma once

// Reference computations that share no numerical code with the library.

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "opo/phase_point.hpp"

namespace oracle {

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Exact i.i.d. sampler for W proportional to
/// exp(-(1/2s)[r1^2 + r2^2 + 2 mu (y1 y2 - x1 x2) + kappa r1^2 r2^2]).
/// Mode 2 is drawn from its radial marginal by inverse CDF on a fine grid;
/// mode 1 is Gaussian given mode 2.
class ExactSampler {
 public:
  ExactSampler(double mu, double kappa, double s);

  opo::PhasePoint draw(std::mt19937_64& rng) const;

  /// Sample mean and standard error of f over n draws.
  McEstimate average(const std::function<double(const opo::PhasePoint&)>& f, std::size_t n,
                     std::uint64_t seed) const;

 private:
  double mu_, kappa_, s_;
  std::vector<double> r_;    ///< radial grid
  std::vector<double> cdf_;  ///< normalized cumulative mass on r_
};

/// Normalization N = 1 / integral exp(log_w) by importance sampling from an
/// isotropic Gaussian of variance sigma2 per coordinate.
McEstimate importance_norm(const std::function<double(const opo::PhasePoint&)>& log_w, double sigma2,
                           std::size_t n, std::uint64_t seed);

/// Covariance of the Gaussian exp(-X^T P X / 2) for the linearized density,
/// built by inverting its precision matrix.
std::vector<double> linear_gaussian_covariance(double mu);

}  // namespace oracle
