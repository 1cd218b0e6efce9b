#pragma once

#include <optional>

#include "opo/phase_point.hpp"

namespace opo {

/// Dimensionless control parameters of the nondegenerate OPO with the
/// pump adiabatically eliminated. Signal and idler share the damping
/// rate gamma.
struct OpoParams {
  double mu = 0.0;       ///< pump relative to threshold, chi E / (gamma gamma0)
  double g2 = 0.01;      ///< g^2 with g = chi / sqrt(2 gamma gamma0)
  double gamma = 1.0;    ///< signal/idler damping rate
  double gamma0 = 10.0;  ///< pump damping rate

  [[nodiscard]] double gamma_r() const { return gamma0 / gamma; }
  [[nodiscard]] double g() const;

  /// True when the pump is damped fast enough for adiabatic elimination.
  [[nodiscard]] bool adiabatic_valid(double min_ratio = 10.0) const { return gamma_r() >= min_ratio; }

  /// Throws ParameterError unless mu >= 0, g2 >= 0, gamma > 0, gamma0 > 0.
  void validate() const;
};

/// Checked constructor for OpoParams.
OpoParams make_params(double mu, double g2, double gamma = 1.0, double gamma0 = 10.0);

enum class RegimeKind { Below, Threshold, Above };

struct Regime {
  RegimeKind kind;
  double distance;  ///< |mu - 1|
};

inline constexpr double kThresholdTolerance = 1e-12;

Regime classify_regime(double mu);

/// Effective diffusion scale: 1 below threshold, mu above.
double s_factor(double mu);

/// Physical rates (units 1/time) that generate a given OpoParams.
struct PhysicalRates {
  double chi;
  double gamma;
  double gamma0;
  double pump;  ///< external drive E
};

/// Dimensionless rescaling: g = chi / sqrt(2 gamma gamma0),
/// mu = chi E / (gamma gamma0).
OpoParams rescale_params(const PhysicalRates& rates);

/// Inverse of rescale_params for the (gamma, gamma0) stored in params.
PhysicalRates physical_rates(const OpoParams& params);

/// Zeros of the deterministic two-mode drift. Above threshold these form
/// a ring (free relative phase); only its intensity and one representative
/// point are reported.
struct FixedPoints {
  bool origin_stable;
  bool origin_marginal;                   ///< true exactly at threshold
  std::optional<double> ring_intensity;   ///< x^2 + y^2 per mode, above threshold
  std::optional<PhasePoint> representative;  ///< (x, 0, x, 0) on the ring
};

FixedPoints classical_fixed_points(const OpoParams& params);

}  // namespace opo
