#include "opo/model.hpp"

#include <cmath>
#include <string>

#include "opo/error.hpp"

namespace opo {

double OpoParams::g() const { return std::sqrt(g2); }

void OpoParams::validate() const {
  if (!(std::isfinite(mu) && mu >= 0.0)) throw ParameterError("mu must be finite and >= 0, got " + std::to_string(mu));
  if (!(std::isfinite(g2) && g2 >= 0.0)) throw ParameterError("g2 must be finite and >= 0, got " + std::to_string(g2));
  if (!(std::isfinite(gamma) && gamma > 0.0)) throw ParameterError("gamma must be > 0");
  if (!(std::isfinite(gamma0) && gamma0 > 0.0)) throw ParameterError("gamma0 must be > 0");
}

OpoParams make_params(double mu, double g2, double gamma, double gamma0) {
  OpoParams p{mu, g2, gamma, gamma0};
  p.validate();
  return p;
}

Regime classify_regime(double mu) {
  const double distance = std::abs(mu - 1.0);
  if (distance <= kThresholdTolerance) return {RegimeKind::Threshold, distance};
  return {mu < 1.0 ? RegimeKind::Below : RegimeKind::Above, distance};
}

double s_factor(double mu) {
  if (!(mu >= 0.0)) throw ParameterError("s_factor: mu must be >= 0");
  return mu <= 1.0 ? 1.0 : mu;
}

OpoParams rescale_params(const PhysicalRates& r) {
  if (!(r.gamma > 0.0) || !(r.gamma0 > 0.0)) throw ParameterError("damping rates must be > 0");
  if (!(r.chi >= 0.0)) throw ParameterError("coupling chi must be >= 0");
  if (!(r.pump >= 0.0)) throw ParameterError("pump amplitude must be >= 0");
  const double g = r.chi / std::sqrt(2.0 * r.gamma * r.gamma0);
  const double mu = r.chi * r.pump / (r.gamma * r.gamma0);
  return make_params(mu, g * g, r.gamma, r.gamma0);
}

PhysicalRates physical_rates(const OpoParams& p) {
  p.validate();
  const double chi = p.g() * std::sqrt(2.0 * p.gamma * p.gamma0);
  if (chi == 0.0) {
    if (p.mu != 0.0) throw ParameterError("mu > 0 requires a nonzero coupling");
    return {0.0, p.gamma, p.gamma0, 0.0};
  }
  return {chi, p.gamma, p.gamma0, p.mu * p.gamma * p.gamma0 / chi};
}

FixedPoints classical_fixed_points(const OpoParams& p) {
  p.validate();
  const Regime regime = classify_regime(p.mu);
  FixedPoints fp{};
  fp.origin_marginal = regime.kind == RegimeKind::Threshold;
  // Linearized drift at the origin has eigenvalues gamma (-1 +- mu).
  fp.origin_stable = regime.kind == RegimeKind::Below;
  if (regime.kind != RegimeKind::Above) return fp;
  if (p.g2 == 0.0) return fp;  // no saturation: the ring is at infinity

  const double intensity = 2.0 * (p.mu - 1.0) / p.g2;
  const double x = std::sqrt(intensity);
  fp.ring_intensity = intensity;
  fp.representative = PhasePoint{x, 0.0, x, 0.0};
  return fp;
}

}  // namespace opo
