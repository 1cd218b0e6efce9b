#include "opo/linearized.hpp"

#include <cmath>
#include <numbers>

#include "opo/error.hpp"
#include "opo/model.hpp"

namespace opo {

EprPoint epr_transform(const PhasePoint& p) {
  const double k = std::numbers::sqrt2 / 2.0;
  return {k * (p.x1 + p.x2), k * (p.y1 + p.y2), k * (p.x1 - p.x2), k * (p.y1 - p.y2)};
}

PhasePoint epr_inverse(const EprPoint& e) {
  const double k = std::numbers::sqrt2 / 2.0;
  return {k * (e.x_plus + e.x_minus), k * (e.y_plus + e.y_minus), k * (e.x_plus - e.x_minus),
          k * (e.y_plus - e.y_minus)};
}

std::string_view to_string(VarianceSource source) {
  switch (source) {
    case VarianceSource::Linearized: return "linearized";
    case VarianceSource::Quadrature: return "quadrature";
    case VarianceSource::Sde: return "sde";
  }
  return "unknown";
}

EprVariances linearized_variances(double mu, double g2) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ParameterError("linearized_variances: mu must be >= 0");
  EprVariances v;
  v.source = VarianceSource::Linearized;
  const Regime regime = classify_regime(mu);
  if (regime.kind == RegimeKind::Threshold) {
    v.v_x_minus = 0.5;
    v.v_y_plus = 0.5;
    return v;
  }
  if (regime.kind == RegimeKind::Below) {
    v.v_x_plus = v.v_y_minus = 1.0 / (1.0 - mu);
    v.v_x_minus = v.v_y_plus = 1.0 / (1.0 + mu);
    return v;
  }
  if (!(g2 > 0.0)) throw ParameterError("linearized_variances: g2 must be > 0 above threshold");
  v.v_x_plus = v.v_y_minus = 1.0 / (mu - 1.0) + (mu - 1.0) / g2;
  v.v_x_minus = v.v_y_plus = 0.5;
  return v;
}

double w_linear(const PhasePoint& p, double mu) {
  if (!(mu >= 0.0 && mu < 1.0)) throw ParameterError("w_linear: requires 0 <= mu < 1");
  const EprPoint e = epr_transform(p);
  const double q = (1.0 + mu) * (e.x_minus * e.x_minus + e.y_plus * e.y_plus) +
                   (1.0 - mu) * (e.x_plus * e.x_plus + e.y_minus * e.y_minus);
  return std::exp(-0.5 * q);
}

DuanSimonResult duan_simon_check(const EprVariances& v) {
  if (!v.v_x_minus || !v.v_y_plus) throw ParameterError("duan_simon_check: squeezed variances missing");
  const double sum = *v.v_x_minus + *v.v_y_plus;
  return {sum, sum < kDuanSimonBound};
}

}  // namespace opo
