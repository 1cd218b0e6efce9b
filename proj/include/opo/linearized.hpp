#pragma once

#include <optional>
#include <string_view>

#include "opo/phase_point.hpp"

namespace opo {

/// EPR combinations x± = (x1 ± x2)/√2, y± = (y1 ± y2)/√2.
struct EprPoint {
  double x_plus = 0.0;
  double y_plus = 0.0;
  double x_minus = 0.0;
  double y_minus = 0.0;
};

EprPoint epr_transform(const PhasePoint& p);
PhasePoint epr_inverse(const EprPoint& e);

enum class VarianceSource { Linearized, Quadrature, Sde };
std::string_view to_string(VarianceSource source);

/// Variances of the four EPR quadratures. An empty entry marks a divergence
/// (the linearized theory at mu = 1).
struct EprVariances {
  std::optional<double> v_x_plus;
  std::optional<double> v_x_minus;
  std::optional<double> v_y_plus;
  std::optional<double> v_y_minus;
  VarianceSource source = VarianceSource::Linearized;
};

/// Linearized fluctuation theory. Below threshold:
///   <x+^2> = <y-^2> = 1/(1-mu),  <x-^2> = <y+^2> = 1/(1+mu);
/// above:
///   <x+^2> = <y-^2> = 1/(mu-1) + (mu-1)/g^2,  <x-^2> = <y+^2> = 1/2.
/// At threshold the anti-squeezed pair is reported as divergent.
EprVariances linearized_variances(double mu, double g2);

/// Unnormalized linearized (Gaussian) Wigner density, valid for 0 <= mu < 1.
double w_linear(const PhasePoint& p, double mu);

struct DuanSimonResult {
  double sum;
  bool entangled;
};

/// Separability bound on <x-^2> + <y+^2> is 2 with unit vacuum variance per
/// quadrature; entangled when the sum is strictly below it.
DuanSimonResult duan_simon_check(const EprVariances& v);

inline constexpr double kDuanSimonBound = 2.0;

}  // namespace opo
