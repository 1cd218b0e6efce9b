#pragma once

#include <Eigen/Core>

namespace opo {

/// Signal (1) and idler (2) quadratures, x = a + a*, y = -i (a - a*).
/// Vacuum variance of each quadrature is 1 in this convention.
struct PhasePoint {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  [[nodiscard]] double r1_sq() const { return x1 * x1 + y1 * y1; }
  [[nodiscard]] double r2_sq() const { return x2 * x2 + y2 * y2; }

  [[nodiscard]] Eigen::Vector4d vec() const { return {x1, y1, x2, y2}; }
  static PhasePoint from(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

}  // namespace opo
