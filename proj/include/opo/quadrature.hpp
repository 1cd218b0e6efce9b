#pragma once

#include <functional>
#include <vector>

namespace opo {

/// A numerical value with an absolute error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

namespace quad {

struct AdaptiveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 500;
  int initial_intervals = 1;  ///< uniform pre-split of [a, b]
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. The error estimate
/// is |K15 - G7| summed over the final partition. The result is deterministic
/// for fixed options (fixed bisection order, summation by position).
Estimate gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                       const AdaptiveOptions& options = {});

struct Rule {
  std::vector<double> nodes;    ///< on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule via Newton iteration on P_n.
Rule gauss_legendre(int n);

}  // namespace quad
}  // namespace opo
