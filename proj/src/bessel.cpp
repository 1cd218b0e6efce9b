#include "opo/bessel.hpp"

#include <cmath>
#include <numbers>

#include "opo/error.hpp"

namespace opo {
namespace {

constexpr double kSeriesLimit = 20.0;

double series(int order, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= order; ++k) term *= half / k;
  double sum = term;
  const double q = half * half;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum * std::exp(-x);
}

// Hankel expansion of I_nu(x) e^{-x}; for x >= 20 and nu <= 1 the terms
// decrease well past double precision before diverging.
double asymptotic(int order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

void scaled_bessel_i(double x, std::span<double> out) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw NumericalError("scaled_bessel_i: argument must be finite and >= 0");
  if (out.empty()) return;
  if (x < kSeriesLimit) {
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = series(static_cast<int>(m), x);
    return;
  }
  out[0] = asymptotic(0, x);
  if (out.size() == 1) return;
  out[1] = asymptotic(1, x);
  for (std::size_t m = 1; m + 1 < out.size(); ++m) {
    out[m + 1] = out[m - 1] - (2.0 * m / x) * out[m];
  }
}

double scaled_bessel_i0(double x) {
  double v[1];
  scaled_bessel_i(x, v);
  return v[0];
}

}  // namespace opo
