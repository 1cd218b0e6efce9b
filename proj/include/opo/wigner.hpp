#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "opo/model.hpp"
#include "opo/phase_point.hpp"
#include "opo/quadrature.hpp"

namespace opo {

/// Coefficient of the quartic (r1^2 r2^2) term in the steady-state exponent.
/// AppendixB uses g^2/2, which is what line-integrating the mean-diffusion
/// field gives; AsPrinted uses g^2.
enum class QuarticConvention { AppendixB, AsPrinted };

double quartic_coefficient(double g2, QuarticConvention convention);
std::string_view to_string(QuarticConvention convention);
/// Accepts "appendixB" / "asPrinted" (case-insensitive).
QuarticConvention parse_convention(std::string_view text);

/// Unnormalized log of the steady-state Wigner density:
/// -(1/2s) [r1^2 + r2^2 + 2 mu (y1 y2 - x1 x2) + kappa r1^2 r2^2].
double log_w_unnorm(const PhasePoint& p, const OpoParams& params,
                    QuarticConvention convention = QuarticConvention::AppendixB);

struct NormalizeOptions {
  double rel_tol = 1e-8;
};

/// An observable already averaged over the two mode phases at fixed radii.
/// `weight` receives the radii and ratios I_m(A)/I_0(A), m = 0..max_order,
/// where A = mu r1 r2 / s is the argument of the phase-sum distribution.
struct RadialObservable {
  int max_order = 0;
  std::function<double(double r1, double r2, std::span<const double> bessel_ratio)> weight;
};

/// Normalized steady-state Wigner distribution. Immutable once built.
///
/// The density depends on the angles only through psi = theta1 + theta2, so
/// all phase-space integrals reduce to a 2D radial integral with a modified
/// Bessel kernel; those are done by nested adaptive Gauss-Kronrod on
/// [0, R]^2 with R chosen so the integrand is below 1e-17 of its peak outside.
class WignerField {
 public:
  /// Throws NonNormalizableError for mu >= 1 with g2 == 0.
  static WignerField normalize(const OpoParams& params,
                               QuarticConvention convention = QuarticConvention::AppendixB,
                               const NormalizeOptions& options = {});

  [[nodiscard]] const OpoParams& params() const { return params_; }
  [[nodiscard]] QuarticConvention convention() const { return convention_; }
  [[nodiscard]] double rel_tol() const { return rel_tol_; }

  /// Normalization constant N with W = N exp(log_w_unnorm).
  [[nodiscard]] double norm() const;
  [[nodiscard]] double log_norm() const { return log_norm_; }
  /// Absolute error estimate of norm().
  [[nodiscard]] double norm_error() const;
  [[nodiscard]] double radial_cutoff() const { return cutoff_; }

  [[nodiscard]] double log_density(const PhasePoint& p) const;
  [[nodiscard]] double density(const PhasePoint& p) const;

  /// Expectation of a phase-averaged observable under W.
  [[nodiscard]] Estimate expectation(const RadialObservable& observable) const;

  /// Total probability (should be 1 within the stored error).
  [[nodiscard]] Estimate total_probability() const;

 private:
  WignerField(const OpoParams& params, QuarticConvention convention, double rel_tol);

  [[nodiscard]] double log_kernel(double r1, double r2) const;
  [[nodiscard]] Estimate integrate(const RadialObservable& observable) const;

  OpoParams params_;
  QuarticConvention convention_;
  double rel_tol_;
  double kappa_;
  double s_;
  double cutoff_ = 0.0;
  double shift_ = 0.0;      ///< peak of log_kernel, removed before exponentiation
  double mass_ = 0.0;       ///< integral of exp(log_kernel - shift) over [0,R]^2
  double mass_error_ = 0.0;
  double log_norm_ = 0.0;
};

/// Rectangular grid of values, row-major: values[i * ys.size() + j] at (xs[i], ys[j]).
struct Grid2D {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;

  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[i * ys.size() + j]; }
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

enum class MarginalMethod { Numeric, ClosedForm };

/// Mode-2 marginal density. Numeric integrates mode 1 out of W exactly (the
/// mode-1 integral is Gaussian); ClosedForm evaluates the printed marginal
/// expression, including its 2 pi N mu prefactor, as is.
double marginal(double x2, double y2, const WignerField& field, MarginalMethod method);

/// W(x1, 0, x2, 0) over xs (x1) by ys (x2).
Grid2D conditional_slice(const WignerField& field, std::span<const double> x1_axis,
                         std::span<const double> x2_axis);

Grid2D marginal_grid(const WignerField& field, std::span<const double> x2_axis,
                     std::span<const double> y2_axis, MarginalMethod method);

/// Analytic maxima of the y1 = y2 = 0 slice: the origin for mu <= 1, else
/// (x*, x*) and (-x*, -x*) with x*^2 = (mu - 1) / kappa.
std::vector<PhasePoint> peak_locations(const WignerField& field);

/// Strict local maxima of a grid (8-neighbourhood) whose value is at least
/// rel_floor times the global maximum.
std::vector<std::pair<std::size_t, std::size_t>> grid_local_maxima(const Grid2D& grid,
                                                                   double rel_floor = 1e-3);

}  // namespace opo
