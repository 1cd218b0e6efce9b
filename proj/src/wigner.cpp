#include "opo/wigner.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "opo/bessel.hpp"
#include "opo/error.hpp"

namespace opo {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTailLog = 40.0;  // e^-40 ~ 4e-18
constexpr int kMaxBesselOrder = 16;

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char l, char r) {
           return std::tolower(static_cast<unsigned char>(l)) == std::tolower(static_cast<unsigned char>(r));
         });
}

}  // namespace

double quartic_coefficient(double g2, QuarticConvention convention) {
  return convention == QuarticConvention::AppendixB ? 0.5 * g2 : g2;
}

std::string_view to_string(QuarticConvention convention) {
  return convention == QuarticConvention::AppendixB ? "appendixB" : "asPrinted";
}

QuarticConvention parse_convention(std::string_view text) {
  if (iequals(text, "appendixB")) return QuarticConvention::AppendixB;
  if (iequals(text, "asPrinted")) return QuarticConvention::AsPrinted;
  throw ParameterError("unknown quartic convention '" + std::string(text) + "'");
}

double log_w_unnorm(const PhasePoint& p, const OpoParams& params, QuarticConvention convention) {
  const double s = s_factor(params.mu);
  const double kappa = quartic_coefficient(params.g2, convention);
  const double r1 = p.r1_sq();
  const double r2 = p.r2_sq();
  const double bracket = r1 + r2 + 2.0 * params.mu * (p.y1 * p.y2 - p.x1 * p.x2) + kappa * (r1 * r2);
  return -bracket / (2.0 * s);
}

// ---------------------------------------------------------------------------

WignerField::WignerField(const OpoParams& params, QuarticConvention convention, double rel_tol)
    : params_(params),
      convention_(convention),
      rel_tol_(rel_tol),
      kappa_(quartic_coefficient(params.g2, convention)),
      s_(s_factor(params.mu)) {}

double WignerField::log_kernel(double r1, double r2) const {
  const double mu = params_.mu;
  const double a = mu * r1 * r2 / s_;
  const double base = -(r1 * r1 + r2 * r2 - 2.0 * mu * r1 * r2 + kappa_ * r1 * r1 * r2 * r2) / (2.0 * s_);
  return std::log(r1) + std::log(r2) + base + std::log(scaled_bessel_i0(a));
}

WignerField WignerField::normalize(const OpoParams& params, QuarticConvention convention,
                                   const NormalizeOptions& options) {
  params.validate();
  if (params.mu >= 1.0 && params.g2 == 0.0) {
    throw NonNormalizableError("Wigner density is not normalizable for mu >= 1 without the quartic term");
  }
  if (!(options.rel_tol > 0.0)) throw ParameterError("normalize: rel_tol must be > 0");
  WignerField field(params, convention, options.rel_tol);

  // Grow the box until everything outside it is negligible.
  constexpr int kScan = 96;
  double cutoff = 4.0;
  double inner_max = -std::numeric_limits<double>::infinity();
  for (int attempt = 0;; ++attempt) {
    if (attempt > 80) throw NumericalError("normalize: could not bound the density support");
    inner_max = -std::numeric_limits<double>::infinity();
    double outer_max = -std::numeric_limits<double>::infinity();
    const double step = 2.0 * cutoff / kScan;
    for (int i = 1; i <= kScan; ++i) {
      for (int j = 1; j <= kScan; ++j) {
        const double r1 = i * step;
        const double r2 = j * step;
        const double v = field.log_kernel(r1, r2);
        if (r1 <= cutoff && r2 <= cutoff) {
          inner_max = std::max(inner_max, v);
        } else {
          outer_max = std::max(outer_max, v);
        }
      }
    }
    if (outer_max < inner_max - kTailLog) break;
    cutoff *= 1.25;
  }
  field.cutoff_ = cutoff;
  field.shift_ = inner_max;

  const Estimate mass = field.integrate(RadialObservable{0, [](double, double, std::span<const double>) { return 1.0; }});
  if (!(mass.value > 0.0)) throw NumericalError("normalize: non-positive total mass");
  field.mass_ = mass.value;
  field.mass_error_ = mass.error;
  field.log_norm_ = -(std::log(kTwoPi * kTwoPi) + field.shift_ + std::log(mass.value));
  return field;
}

Estimate WignerField::integrate(const RadialObservable& observable) const {
  if (observable.max_order < 0 || observable.max_order > kMaxBesselOrder) {
    throw ParameterError("RadialObservable: Bessel order out of range");
  }
  const std::size_t orders = static_cast<std::size_t>(observable.max_order) + 1;
  const double mu = params_.mu;
  const double s = s_;
  const double kappa = kappa_;
  const double shift = shift_;
  const double cutoff = cutoff_;

  auto kernel = [&](double r1, double r2) {
    std::array<double, kMaxBesselOrder + 1> bessel{};
    const double a = mu * r1 * r2 / s;
    scaled_bessel_i(a, std::span<double>(bessel.data(), orders));
    const double base = -(r1 * r1 + r2 * r2 - 2.0 * mu * r1 * r2 + kappa * r1 * r1 * r2 * r2) / (2.0 * s);
    const double i0 = bessel[0];
    for (std::size_t m = 1; m < orders; ++m) bessel[m] /= i0;
    bessel[0] = 1.0;
    const double w = observable.weight(r1, r2, std::span<const double>(bessel.data(), orders));
    return r1 * r2 * std::exp(base - shift) * i0 * w;
  };

  const double inner_tol = std::min(1e-11, 1e-3 * rel_tol_);
  quad::AdaptiveOptions inner_opts{inner_tol, 1e-16 * cutoff, 4000, 8};
  quad::AdaptiveOptions outer_opts{rel_tol_ * 0.1, 1e-16 * cutoff * cutoff, 4000, 8};

  auto outer = [&](double r1) {
    return quad::gauss_kronrod([&](double r2) { return kernel(r1, r2); }, 0.0, cutoff, inner_opts).value;
  };
  Estimate total = quad::gauss_kronrod(outer, 0.0, cutoff, outer_opts);
  total.error += inner_tol * std::abs(total.value);
  return total;
}

double WignerField::norm() const { return std::exp(log_norm_); }

double WignerField::norm_error() const { return norm() * mass_error_ / mass_; }

double WignerField::log_density(const PhasePoint& p) const {
  return log_norm_ + log_w_unnorm(p, params_, convention_);
}

double WignerField::density(const PhasePoint& p) const { return std::exp(log_density(p)); }

Estimate WignerField::expectation(const RadialObservable& observable) const {
  const Estimate num = integrate(observable);
  const double value = num.value / mass_;
  const double error = num.error / mass_ + std::abs(value) * mass_error_ / mass_;
  return {value, error};
}

Estimate WignerField::total_probability() const {
  // Independent of the Bessel reduction: integrate the mode-2 marginal
  // (mode 1 done as an exact Gaussian) over the plane in polar form.
  auto radial = [this](double r) {
    return kTwoPi * r * marginal(r, 0.0, *this, MarginalMethod::Numeric);
  };
  quad::AdaptiveOptions opts{0.1 * rel_tol_, 0.0, 4000, 16};
  return quad::gauss_kronrod(radial, 0.0, 2.0 * cutoff_, opts);
}

// ---------------------------------------------------------------------------

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    // Each half is measured from its own end so symmetric axes mirror exactly.
    const double from_lo = static_cast<double>(i) / last;
    const double from_hi = static_cast<double>(n - 1 - i) / last;
    out[i] = (i + i < n - 1) ? lo + (hi - lo) * from_lo : hi - (hi - lo) * from_hi;
  }
  return out;
}

double marginal(double x2, double y2, const WignerField& field, MarginalMethod method) {
  const OpoParams& p = field.params();
  const double s = s_factor(p.mu);
  const double r_sq = x2 * x2 + y2 * y2;
  if (method == MarginalMethod::Numeric) {
    const double kappa = quartic_coefficient(p.g2, field.convention());
    const double damp = 1.0 + kappa * r_sq;
    const double exponent = -r_sq / (2.0 * s) + p.mu * p.mu * r_sq / (2.0 * s * damp);
    return std::exp(field.log_norm() + std::log(kTwoPi * s / damp) + exponent);
  }
  const double prefactor = kTwoPi * p.mu / (1.0 + p.g2 * r_sq);
  const double exponent = -(r_sq * (1.0 - p.mu * p.mu) + p.g2 * r_sq * r_sq) / (2.0 * s);
  return prefactor * std::exp(field.log_norm() + exponent);
}

Grid2D conditional_slice(const WignerField& field, std::span<const double> x1_axis,
                         std::span<const double> x2_axis) {
  Grid2D grid{{x1_axis.begin(), x1_axis.end()}, {x2_axis.begin(), x2_axis.end()}, {}};
  grid.values.reserve(grid.xs.size() * grid.ys.size());
  for (double x1 : grid.xs) {
    for (double x2 : grid.ys) grid.values.push_back(field.density({x1, 0.0, x2, 0.0}));
  }
  return grid;
}

Grid2D marginal_grid(const WignerField& field, std::span<const double> x2_axis,
                     std::span<const double> y2_axis, MarginalMethod method) {
  Grid2D grid{{x2_axis.begin(), x2_axis.end()}, {y2_axis.begin(), y2_axis.end()}, {}};
  grid.values.reserve(grid.xs.size() * grid.ys.size());
  for (double x2 : grid.xs) {
    for (double y2 : grid.ys) grid.values.push_back(marginal(x2, y2, field, method));
  }
  return grid;
}

std::vector<PhasePoint> peak_locations(const WignerField& field) {
  const OpoParams& p = field.params();
  if (p.mu <= 1.0) return {PhasePoint{}};
  const double kappa = quartic_coefficient(p.g2, field.convention());
  const double x = std::sqrt((p.mu - 1.0) / kappa);
  return {PhasePoint{x, 0.0, x, 0.0}, PhasePoint{-x, 0.0, -x, 0.0}};
}

std::vector<std::pair<std::size_t, std::size_t>> grid_local_maxima(const Grid2D& grid, double rel_floor) {
  std::vector<std::pair<std::size_t, std::size_t>> peaks;
  const std::size_t nx = grid.xs.size();
  const std::size_t ny = grid.ys.size();
  if (nx == 0 || ny == 0) return peaks;
  const double global = *std::max_element(grid.values.begin(), grid.values.end());
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = grid.at(i, j);
      if (v < rel_floor * global) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<std::ptrdiff_t>(i) + di;
          const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(nx) || jj >= static_cast<std::ptrdiff_t>(ny)) continue;
          if (grid.at(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj)) >= v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.emplace_back(i, j);
    }
  }
  return peaks;
}

}  // namespace opo
