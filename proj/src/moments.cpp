#include "opo/moments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "opo/csv.hpp"
#include "opo/error.hpp"
#include "opo/parallel.hpp"

namespace opo {
namespace {

using Complex = std::complex<double>;

// Fourier coefficients of cos^p(t) sin^q(t) in e^{imt}; index m + (p+q).
std::vector<Complex> trig_coefficients(int p, int q) {
  std::vector<Complex> poly{Complex{1.0, 0.0}};
  auto multiply = [&](Complex plus, Complex minus) {
    std::vector<Complex> next(poly.size() + 2, Complex{});
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + 2] += poly[k] * plus;
      next[k] += poly[k] * minus;
    }
    poly = std::move(next);
  };
  for (int i = 0; i < p; ++i) multiply({0.5, 0.0}, {0.5, 0.0});
  for (int i = 0; i < q; ++i) multiply({0.0, -0.5}, {0.0, 0.5});  // (z - 1/z)/(2i)
  return poly;
}

// Weight of I_|m|/I_0 in the phase average: sum over +-m of C1_m C2_m.
std::vector<double> bessel_weights(const MonomialSpec& m) {
  const int n1 = m.a + m.b;
  const int n2 = m.c + m.d;
  const auto c1 = trig_coefficients(m.a, m.b);
  const auto c2 = trig_coefficients(m.c, m.d);
  const int top = std::min(n1, n2);
  std::vector<double> w(static_cast<std::size_t>(top) + 1, 0.0);
  for (int k = -top; k <= top; ++k) {
    const int i1 = k + n1;
    const int i2 = k + n2;
    const Complex prod = c1[static_cast<std::size_t>(i1)] * c2[static_cast<std::size_t>(i2)];
    w[static_cast<std::size_t>(std::abs(k))] += prod.real();
  }
  return w;
}

void check_spec(const MonomialSpec& m, int max_degree) {
  if (m.a < 0 || m.b < 0 || m.c < 0 || m.d < 0) throw ParameterError("MonomialSpec: exponents must be >= 0");
  if (m.degree() > max_degree) {
    throw ParameterError("MonomialSpec: total degree " + std::to_string(m.degree()) + " exceeds maximum " +
                         std::to_string(max_degree));
  }
}

}  // namespace

bool moment_vanishes(const MonomialSpec& m) {
  if (m.degree() % 2 != 0) return true;
  const auto w = bessel_weights(m);
  return std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; });
}

Estimate moment(const WignerField& field, const MonomialSpec& m, int max_degree) {
  check_spec(m, max_degree);
  if (moment_vanishes(m)) return {0.0, 0.0};
  const auto weights = bessel_weights(m);
  const int p1 = m.a + m.b;
  const int p2 = m.c + m.d;
  RadialObservable obs;
  obs.max_order = static_cast<int>(weights.size()) - 1;
  obs.weight = [&weights, p1, p2](double r1, double r2, std::span<const double> ratio) {
    double angular = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] != 0.0) angular += weights[k] * ratio[k];
    }
    return std::pow(r1, p1) * std::pow(r2, p2) * angular;
  };
  return field.expectation(obs);
}

QuadratureEpr epr_variances_from_wigner(const WignerField& field) {
  const Estimate x11 = moment(field, {2, 0, 0, 0});
  const Estimate x22 = moment(field, {0, 0, 2, 0});
  const Estimate x12 = moment(field, {1, 0, 1, 0});
  const Estimate y11 = moment(field, {0, 2, 0, 0});
  const Estimate y22 = moment(field, {0, 0, 0, 2});
  const Estimate y12 = moment(field, {0, 1, 0, 1});
  // First moments vanish identically, so second moments are the covariances.
  QuadratureEpr out;
  out.variances.source = VarianceSource::Quadrature;
  out.variances.v_x_plus = 0.5 * (x11.value + x22.value) + x12.value;
  out.variances.v_x_minus = 0.5 * (x11.value + x22.value) - x12.value;
  out.variances.v_y_plus = 0.5 * (y11.value + y22.value) + y12.value;
  out.variances.v_y_minus = 0.5 * (y11.value + y22.value) - y12.value;
  out.error = std::max(0.5 * (x11.error + x22.error) + x12.error, 0.5 * (y11.error + y22.error) + y12.error);
  return out;
}

void VarianceTable::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const VarianceRow& l, const VarianceRow& r) { return l.mu < r.mu; });
}

std::string VarianceTable::to_csv() const {
  std::string out = "mu,source,vxp,vxm,vyp,vym,err\n";
  for (const VarianceRow& r : rows) {
    out += csv::number(r.mu) + "," + r.source + "," + csv::number_or_div(r.vxp) + "," + csv::number_or_div(r.vxm) +
           "," + csv::number_or_div(r.vyp) + "," + csv::number_or_div(r.vym) + "," + csv::number(r.err) + "\n";
  }
  return out;
}

std::string quadrature_source_label(QuarticConvention convention) {
  return "quadrature_" + std::string(to_string(convention));
}

VarianceTable variance_sweep(std::span<const double> mu_grid, double g2, const SweepOptions& options) {
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    if (!std::isfinite(mu_grid[i]) || mu_grid[i] < 0.0) throw ParameterError("variance_sweep: mu must be finite and >= 0");
    if (i > 0 && !(mu_grid[i] > mu_grid[i - 1])) throw ParameterError("variance_sweep: mu grid must be ascending");
  }
  const std::size_t per_mu = (options.linearized ? 1 : 0) + options.quadrature.size();
  std::vector<VarianceRow> rows(mu_grid.size() * per_mu);

  parallel_for(
      mu_grid.size(),
      [&](std::size_t i) {
        const double mu = mu_grid[i];
        std::size_t slot = i * per_mu;
        if (options.linearized) {
          const EprVariances v = linearized_variances(mu, g2);
          rows[slot++] = VarianceRow{mu, std::string(to_string(VarianceSource::Linearized)), v.v_x_plus, v.v_x_minus,
                                     v.v_y_plus, v.v_y_minus, 0.0};
        }
        for (QuarticConvention conv : options.quadrature) {
          const WignerField field = WignerField::normalize(make_params(mu, g2), conv, {options.rel_tol});
          const QuadratureEpr q = epr_variances_from_wigner(field);
          rows[slot++] = VarianceRow{mu, quadrature_source_label(conv), q.variances.v_x_plus, q.variances.v_x_minus,
                                     q.variances.v_y_plus, q.variances.v_y_minus, q.error};
        }
      },
      worker_count(options.threads));

  VarianceTable table{std::move(rows)};
  table.sort();
  return table;
}

}  // namespace opo
