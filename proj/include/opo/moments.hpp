#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opo/linearized.hpp"
#include "opo/quadrature.hpp"
#include "opo/wigner.hpp"

namespace opo {

/// x1^a y1^b x2^c y2^d.
struct MonomialSpec {
  int a = 0;
  int b = 0;
  int c = 0;
  int d = 0;

  [[nodiscard]] int degree() const { return a + b + c + d; }
};

inline constexpr int kDefaultMaxMomentDegree = 8;

/// True when the phase average of the monomial vanishes identically under
/// every field of this family (all odd-degree monomials among others).
bool moment_vanishes(const MonomialSpec& m);

/// <x1^a y1^b x2^c y2^d> under W. Identically vanishing monomials return an
/// exact zero with zero error.
Estimate moment(const WignerField& field, const MonomialSpec& m, int max_degree = kDefaultMaxMomentDegree);

struct QuadratureEpr {
  EprVariances variances;  ///< source = Quadrature, all entries present
  double error = 0.0;      ///< largest absolute error estimate of the four
};

/// EPR variances assembled from raw second moments:
/// v_x± = (<x1^2> + <x2^2> ± 2<x1 x2>)/2 and likewise for y.
QuadratureEpr epr_variances_from_wigner(const WignerField& field);

struct VarianceRow {
  double mu = 0.0;
  std::string source;  ///< linearized | quadrature_appendixB | quadrature_asPrinted | sde
  std::optional<double> vxp;
  std::optional<double> vxm;
  std::optional<double> vyp;
  std::optional<double> vym;
  double err = 0.0;
};

struct VarianceTable {
  std::vector<VarianceRow> rows;

  /// Stable sort by mu; rows with equal mu keep insertion order.
  void sort();
  [[nodiscard]] std::string to_csv() const;
};

struct SweepOptions {
  bool linearized = true;
  std::vector<QuarticConvention> quadrature = {QuarticConvention::AppendixB};
  double rel_tol = 1e-8;
  unsigned threads = 0;
};

std::string quadrature_source_label(QuarticConvention convention);

/// One row per mu per requested source. mu_grid must be finite and ascending.
VarianceTable variance_sweep(std::span<const double> mu_grid, double g2, const SweepOptions& options = {});

}  // namespace opo
