#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "opo/cli.hpp"
#include "opo/error.hpp"

namespace opo::cli {

namespace {

std::string lower(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool uses_sde(const RunConfig& cfg) {
  return cfg.subcommand == "sde-compare" || cfg.subcommand == "simulate" ||
         (cfg.subcommand == "variance-sweep" && cfg.sde_rows);
}

}  // namespace

std::string_view to_string(SdeModel model) {
  switch (model) {
    case SdeModel::TwoMode:
      return "two-mode";
    case SdeModel::ThreeMode:
      return "three-mode";
    case SdeModel::PositiveP:
      return "positive-p";
  }
  return "?";
}

SdeModel parse_sde_model(std::string_view text) {
  const std::string s = lower(text);
  if (s == "two-mode") return SdeModel::TwoMode;
  if (s == "three-mode") return SdeModel::ThreeMode;
  if (s == "positive-p") return SdeModel::PositiveP;
  throw ParameterError("unknown model '" + std::string(text) + "' (two-mode, three-mode, positive-p)");
}

MarginalMethod parse_marginal_method(std::string_view text) {
  const std::string s = lower(text);
  if (s == "numeric") return MarginalMethod::Numeric;
  if (s == "closed-form") return MarginalMethod::ClosedForm;
  throw ParameterError("unknown marginal method '" + std::string(text) + "' (numeric, closed-form)");
}

std::vector<double> mu_range(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ParameterError("mu_range: need step > 0 and hi >= lo");
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out;
  for (long k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

std::string short_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, res.ptr};
}

RunConfig default_config(std::string_view subcommand) {
  RunConfig cfg;
  cfg.subcommand = std::string(subcommand);
  cfg.params.g2 = 0.01;
  cfg.params.gamma = 1.0;
  cfg.params.gamma0 = 10.0;
  if (subcommand == "variance-sweep") {
    cfg.mu_grid = mu_range(0.1, 2.0, 0.05);
  } else if (subcommand == "sde-compare") {
    cfg.mu_grid = mu_range(0.25, 2.0, 0.25);
  } else if (subcommand == "wigner-slice") {
    cfg.mu_grid = {0.5, 1.0, 1.5};
    cfg.extent = 15.0;
    cfg.points = 121;
  } else if (subcommand == "marginal") {
    cfg.mu_grid = {0.8, 1.0, 1.2};
    cfg.extent = 10.0;
    cfg.points = 101;
  } else if (subcommand == "potential-check") {
    cfg.mu_grid = {0.5, 1.5};
  } else if (subcommand == "simulate") {
    cfg.mu_grid = {0.5};
  } else {
    throw ParameterError("unknown subcommand '" + std::string(subcommand) + "'");
  }
  return cfg;
}

void RunConfig::validate() const {
  if (mu_grid.empty()) throw ParameterError("mu grid is empty");
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    if (!std::isfinite(mu_grid[i]) || mu_grid[i] < 0.0) throw ParameterError("mu values must be finite and >= 0");
    if (i > 0 && !(mu_grid[i] > mu_grid[i - 1])) throw ParameterError("mu grid must be strictly ascending");
  }
  OpoParams p = params;
  p.mu = mu_grid.front();
  p.validate();
  if (!(extent > 0.0) || !std::isfinite(extent)) throw ParameterError("extent must be > 0");
  if (points < 3) throw ParameterError("points must be >= 3");
  if (!(sample_box > 0.0)) throw ParameterError("sample box must be > 0");
  if (uses_sde(*this)) integrator.validate();
  if (out_dir.empty()) throw ParameterError("output directory is empty");
}

}  // namespace opo::cli
