#include "opo/sde.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <json.hpp>

#include "opo/csv.hpp"
#include "opo/error.hpp"
#include "opo/parallel.hpp"
#include "opo/rng.hpp"

namespace opo {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be > 0");
  if (!(burn_in >= 0.0) || !(burn_in < t_end)) throw ParameterError("burn_in must satisfy 0 <= burn_in < t_end");
  if (n_traj < 2) throw ParameterError("n_traj must be >= 2");
  if (!(sample_interval >= dt)) throw ParameterError("sample_interval must be >= dt");
  if (noise_substeps < 1) throw ParameterError("noise_substeps must be >= 1");
  if (n_batches < 2) throw ParameterError("n_batches must be >= 2");
  if (!(escape_bound > 0.0)) throw ParameterError("escape_bound must be > 0");
  if (!(max_escape_fraction >= 0.0 && max_escape_fraction <= 1.0)) {
    throw ParameterError("max_escape_fraction must lie in [0, 1]");
  }
}

const Observable& EnsembleStats::get(std::string_view name) const {
  for (const Observable& o : observables) {
    if (o.name == name) return o;
  }
  throw ParameterError("EnsembleStats: no observable named '" + std::string(name) + "'");
}

std::string EnsembleStats::to_csv() const {
  std::string out = "name,value,stderr\n";
  for (const Observable& o : observables) {
    out += o.name + "," + csv::number(o.value) + "," + csv::number(o.stderr_) + "\n";
  }
  return out;
}

std::string EnsembleStats::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["n_traj"] = n_traj;
  j["n_escaped"] = n_escaped;
  auto& obs = j["observables"];
  obs = nlohmann::ordered_json::object();
  for (const Observable& o : observables) obs[o.name] = {{"value", o.value}, {"stderr", o.stderr_}};
  auto& esc = j["escapes"];
  esc = nlohmann::ordered_json::array();
  for (const EscapeEvent& e : escapes) esc.push_back({{"trajectory", e.trajectory}, {"time", e.time}});
  return j.dump(2) + "\n";
}

Eigen::Vector4d drift_two_mode(const PhasePoint& x, const OpoParams& p) {
  const double h = 0.5 * p.g2;
  const double r1 = x.r1_sq();
  const double r2 = x.r2_sq();
  return p.gamma * Eigen::Vector4d{-x.x1 + p.mu * x.x2 - h * x.x1 * r2, -x.y1 - p.mu * x.y2 - h * x.y1 * r2,
                                   -x.x2 + p.mu * x.x1 - h * x.x2 * r1, -x.y2 - p.mu * x.y1 - h * x.y2 * r1};
}

NoiseMatrix noise_matrix(const PhasePoint& x, const OpoParams& p, bool mult_noise) {
  NoiseMatrix b = NoiseMatrix::Zero();
  b.leftCols<4>().setIdentity();
  if (mult_noise) {
    const double k = p.g() / std::numbers::sqrt2;
    b(0, 4) = k * x.x2;
    b(0, 5) = k * x.y2;
    b(1, 4) = -k * x.y2;
    b(1, 5) = k * x.x2;
    b(2, 4) = k * x.x1;
    b(2, 5) = k * x.y1;
    b(3, 4) = -k * x.y1;
    b(3, 5) = k * x.x1;
  }
  return std::sqrt(2.0 * p.gamma) * b;
}

namespace {

using Complex = std::complex<double>;

constexpr std::size_t kFirst = 4;
constexpr std::size_t kSecond = 10;
constexpr std::size_t kBase = kFirst + kSecond;

constexpr std::size_t pair_index(std::size_t i, std::size_t j) {
  // upper triangle of a 4x4, row-major
  if (i > j) std::swap(i, j);
  constexpr std::array<std::size_t, 4> row_start{0, 4, 7, 9};
  return row_start[i] + (j - i);
}

struct Schedule {
  long steps;
  long burn_steps;
  long sample_every;
  double dt;
  int substeps;
  double sub_scale;  ///< sqrt(dt / substeps)
};

Schedule make_schedule(const IntegratorConfig& cfg) {
  cfg.validate();
  Schedule s{};
  s.dt = cfg.dt;
  s.steps = std::lround(cfg.t_end / cfg.dt);
  s.burn_steps = std::lround(cfg.burn_in / cfg.dt);
  s.sample_every = std::max(1L, std::lround(cfg.sample_interval / cfg.dt));
  s.substeps = cfg.noise_substeps;
  s.sub_scale = std::sqrt(cfg.dt / cfg.noise_substeps);
  if (s.steps <= s.burn_steps) throw ParameterError("no steps left after burn-in");
  return s;
}

struct TrajectoryResult {
  std::vector<double> sums;      ///< first/second quadrature moments then extras
  std::array<double, 2> final{};  ///< x-minus and its square at t_end
  long samples = 0;
  bool escaped = false;
  double escape_time = 0.0;
};

/// Accumulates one real quadrature sample (or real parts for positive-P).
template <class Quads>
void accumulate(TrajectoryResult& r, const Quads& q) {
  for (std::size_t i = 0; i < 4; ++i) {
    r.sums[i] += std::real(q[i]);
    for (std::size_t j = i; j < 4; ++j) r.sums[kFirst + pair_index(i, j)] += std::real(q[i] * q[j]);
  }
}

template <class Quads>
void record_final(TrajectoryResult& r, const Quads& q) {
  const auto xm = (q[0] - q[2]) / std::numbers::sqrt2;
  r.final = {std::real(xm), std::real(xm * xm)};
}

// Turns averaged sums into observables in the order of observable_names().
// Positive-P sums are normally ordered; adding 1 gives symmetric variances.
std::vector<double> derive(const std::vector<double>& mean, const std::array<double, 2>& final_mean,
                           std::size_t n_extra, bool positive_p) {
  auto m1 = [&](std::size_t i) { return mean[i]; };
  auto cov = [&](std::size_t i, std::size_t j) { return mean[kFirst + pair_index(i, j)] - m1(i) * m1(j); };
  const std::array<double, 4> var{cov(0, 0), cov(1, 1), cov(2, 2), cov(3, 3)};
  const double c_x1x2 = cov(0, 2);
  const double c_y1y2 = cov(1, 3);
  const std::array<double, 4> epr{0.5 * (var[0] + var[2]) + c_x1x2, 0.5 * (var[0] + var[2]) - c_x1x2,
                                  0.5 * (var[1] + var[3]) + c_y1y2, 0.5 * (var[1] + var[3]) - c_y1y2};
  const double final_var = final_mean[1] - final_mean[0] * final_mean[0];

  std::vector<double> out;
  for (std::size_t i = 0; i < 4; ++i) out.push_back(m1(i));
  const double shift = positive_p ? 1.0 : 0.0;
  for (double v : var) out.push_back(v + shift);
  out.push_back(c_x1x2);
  out.push_back(c_y1y2);
  out.push_back(cov(0, 3));
  out.push_back(cov(0, 1));
  for (double v : epr) out.push_back(v + shift);
  out.push_back(final_var + shift);
  if (positive_p) {
    for (double v : var) out.push_back(v);
    for (double v : epr) out.push_back(v);
    out.push_back(final_var);
  }
  for (std::size_t e = 0; e < n_extra; ++e) out.push_back(mean[kBase + e]);
  return out;
}

std::vector<std::string> observable_names(const std::vector<std::string>& extras, bool positive_p) {
  std::vector<std::string> names{"mean_x1", "mean_y1", "mean_x2", "mean_y2", "var_x1", "var_y1", "var_x2",
                                 "var_y2",  "cov_x1x2", "cov_y1y2", "cov_x1y2", "cov_x1y1", "var_xp", "var_xm",
                                 "var_yp",  "var_ym", "var_xm_final"};
  if (positive_p) {
    for (const char* n : {"nvar_x1", "nvar_y1", "nvar_x2", "nvar_y2", "nvar_xp", "nvar_xm", "nvar_yp", "nvar_ym",
                          "nvar_xm_final"}) {
      names.emplace_back(n);
    }
  }
  names.insert(names.end(), extras.begin(), extras.end());
  return names;
}

template <class RunOne>
EnsembleStats run_ensemble(std::string model, const IntegratorConfig& cfg, const std::vector<std::string>& extras,
                           bool positive_p, RunOne&& run_one) {
  std::vector<TrajectoryResult> results(cfg.n_traj);
  constexpr std::size_t kChunk = 16;
  const std::size_t chunks = (cfg.n_traj + kChunk - 1) / kChunk;
  parallel_for(
      chunks,
      [&](std::size_t c) {
        const std::size_t end = std::min(cfg.n_traj, (c + 1) * kChunk);
        for (std::size_t t = c * kChunk; t < end; ++t) results[t] = run_one(t);
      },
      worker_count(cfg.threads));

  EnsembleStats stats;
  stats.model = std::move(model);
  stats.n_traj = cfg.n_traj;
  std::vector<std::size_t> alive;
  for (std::size_t t = 0; t < results.size(); ++t) {
    if (results[t].escaped) {
      stats.escapes.push_back({t, results[t].escape_time});
    } else {
      alive.push_back(t);
    }
  }
  stats.n_escaped = stats.escapes.size();
  const double escape_fraction = static_cast<double>(stats.n_escaped) / static_cast<double>(cfg.n_traj);
  if (escape_fraction > cfg.max_escape_fraction) {
    throw EscapeRateError(stats.model + ": " + std::to_string(stats.n_escaped) + " of " + std::to_string(cfg.n_traj) +
                          " trajectories escaped");
  }
  const std::size_t n_batches = std::min(cfg.n_batches, alive.size());
  if (n_batches < 2) throw NumericalError(stats.model + ": fewer than two surviving trajectories");

  const std::size_t width = kBase + extras.size();
  auto reduce = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> sum(width, 0.0);
    std::array<double, 2> fin{};
    long samples = 0;
    for (std::size_t k = lo; k < hi; ++k) {
      const TrajectoryResult& r = results[alive[k]];
      for (std::size_t i = 0; i < width; ++i) sum[i] += r.sums[i];
      fin[0] += r.final[0];
      fin[1] += r.final[1];
      samples += r.samples;
    }
    for (double& v : sum) v /= static_cast<double>(samples);
    fin[0] /= static_cast<double>(hi - lo);
    fin[1] /= static_cast<double>(hi - lo);
    return derive(sum, fin, extras.size(), positive_p);
  };

  const std::vector<double> total = reduce(0, alive.size());
  std::vector<std::vector<double>> batches;
  batches.reserve(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) {
    batches.push_back(reduce(b * alive.size() / n_batches, (b + 1) * alive.size() / n_batches));
  }

  const auto names = observable_names(extras, positive_p);
  for (std::size_t i = 0; i < names.size(); ++i) {
    double mean = 0.0;
    for (const auto& b : batches) mean += b[i];
    mean /= static_cast<double>(n_batches);
    double ss = 0.0;
    for (const auto& b : batches) ss += (b[i] - mean) * (b[i] - mean);
    const double se = std::sqrt(ss / (static_cast<double>(n_batches) * (n_batches - 1)));
    stats.observables.push_back({names[i], total[i], se});
  }
  return stats;
}

// --- two-mode adiabatic model ----------------------------------------------

struct TwoModeRun {
  const OpoParams& params;
  const Schedule& schedule;
  const IntegratorConfig& cfg;
  const TwoModeOptions& options;

  TrajectoryResult operator()(std::size_t index, PhasePoint* endpoint = nullptr) const {
    NormalStream rng(cfg.seed, index);
    TrajectoryResult r;
    r.sums.assign(kBase, 0.0);
    std::array<double, 4> q{};
    if (options.initial) {
      q = {options.initial->x1, options.initial->y1, options.initial->x2, options.initial->y2};
    } else {
      for (double& v : q) v = rng.next();
    }
    const double mu = params.mu;
    const double h = 0.5 * params.g2;
    const double g = params.g();
    const double add = options.additive_noise ? std::numbers::sqrt2 : 0.0;
    const bool mult = options.mult_noise && options.additive_noise;
    const double dt = schedule.dt;
    const double bound_sq = 4.0 * cfg.escape_bound * cfg.escape_bound;  // |alpha| = r / 2

    for (long step = 1; step <= schedule.steps; ++step) {
      const double r1 = q[0] * q[0] + q[1] * q[1];
      const double r2 = q[2] * q[2] + q[3] * q[3];
      std::array<double, 4> next{q[0] + dt * (-q[0] + mu * q[2] - h * q[0] * r2),
                                 q[1] + dt * (-q[1] - mu * q[3] - h * q[1] * r2),
                                 q[2] + dt * (-q[2] + mu * q[0] - h * q[2] * r1),
                                 q[3] + dt * (-q[3] - mu * q[1] - h * q[3] * r1)};
      if (options.additive_noise) {
        std::array<double, 6> dw{};
        for (int sub = 0; sub < schedule.substeps; ++sub) {
          for (double& w : dw) w += schedule.sub_scale * rng.next();
        }
        for (std::size_t i = 0; i < 4; ++i) next[i] += add * dw[i];
        if (mult) {
          next[0] += g * (q[2] * dw[4] + q[3] * dw[5]);
          next[1] += g * (-q[3] * dw[4] + q[2] * dw[5]);
          next[2] += g * (q[0] * dw[4] + q[1] * dw[5]);
          next[3] += g * (-q[1] * dw[4] + q[0] * dw[5]);
        }
      }
      q = next;
      const double big = std::max(q[0] * q[0] + q[1] * q[1], q[2] * q[2] + q[3] * q[3]);
      if (!(big <= bound_sq)) {
        r.escaped = true;
        r.escape_time = step * dt;
        break;
      }
      if (step > schedule.burn_steps && step % schedule.sample_every == 0) {
        accumulate(r, q);
        ++r.samples;
      }
    }
    record_final(r, q);
    if (endpoint) *endpoint = PhasePoint{q[0], q[1], q[2], q[3]};
    return r;
  }
};

// --- three-mode Wigner model ------------------------------------------------

struct PumpScales {
  double chi;
  double pump;
  double gamma_r;
};

PumpScales pump_scales(const OpoParams& p) {
  // Time in units of 1/gamma.
  const double gamma_r = p.gamma_r();
  const double chi = p.g() * std::sqrt(2.0 * gamma_r);
  if (chi == 0.0) {
    if (p.mu != 0.0) throw ParameterError("mu > 0 requires g2 > 0 for pump-resolved models");
    return {0.0, 0.0, gamma_r};
  }
  return {chi, p.mu * gamma_r / chi, gamma_r};
}

}  // namespace

EnsembleStats simulate_two_mode(const OpoParams& params, const IntegratorConfig& cfg, bool mult_noise) {
  TwoModeOptions options;
  options.mult_noise = mult_noise;
  return simulate_two_mode(params, cfg, options);
}

EnsembleStats simulate_two_mode(const OpoParams& params, const IntegratorConfig& cfg, const TwoModeOptions& options) {
  params.validate();
  const Schedule schedule = make_schedule(cfg);
  const TwoModeRun run{params, schedule, cfg, options};
  std::string model = options.mult_noise ? "two_mode_mult_noise" : "two_mode_additive_noise";
  if (!options.additive_noise) model = "two_mode_deterministic";
  return run_ensemble(std::move(model), cfg, {}, false, [&](std::size_t t) { return run(t); });
}

PhasePoint two_mode_endpoint(const OpoParams& params, const IntegratorConfig& cfg, const TwoModeOptions& options,
                             std::size_t trajectory) {
  params.validate();
  const Schedule schedule = make_schedule(cfg);
  const TwoModeRun run{params, schedule, cfg, options};
  PhasePoint end;
  const TrajectoryResult r = run(trajectory, &end);
  if (r.escaped) throw NumericalError("two_mode_endpoint: trajectory escaped");
  return end;
}

EnsembleStats simulate_three_mode(const OpoParams& params, const IntegratorConfig& cfg) {
  params.validate();
  if (params.gamma_r() < 2.0) throw ParameterError("three-mode comparison requires gamma0 / gamma >= 2");
  if (cfg.dt * params.gamma_r() > 0.1 + 1e-12) throw ParameterError("three-mode integration requires dt <= 0.1 / gamma0");
  const Schedule schedule = make_schedule(cfg);
  const PumpScales ps = pump_scales(params);

  auto run = [&](std::size_t index) {
    NormalStream rng(cfg.seed, index);
    TrajectoryResult r;
    r.sums.assign(kBase + 3, 0.0);
    auto vacuum = [&] {
      const double re = 0.5 * rng.next();
      const double im = 0.5 * rng.next();
      return Complex{re, im};
    };
    Complex a0 = ps.pump / ps.gamma_r + vacuum();
    Complex a1 = vacuum();
    Complex a2 = vacuum();
    const double dt = schedule.dt;
    const double pump_noise = std::sqrt(ps.gamma_r);
    const double root_half = std::numbers::sqrt2 / 2.0;
    const double bound_sq = cfg.escape_bound * cfg.escape_bound;
    std::array<double, 4> q{};

    for (long step = 1; step <= schedule.steps; ++step) {
      std::array<double, 6> dw{};
      for (int sub = 0; sub < schedule.substeps; ++sub) {
        for (double& w : dw) w += schedule.sub_scale * rng.next();
      }
      const Complex z0{root_half * dw[0], root_half * dw[1]};
      const Complex z1{root_half * dw[2], root_half * dw[3]};
      const Complex z2{root_half * dw[4], root_half * dw[5]};
      const Complex n0 = a0 + dt * (-ps.gamma_r * a0 + ps.pump - ps.chi * a1 * a2) + pump_noise * z0;
      const Complex n1 = a1 + dt * (-a1 + ps.chi * a0 * std::conj(a2)) + z1;
      const Complex n2 = a2 + dt * (-a2 + ps.chi * a0 * std::conj(a1)) + z2;
      a0 = n0;
      a1 = n1;
      a2 = n2;
      const double big = std::max({std::norm(a0), std::norm(a1), std::norm(a2)});
      if (!(big <= bound_sq)) {
        r.escaped = true;
        r.escape_time = step * dt;
        break;
      }
      if (step > schedule.burn_steps && step % schedule.sample_every == 0) {
        q = {2.0 * a1.real(), 2.0 * a1.imag(), 2.0 * a2.real(), 2.0 * a2.imag()};
        accumulate(r, q);
        r.sums[kBase] += a0.real();
        r.sums[kBase + 1] += a0.imag();
        r.sums[kBase + 2] += (a1 * a2).real();
        ++r.samples;
      }
    }
    q = {2.0 * a1.real(), 2.0 * a1.imag(), 2.0 * a2.real(), 2.0 * a2.imag()};
    record_final(r, q);
    return r;
  };
  return run_ensemble("three_mode_wigner", cfg, {"re_alpha0", "im_alpha0", "re_alpha1alpha2"}, false, run);
}

EnsembleStats simulate_positive_p(const OpoParams& params, const IntegratorConfig& cfg) {
  params.validate();
  if (cfg.dt * params.gamma_r() > 0.1 + 1e-12) throw ParameterError("positive-P integration requires dt <= 0.1 / gamma0");
  const Schedule schedule = make_schedule(cfg);
  const PumpScales ps = pump_scales(params);

  auto run = [&](std::size_t index) {
    NormalStream rng(cfg.seed, index);
    TrajectoryResult r;
    r.sums.assign(kBase + 3, 0.0);
    Complex a0 = ps.pump / ps.gamma_r;
    Complex b0 = a0;
    Complex a1{}, b1{}, a2{}, b2{};
    const double dt = schedule.dt;
    const double bound_sq = cfg.escape_bound * cfg.escape_bound;
    const Complex i_unit{0.0, 1.0};

    for (long step = 1; step <= schedule.steps; ++step) {
      std::array<double, 4> dw{};
      for (int sub = 0; sub < schedule.substeps; ++sub) {
        for (double& w : dw) w += schedule.sub_scale * rng.next();
      }
      const Complex sa = std::sqrt(0.5 * ps.chi * a0);
      const Complex sb = std::sqrt(0.5 * ps.chi * b0);
      const Complex na0 = a0 + dt * (ps.pump - ps.gamma_r * a0 - ps.chi * a1 * a2);
      const Complex nb0 = b0 + dt * (ps.pump - ps.gamma_r * b0 - ps.chi * b1 * b2);
      const Complex na1 = a1 + dt * (-a1 + ps.chi * a0 * b2) + sa * Complex{dw[0], dw[1]};
      const Complex na2 = a2 + dt * (-a2 + ps.chi * a0 * b1) + sa * Complex{dw[0], -dw[1]};
      const Complex nb1 = b1 + dt * (-b1 + ps.chi * b0 * a2) + sb * Complex{dw[2], dw[3]};
      const Complex nb2 = b2 + dt * (-b2 + ps.chi * b0 * a1) + sb * Complex{dw[2], -dw[3]};
      a0 = na0;
      b0 = nb0;
      a1 = na1;
      a2 = na2;
      b1 = nb1;
      b2 = nb2;
      const double big = std::max({std::norm(a0), std::norm(b0), std::norm(a1), std::norm(a2), std::norm(b1),
                                   std::norm(b2)});
      if (!(big <= bound_sq)) {
        r.escaped = true;
        r.escape_time = step * dt;
        break;
      }
      if (step > schedule.burn_steps && step % schedule.sample_every == 0) {
        const std::array<Complex, 4> q{a1 + b1, -i_unit * (a1 - b1), a2 + b2, -i_unit * (a2 - b2)};
        accumulate(r, q);
        r.sums[kBase] += a0.real();
        r.sums[kBase + 1] += a0.imag();
        r.sums[kBase + 2] += (a1 * a2).real();
        ++r.samples;
      }
    }
    const std::array<Complex, 4> q{a1 + b1, -i_unit * (a1 - b1), a2 + b2, -i_unit * (a2 - b2)};
    record_final(r, q);
    return r;
  };
  return run_ensemble("positive_p", cfg, {"re_alpha0", "im_alpha0", "re_alpha1alpha2"}, true, run);
}

}  // namespace opo
