#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "opo/model.hpp"
#include "opo/phase_point.hpp"

namespace opo {

enum class Scheme { EulerMaruyama };

/// Time quantities are in units of 1/gamma.
struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 50.0;
  double burn_in = 20.0;
  std::size_t n_traj = 10000;
  std::uint64_t seed = 20240607;
  Scheme scheme = Scheme::EulerMaruyama;
  double sample_interval = 0.1;  ///< spacing of post-burn-in samples
  int noise_substeps = 1;        ///< Wiener sub-increments summed per step
  std::size_t n_batches = 100;   ///< trajectory batches for standard errors
  double escape_bound = 1e3;     ///< watchdog on any |alpha|
  double max_escape_fraction = 0.01;
  unsigned threads = 0;          ///< 0: hardware concurrency (env-capped)

  /// Throws ParameterError on inconsistent settings.
  void validate() const;
};

struct Observable {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
};

struct EscapeEvent {
  std::size_t trajectory;
  double time;
};

/// Ensemble statistics: averages over post-burn-in samples of every
/// surviving trajectory; standard errors from batch means over trajectories.
///
/// Quadrature observables: mean_{x1,y1,x2,y2}, var_{x1,y1,x2,y2},
/// cov_{x1x2,y1y2,x1y2,x1y1}, var_{xp,xm,yp,ym} (EPR), and var_xm_final
/// (ensemble-only at t_end). Positive-P runs report the normally ordered
/// versions as nvar_* and symmetric-order var_*; three-mode runs add
/// re_alpha0, im_alpha0, re_alpha1alpha2.
struct EnsembleStats {
  std::string model;
  std::vector<Observable> observables;
  std::size_t n_traj = 0;
  std::size_t n_escaped = 0;
  std::vector<EscapeEvent> escapes;

  [[nodiscard]] const Observable& get(std::string_view name) const;
  [[nodiscard]] double value(std::string_view name) const { return get(name).value; }
  [[nodiscard]] double stderr_of(std::string_view name) const { return get(name).stderr_; }

  /// name,value,stderr rows.
  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] std::string to_json() const;
};

/// A = gamma [-x1 + mu x2 - (g^2/2) x1 r2^2, -y1 - mu y2 - (g^2/2) y1 r2^2,
///            -x2 + mu x1 - (g^2/2) x2 r1^2, -y2 - mu y1 - (g^2/2) y2 r1^2].
Eigen::Vector4d drift_two_mode(const PhasePoint& x, const OpoParams& params);

using NoiseMatrix = Eigen::Matrix<double, 4, 6>;

/// B = sqrt(2 gamma) [I4 | M(X)]; the two multiplicative columns carry the
/// eliminated pump noise and are zeroed when mult_noise is false.
NoiseMatrix noise_matrix(const PhasePoint& x, const OpoParams& params, bool mult_noise = true);

struct TwoModeOptions {
  bool mult_noise = true;
  bool additive_noise = true;
  std::optional<PhasePoint> initial;  ///< default: vacuum sample
};

EnsembleStats simulate_two_mode(const OpoParams& params, const IntegratorConfig& cfg, bool mult_noise);
EnsembleStats simulate_two_mode(const OpoParams& params, const IntegratorConfig& cfg, const TwoModeOptions& options);

/// State of a single two-mode trajectory at t_end (no statistics).
PhasePoint two_mode_endpoint(const OpoParams& params, const IntegratorConfig& cfg, const TwoModeOptions& options,
                             std::size_t trajectory);

/// Three-mode truncated-Wigner trajectories without adiabatic elimination.
EnsembleStats simulate_three_mode(const OpoParams& params, const IntegratorConfig& cfg);

/// Six-amplitude positive-P trajectories (pump not eliminated).
EnsembleStats simulate_positive_p(const OpoParams& params, const IntegratorConfig& cfg);

}  // namespace opo
