#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opo/model.hpp"
#include "opo/sde.hpp"
#include "opo/wigner.hpp"

namespace opo::cli {

enum class ExitCode : int {
  Ok = 0,
  ConfigError = 2,
  NumericalFailure = 3,
  PhysicsFailure = 4,
};

enum class SdeModel { TwoMode, ThreeMode, PositiveP };
std::string_view to_string(SdeModel model);
SdeModel parse_sde_model(std::string_view text);

MarginalMethod parse_marginal_method(std::string_view text);

/// Everything one subcommand needs. Built from caption defaults, then the
/// config file, then flags (later sources win).
struct RunConfig {
  std::string subcommand;
  OpoParams params;  ///< mu is taken from mu_grid
  IntegratorConfig integrator;
  std::vector<double> mu_grid;
  std::optional<QuarticConvention> convention;  ///< unset: sweeps emit both
  std::filesystem::path out_dir = "out";
  bool mult_noise = true;
  bool plot_script = false;

  bool sde_rows = false;          ///< variance-sweep: append SDE rows
  double extent = 15.0;           ///< slice/marginal: grid spans [-extent, extent]
  std::size_t points = 121;       ///< slice/marginal: points per axis
  MarginalMethod method = MarginalMethod::Numeric;
  std::size_t samples = 100;      ///< potential-check: random points per mu
  double sample_box = 3.0;        ///< potential-check: points in [-box, box]^4
  SdeModel model = SdeModel::TwoMode;

  /// Throws ParameterError when the combination cannot run.
  void validate() const;
};

/// Defaults for a subcommand: g2 = 0.01, gamma0 = 10 gamma, and the mu values
/// of the corresponding figure.
RunConfig default_config(std::string_view subcommand);

/// {lo, lo + step, ..., hi} built as lo + k step without accumulated drift.
std::vector<double> mu_range(double lo, double hi, double step);

/// Shortest round-trip representation, used inside file names.
std::string short_number(double value);

struct OutputFile {
  std::filesystem::path name;  ///< relative to RunConfig::out_dir
  std::string contents;
};

struct CommandResult {
  std::vector<OutputFile> files;
  ExitCode code = ExitCode::Ok;
  std::string message;  ///< printed to stderr when code != Ok
};

CommandResult cmd_variance_sweep(const RunConfig& cfg);
CommandResult cmd_sde_compare(const RunConfig& cfg);
CommandResult cmd_wigner_slice(const RunConfig& cfg);
CommandResult cmd_marginal(const RunConfig& cfg);
CommandResult cmd_potential_check(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);

/// Dispatches on cfg.subcommand.
CommandResult execute(const RunConfig& cfg);

/// Writes every file of a result under out_dir. Nothing is written for a
/// result whose files list is empty.
void write_outputs(const RunConfig& cfg, const CommandResult& result);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opo::cli
