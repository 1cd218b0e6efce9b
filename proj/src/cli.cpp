#include "opo/cli.hpp"

#include <algorithm>
#include <exception>
#include <ostream>

#include <CLI11.hpp>

#include "opo/csv.hpp"
#include "opo/error.hpp"
#include "opo/linearized.hpp"
#include "opo/moments.hpp"
#include "opo/potential.hpp"
#include "opo/rng.hpp"

namespace opo::cli {

namespace {

OpoParams params_at(const RunConfig& cfg, double mu) {
  OpoParams p = cfg.params;
  p.mu = mu;
  p.validate();
  return p;
}

std::string mu_tag(double mu) { return "mu" + short_number(mu); }

std::string grid_plot_script(const std::vector<std::string>& files, std::string_view xlabel,
                             std::string_view ylabel) {
  std::string s = "# gnuplot\nset datafile separator ','\nset view map\nset xlabel '";
  s.append(xlabel).append("'\nset ylabel '").append(ylabel).append("'\n");
  for (const std::string& f : files) {
    s += "set title '" + f + "'\nsplot '" + f + "' every ::1 using 1:2:3 with pm3d notitle\npause -1\n";
  }
  return s;
}

double max_se(const EnsembleStats& s) {
  double m = 0.0;
  for (const char* n : {"var_xp", "var_xm", "var_yp", "var_ym"}) m = std::max(m, s.stderr_of(n));
  return m;
}

EnsembleStats run_model(SdeModel model, const OpoParams& p, const RunConfig& cfg) {
  switch (model) {
    case SdeModel::TwoMode:
      return simulate_two_mode(p, cfg.integrator, cfg.mult_noise);
    case SdeModel::ThreeMode:
      return simulate_three_mode(p, cfg.integrator);
    case SdeModel::PositiveP:
      return simulate_positive_p(p, cfg.integrator);
  }
  throw ParameterError("unknown model");
}

}  // namespace

CommandResult cmd_variance_sweep(const RunConfig& cfg) {
  cfg.validate();
  SweepOptions opts;
  opts.quadrature = cfg.convention
                        ? std::vector<QuarticConvention>{*cfg.convention}
                        : std::vector<QuarticConvention>{QuarticConvention::AppendixB, QuarticConvention::AsPrinted};
  VarianceTable table = variance_sweep(cfg.mu_grid, cfg.params.g2, opts);
  if (cfg.sde_rows) {
    for (double mu : cfg.mu_grid) {
      const EnsembleStats s = simulate_two_mode(params_at(cfg, mu), cfg.integrator, cfg.mult_noise);
      table.rows.push_back({mu, std::string(to_string(VarianceSource::Sde)), s.value("var_xp"), s.value("var_xm"),
                            s.value("var_yp"), s.value("var_ym"), max_se(s)});
    }
    table.sort();
  }
  CommandResult r;
  r.files.push_back({"variance_table.csv", table.to_csv()});
  if (cfg.plot_script) {
    std::string s =
        "# gnuplot\nset datafile separator ','\nset key left top\nset xlabel 'mu'\n"
        "set multiplot layout 1,2\nset ylabel '<x+^2>'\nset logscale y\n"
        "plot for [src in 'linearized quadrature_appendixB quadrature_asPrinted sde'] 'variance_table.csv' "
        "using 1:(strcol(2) eq src ? $3 : 1/0) with linespoints title src\n"
        "unset logscale y\nset ylabel '<x-^2>'\n"
        "plot for [src in 'linearized quadrature_appendixB quadrature_asPrinted sde'] 'variance_table.csv' "
        "using 1:(strcol(2) eq src ? $4 : 1/0) with linespoints title src\nunset multiplot\npause -1\n";
    r.files.push_back({"variance_table.gp", std::move(s)});
  }
  return r;
}

CommandResult cmd_sde_compare(const RunConfig& cfg) {
  cfg.validate();
  CommandResult r;
  std::string out =
      "mu,positive_p,positive_p_se,mult_noise,mult_noise_se,no_mult_noise,no_mult_noise_se,positive_p_escaped,"
      "status\n";
  for (double mu : cfg.mu_grid) {
    const OpoParams p = params_at(cfg, mu);
    std::string row = csv::number(mu);
    std::string status = "ok";
    std::string escaped = "0";
    auto add = [&](auto&& simulate, bool count_escapes) {
      try {
        const EnsembleStats s = simulate();
        row += "," + csv::number(s.value("var_xm")) + "," + csv::number(s.stderr_of("var_xm"));
        if (count_escapes) escaped = std::to_string(s.n_escaped);
      } catch (const EscapeRateError& e) {
        row += ",escape,escape";
        status = "escape_rate_exceeded";
        r.code = ExitCode::NumericalFailure;
        r.message += std::string(e.what()) + "\n";
      }
    };
    add([&] { return simulate_positive_p(p, cfg.integrator); }, true);
    add([&] { return simulate_two_mode(p, cfg.integrator, true); }, false);
    add([&] { return simulate_two_mode(p, cfg.integrator, false); }, false);
    out += row + "," + escaped + "," + status + "\n";
  }
  r.files.push_back({"sde_compare.csv", std::move(out)});
  if (cfg.plot_script) {
    r.files.push_back({"sde_compare.gp",
                       "# gnuplot\nset datafile separator ','\nset key autotitle columnhead\nset xlabel 'mu'\n"
                       "set ylabel '<x-^2>'\n"
                       "plot 'sde_compare.csv' using 1:2:3 with yerrorlines, '' using 1:4:5 with yerrorlines, "
                       "'' using 1:6:7 with yerrorlines\npause -1\n"});
  }
  return r;
}

CommandResult cmd_wigner_slice(const RunConfig& cfg) {
  cfg.validate();
  const QuarticConvention conv = cfg.convention.value_or(QuarticConvention::AppendixB);
  const std::vector<double> axis = linspace(-cfg.extent, cfg.extent, cfg.points);
  CommandResult r;
  std::vector<std::string> names;
  for (double mu : cfg.mu_grid) {
    const WignerField field = WignerField::normalize(params_at(cfg, mu), conv);
    const Grid2D g = conditional_slice(field, axis, axis);
    names.push_back("slice_" + mu_tag(mu) + ".csv");
    r.files.push_back({names.back(), csv::grid(g, "x1", "x2")});
  }
  if (cfg.plot_script) r.files.push_back({"slice.gp", grid_plot_script(names, "x1", "x2")});
  return r;
}

CommandResult cmd_marginal(const RunConfig& cfg) {
  cfg.validate();
  const QuarticConvention conv = cfg.convention.value_or(QuarticConvention::AppendixB);
  const std::vector<double> axis = linspace(-cfg.extent, cfg.extent, cfg.points);
  CommandResult r;
  std::vector<std::string> names;
  for (double mu : cfg.mu_grid) {
    const WignerField field = WignerField::normalize(params_at(cfg, mu), conv);
    const Grid2D g = marginal_grid(field, axis, axis, cfg.method);
    names.push_back("marginal_" + mu_tag(mu) + ".csv");
    r.files.push_back({names.back(), csv::grid(g, "x2", "y2")});
  }
  if (cfg.plot_script) r.files.push_back({"marginal.gp", grid_plot_script(names, "x2", "y2")});
  return r;
}

CommandResult cmd_potential_check(const RunConfig& cfg) {
  cfg.validate();
  constexpr double kApproxLimit = 1e-8;
  constexpr double kExactFloor = 1e-6;
  const PhasePoint documented{1.0, 1.0, 2.0, 0.0};

  std::vector<PhasePoint> points{documented};
  NormalStream rng(cfg.integrator.seed, 0);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Eigen::Vector4d v;
    for (double& c : v) c = cfg.sample_box * (2.0 * rng.uniform() - 1.0);
    points.push_back(PhasePoint::from(v));
  }

  CommandResult r;
  std::string out = "mu,x1,y1,x2,y2,field,max_curl\n";
  for (double mu : cfg.mu_grid) {
    const OpoParams p = params_at(cfg, mu);
    const std::vector<std::pair<std::string, VectorField4>> fields{
        {"exact", exact_field(p)},
        {"exact_cross", exact_field(p, ExactZVariant::CrossMode)},
        {"approx", approx_field(p)}};
    std::vector<double> worst(fields.size(), 0.0);
    for (const PhasePoint& x : points) {
      for (std::size_t f = 0; f < fields.size(); ++f) {
        const double c = max_curl(fields[f].second, x);
        worst[f] = std::max(worst[f], c);
        out += csv::number(mu) + "," + csv::number(x.x1) + "," + csv::number(x.y1) + "," + csv::number(x.x2) + "," +
               csv::number(x.y2) + "," + fields[f].first + "," + csv::number(c) + "\n";
      }
    }
    const bool approx_ok = worst[2] < kApproxLimit;
    // Without coupling both exact variants reduce to a symmetric linear field.
    const bool exact_ok = p.g2 > 0.0 ? worst[0] > kExactFloor : worst[0] < kApproxLimit;
    if (!approx_ok || !exact_ok) {
      r.code = ExitCode::PhysicsFailure;
      r.message += "mu=" + short_number(mu) + ": approx max curl " + csv::number(worst[2]) + ", exact max curl " +
                   csv::number(worst[0]) + "\n";
    }
  }
  r.files.push_back({"curl_report.csv", std::move(out)});
  return r;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  cfg.validate();
  CommandResult r;
  for (double mu : cfg.mu_grid) {
    const EnsembleStats s = run_model(cfg.model, params_at(cfg, mu), cfg);
    const std::string stem = "simulate_" + std::string(to_string(cfg.model)) + "_" + mu_tag(mu);
    r.files.push_back({stem + ".csv", s.to_csv()});
    r.files.push_back({stem + ".json", s.to_json()});
  }
  return r;
}

CommandResult execute(const RunConfig& cfg) {
  const std::string& c = cfg.subcommand;
  if (c == "variance-sweep") return cmd_variance_sweep(cfg);
  if (c == "sde-compare") return cmd_sde_compare(cfg);
  if (c == "wigner-slice") return cmd_wigner_slice(cfg);
  if (c == "marginal") return cmd_marginal(cfg);
  if (c == "potential-check") return cmd_potential_check(cfg);
  if (c == "simulate") return cmd_simulate(cfg);
  throw ParameterError("unknown subcommand '" + c + "'");
}

void write_outputs(const RunConfig& cfg, const CommandResult& result) {
  for (const OutputFile& f : result.files) csv::write_file(cfg.out_dir / f.name, f.contents);
}

namespace {

struct FlagValues {
  std::vector<double> mu;
  double g2 = 0.0;
  double gamma0 = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string convention;
  std::size_t traj = 0;
  double dt = 0.0;
  double tend = 0.0;
  double burnin = 0.0;
  bool no_mult_noise = false;
  bool plot_script = false;
  bool sde = false;
  double extent = 0.0;
  std::size_t points = 0;
  std::string method;
  std::size_t samples = 0;
  std::string model;
};

struct SubcommandOptions {
  CLI::App* app = nullptr;
  FlagValues values;
};

void add_common_options(CLI::App* sub, FlagValues& v) {
  sub->add_option("--mu", v.mu, "pump values (comma separated, ascending)")->delimiter(',');
  sub->add_option("--g2", v.g2, "nonlinear coupling g^2 (default 0.01)");
  sub->add_option("--gamma0", v.gamma0, "pump damping in units of gamma (default 10)");
  sub->add_option("--seed", v.seed, "64-bit seed for stochastic runs");
  sub->add_option("--out", v.out, "output directory (default ./out)");
  sub->add_option("--convention", v.convention, "quartic convention: appendixB or asPrinted");
  sub->add_option("--traj", v.traj, "number of trajectories (default 10000)");
  sub->add_option("--dt", v.dt, "time step in units of 1/gamma (default 1e-3)");
  sub->add_option("--tend", v.tend, "final time in units of 1/gamma (default 50)");
  sub->add_option("--burnin", v.burnin, "discarded initial time (default 20)");
  sub->add_flag("--no-mult-noise", v.no_mult_noise, "drop the multiplicative noise of the two-mode equations");
  sub->add_flag("--plot-script", v.plot_script, "also write a gnuplot script");
}

RunConfig resolve(const std::string& name, const CLI::App& sub, const FlagValues& v) {
  RunConfig cfg = default_config(name);
  auto given = [&](const char* flag) {
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--mu")) cfg.mu_grid = v.mu;
  if (given("--g2")) cfg.params.g2 = v.g2;
  if (given("--gamma0")) cfg.params.gamma0 = v.gamma0 * cfg.params.gamma;
  if (given("--seed")) cfg.integrator.seed = v.seed;
  if (given("--out")) cfg.out_dir = v.out;
  if (given("--convention")) cfg.convention = parse_convention(v.convention);
  if (given("--traj")) cfg.integrator.n_traj = v.traj;
  if (given("--dt")) cfg.integrator.dt = v.dt;
  if (given("--tend")) cfg.integrator.t_end = v.tend;
  if (given("--burnin")) cfg.integrator.burn_in = v.burnin;
  if (given("--no-mult-noise")) cfg.mult_noise = !v.no_mult_noise;
  if (given("--plot-script")) cfg.plot_script = v.plot_script;
  if (given("--sde")) cfg.sde_rows = v.sde;
  if (given("--extent")) cfg.extent = v.extent;
  if (given("--points")) cfg.points = v.points;
  if (given("--method")) cfg.method = parse_marginal_method(v.method);
  if (given("--samples")) cfg.samples = v.samples;
  if (given("--model")) cfg.model = parse_sde_model(v.model);
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state statistics of the nondegenerate OPO", "opo_wigner"};
  app.set_config("--config", "", "TOML-style config file; [subcommand] sections hold its options");
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands{
      {"variance-sweep", "EPR variances over a pump grid (linearized and quadrature)"},
      {"sde-compare", "squeezed variance from positive-P and two-mode stochastic ensembles"},
      {"wigner-slice", "W(x1, 0, x2, 0) grids"},
      {"marginal", "mode-2 marginal grids"},
      {"potential-check", "curl report for the exact and mean-diffusion potential fields"},
      {"simulate", "ensemble statistics of one stochastic model"},
  };
  std::vector<SubcommandOptions> subs(commands.size());
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, commands[i].second);
    FlagValues& v = subs[i].values;
    subs[i].app = sub;
    add_common_options(sub, v);
    const std::string& name = commands[i].first;
    if (name == "variance-sweep") sub->add_flag("--sde", v.sde, "append two-mode SDE rows");
    if (name == "wigner-slice" || name == "marginal") {
      sub->add_option("--extent", v.extent, "grid half-width");
      sub->add_option("--points", v.points, "points per axis");
    }
    if (name == "marginal") sub->add_option("--method", v.method, "numeric or closed-form");
    if (name == "potential-check") sub->add_option("--samples", v.samples, "random points per mu (default 100)");
    if (name == "simulate") sub->add_option("--model", v.model, "two-mode, three-mode or positive-p");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::ConfigError);
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i].app->parsed()) continue;
    RunConfig cfg;
    try {
      cfg = resolve(commands[i].first, *subs[i].app, subs[i].values);
      cfg.validate();
    } catch (const std::exception& e) {
      err << "config error: " << e.what() << "\n";
      return static_cast<int>(ExitCode::ConfigError);
    }
    try {
      const CommandResult result = execute(cfg);
      write_outputs(cfg, result);
      for (const OutputFile& f : result.files) out << (cfg.out_dir / f.name).string() << "\n";
      if (result.code != ExitCode::Ok) err << result.message;
      return static_cast<int>(result.code);
    } catch (const ParameterError& e) {
      err << "config error: " << e.what() << "\n";
      return static_cast<int>(ExitCode::ConfigError);
    } catch (const std::exception& e) {
      err << "numerical failure: " << e.what() << "\n";
      return static_cast<int>(ExitCode::NumericalFailure);
    }
  }
  return static_cast<int>(ExitCode::ConfigError);
}

}  // namespace opo::cli
