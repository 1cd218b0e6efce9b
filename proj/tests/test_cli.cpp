#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "opo/cli.hpp"

namespace fs = std::filesystem;
using namespace opo;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("opo_cli_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "opo_wigner");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

}  // namespace

TEST_CASE("variance sweep output") {
  TempDir dir("sweep");
  const Outcome r = run_cli({"variance-sweep", "--mu", "0.5,1", "--out", dir.path.string()});
  REQUIRE(r.code == 0);
  const auto t = rows(slurp(dir.path / "variance_table.csv"));
  REQUIRE(t.size() == 7);
  CHECK(t[0] == std::vector<std::string>{"mu", "source", "vxp", "vxm", "vyp", "vym", "err"});
  CHECK(t[1][1] == "linearized");
  CHECK(std::stod(t[1][2]) == 2.0);
  CHECK(std::stod(t[1][3]) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(t[4][0] == "1");
  CHECK(t[4][1] == "linearized");
  CHECK(t[4][2] == "div");
  CHECK(t[4][5] == "div");
  CHECK(t[5][1] == "quadrature_appendixB");
  CHECK(std::isfinite(std::stod(t[5][2])));
  CHECK(t[6][1] == "quadrature_asPrinted");
}

TEST_CASE("reruns are byte identical") {
  TempDir a("rerun_a"), b("rerun_b");
  for (const auto* d : {&a, &b}) {
    REQUIRE(run_cli({"variance-sweep", "--mu", "0.3,1.2", "--convention", "appendixB", "--out", d->path.string()}).code == 0);
    REQUIRE(run_cli({"sde-compare", "--mu", "0.5", "--traj", "16", "--tend", "4", "--burnin", "1", "--seed", "7",
                     "--out", d->path.string()})
                .code == 0);
  }
  CHECK(slurp(a.path / "variance_table.csv") == slurp(b.path / "variance_table.csv"));
  CHECK(slurp(a.path / "sde_compare.csv") == slurp(b.path / "sde_compare.csv"));
}

TEST_CASE("config file with flag override") {
  TempDir dir("config");
  const fs::path cfg = dir.path / "run.toml";
  std::ofstream(cfg) << "# sweep settings\n[variance-sweep]\nmu = [0.2, 0.4]\ng2 = 0.02\nconvention = \"asPrinted\"\n";
  const Outcome r = run_cli({"--config", cfg.string(), "variance-sweep", "--mu", "0.6", "--out", dir.path.string()});
  REQUIRE(r.code == 0);
  const auto t = rows(slurp(dir.path / "variance_table.csv"));
  REQUIRE(t.size() == 3);
  CHECK(t[1][0] == "0.59999999999999998");
  CHECK(t[2][1] == "quadrature_asPrinted");
}

TEST_CASE("configuration errors exit with code 2") {
  TempDir dir("errors");
  CHECK(run_cli({"variance-sweep", "--bogus"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"variance-sweep", "--convention", "other", "--out", dir.path.string()}).code == 2);
  CHECK(run_cli({"variance-sweep", "--mu", "-0.5", "--out", dir.path.string()}).code == 2);
  CHECK(run_cli({"variance-sweep", "--mu", "1,0.5", "--out", dir.path.string()}).code == 2);
  CHECK(run_cli({"simulate", "--model", "classical", "--out", dir.path.string()}).code == 2);
  CHECK(run_cli({"sde-compare", "--dt", "0", "--out", dir.path.string()}).code == 2);
  CHECK(fs::is_empty(dir.path));
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("numerical failure exits with code 3 and leaves no output") {
  TempDir dir("numerical");
  const Outcome r = run_cli({"wigner-slice", "--mu", "0.5,1.5", "--g2", "0", "--out", dir.path.string()});
  CHECK(r.code == 3);
  CHECK(fs::is_empty(dir.path));
}

TEST_CASE("slice grids") {
  TempDir dir("slice");
  REQUIRE(run_cli({"wigner-slice", "--points", "61", "--plot-script", "--out", dir.path.string()}).code == 0);
  for (const char* f : {"slice_mu0.5.csv", "slice_mu1.csv", "slice_mu1.5.csv", "slice.gp"}) CHECK(fs::exists(dir.path / f));
  auto argmax = [&](const char* f) {
    const auto t = rows(slurp(dir.path / f));
    CHECK(t[0] == std::vector<std::string>{"x1", "x2", "w"});
    double best = -1.0;
    std::vector<std::pair<double, double>> at;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double w = std::stod(t[i][2]);
      if (w > best * (1 + 1e-12)) {
        best = w;
        at = {{std::stod(t[i][0]), std::stod(t[i][1])}};
      } else if (std::abs(w - best) <= 1e-12 * best) {
        at.emplace_back(std::stod(t[i][0]), std::stod(t[i][1]));
      }
    }
    return at;
  };
  const auto below = argmax("slice_mu0.5.csv");
  REQUIRE(below.size() == 1);
  CHECK(below[0] == std::pair<double, double>{0.0, 0.0});
  const auto above = argmax("slice_mu1.5.csv");
  REQUIRE(above.size() == 2);
  CHECK(above[0].first == -above[1].first);
  CHECK(above[0].second == -above[1].second);
  CHECK(above[0].first == above[0].second);
  CHECK(std::abs(above[0].first) == 10.0);
}

TEST_CASE("marginal ring") {
  TempDir dir("marginal");
  REQUIRE(run_cli({"marginal", "--mu", "1.2", "--method", "closed-form", "--extent", "8", "--points", "161", "--out",
                   dir.path.string()})
              .code == 0);
  const auto t = rows(slurp(dir.path / "marginal_mu1.2.csv"));
  CHECK(t[0] == std::vector<std::string>{"x2", "y2", "w"});
  double best = -1.0, r2 = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double w = std::stod(t[i][2]);
    if (w > best) {
      best = w;
      r2 = std::pow(std::stod(t[i][0]), 2) + std::pow(std::stod(t[i][1]), 2);
    }
  }
  // grid spacing 0.1 around radius ~4.7 resolves r^2 to about +-1
  CHECK(std::abs(r2 - 22.0) < 1.5);
}

TEST_CASE("potential check") {
  TempDir dir("potential");
  CHECK(run_cli({"potential-check", "--out", dir.path.string()}).code == 0);
  const auto t = rows(slurp(dir.path / "curl_report.csv"));
  CHECK(t[0] == std::vector<std::string>{"mu", "x1", "y1", "x2", "y2", "field", "max_curl"});
  CHECK(t.size() == 1 + 2 * 101 * 3);
  CHECK(run_cli({"potential-check", "--g2", "0", "--out", dir.path.string()}).code == 0);
}

TEST_CASE("stochastic comparison rows") {
  TempDir dir("sde");
  REQUIRE(run_cli({"sde-compare", "--mu", "0,1.5", "--traj", "128", "--tend", "16", "--burnin", "4", "--plot-script",
                   "--out", dir.path.string()})
              .code == 0);
  CHECK(fs::exists(dir.path / "sde_compare.gp"));
  const auto t = rows(slurp(dir.path / "sde_compare.csv"));
  REQUIRE(t.size() == 3);
  CHECK(t[0].size() == 9);
  for (std::size_t col : {1u, 3u, 5u}) {
    CHECK(std::abs(std::stod(t[1][col]) - 1.0) < 3.0 * std::stod(t[1][col + 1]) + 1e-12);
  }
  CHECK(std::stod(t[2][5]) < std::stod(t[2][3]));
  CHECK(t[2][8] == "ok");
}

TEST_CASE("simulate writes csv and json") {
  TempDir dir("simulate");
  REQUIRE(run_cli({"simulate", "--model", "three-mode", "--mu", "0.5", "--traj", "8", "--tend", "3", "--burnin", "1",
                   "--out", dir.path.string()})
              .code == 0);
  CHECK(fs::exists(dir.path / "simulate_three-mode_mu0.5.csv"));
  CHECK(fs::exists(dir.path / "simulate_three-mode_mu0.5.json"));
}
