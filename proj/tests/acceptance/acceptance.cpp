// Acceptance suite: one PASS/FAIL line per criterion.
//
// Criteria 1-9 and 11-13 are read from the harness verdicts of an `all` run
// on the default configuration (d = 3) plus zonal-only runs at d = 4 and
// d = 5. Criterion 10 is checked here against independent oracles.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "sphsemi/cli.hpp"
#include "sphsemi/experiments.hpp"
#include "sphsemi/smoothness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sphsemi;

namespace {

constexpr double kTimeBudgetSeconds = 300.0;
constexpr double kBruteForceTolerance = 1e-3;
constexpr double kOneModeTolerance = 1e-10;

struct Criterion {
  std::string title;
  int verdicts = 0;
  int failures = 0;
  std::vector<std::string> notes;
};

struct Run {
  int exit_code = -1;
  double seconds = 0.0;
  json report;
};

Run run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"sphsemi"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const auto start = std::chrono::steady_clock::now();
  Run r;
  r.exit_code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!err.str().empty()) std::cerr << err.str();
  return r;
}

json read_report(const fs::path& dir) {
  std::ifstream in(dir / "report.json");
  if (!in) return json::object();
  return json::parse(in);
}

void collect(std::map<int, Criterion>& crit, const json& report, const std::string& tag) {
  if (!report.contains("experiments")) return;
  for (const auto& e : report["experiments"]) {
    for (const auto& v : e["verdicts"]) {
      const int c = v["criterion"].get<int>();
      if (!crit.count(c)) continue;
      ++crit[c].verdicts;
      if (!v["passed"].get<bool>()) {
        ++crit[c].failures;
        std::ostringstream s;
        s << tag << ' ' << v["name"].get<std::string>() << " measured " << v["measured"].dump() << ' '
          << v["relation"].get<std::string>() << ' ' << v["tolerance"].dump();
        crit[c].notes.push_back(s.str());
      }
    }
  }
}

// Criterion 10: the L2 K-functional against a brute-force grid oracle on
// random three-mode inputs and against the one-mode closed form.
void check_kfunctional(Criterion& c) {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  double worst_brute = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const std::array<double, 3> f{u(gen), -u(gen), u(gen)};
    const std::array<double, 3> a{10.0 * u(gen), 10.0 * u(gen), 50.0 * u(gen)};
    auto coeffs = LaplaceCoefficients::zonal(0.5, 3);
    for (int i = 0; i < 3; ++i) coeffs[i + 1] = f[i];
    const std::vector<double> sym{0.0, a[0], a[1], a[2]};
    for (double t : {0.01, 0.1, 0.5}) {
      const double exact = kfunctional_l2_exact(coeffs, sym, t).value;
      const double brute = oracle::kfunctional_three_modes(f, a, t);
      ++c.verdicts;
      // The grid oracle can only overestimate the infimum.
      const double gap = brute - exact;
      worst_brute = std::max(worst_brute, std::abs(gap));
      if (!(gap >= -1e-12 && gap <= kBruteForceTolerance)) ++c.failures;
    }
  }
  double worst_one = 0.0;
  for (double lam : {0.5, 1.0, 1.5}) {
    for (int j : {1, 5, 32}) {
      auto f = LaplaceCoefficients::zonal(lam, 40);
      f[j] = -1.7;
      std::vector<double> sym(41, 0.0);
      for (int k = 1; k <= 40; ++k) sym[k] = k * (k + 2.0 * lam);
      for (double t : {0.0, 1e-6, 1e-3, 0.1, 1.0}) {
        const double v = kfunctional_l2_exact(f, sym, t).value;
        const double expect = std::min(1.0, t * sym[j]) * 1.7;
        ++c.verdicts;
        worst_one = std::max(worst_one, std::abs(v - expect));
        if (!(std::abs(v - expect) <= kOneModeTolerance)) ++c.failures;
      }
    }
  }
  std::ostringstream s;
  s << "brute-force gap " << worst_brute << " <= " << kBruteForceTolerance << ", one-mode error " << worst_one
    << " <= " << kOneModeTolerance;
  c.notes.push_back(s.str());
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "sphsemi_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  std::map<int, Criterion> crit{
      {1, {"semigroup law to 1e-13, runtime < 1 s"}},
      {2, {"L2 contraction, slack 1e-12"}},
      {3, {"kernel positivity (min - tail >= -1e-8 max) and normalization 1 +- 1e-9"}},
      {4, {"Abel-Poisson kernel vs closed form <= 1e-8"}},
      {5, {"physical convolution vs coefficient action <= 1e-7"}},
      {6, {"Bernstein bound 1/e + 1e-10, single-mode maximum 1/e +- 1e-10"}},
      {7, {"integral representation <= 1e-10 per coefficient"}},
      {8, {"eigenfunction error law to 1e-14"}},
      {9, {"equivalence slopes within 0.05, bands stable within 5%"}},
      {10, {"K-functional vs brute force <= 1e-3, one-mode closed form <= 1e-10"}},
      {11, {"saturation: slope r +- 0.05, constants exact, error/t^r bounded below"}},
      {12, {"class equivalence: K-ratio band finite and stable"}},
      {13, {"`all` on the default config exits 0 in < 300 s"}},
  };

  const Run main_run = run_cli({"all", "-q", "-o", (root / "d3").string()});
  const json main_report = read_report(root / "d3");
  collect(crit, main_report, "d=3");
  if (main_report.contains("experiments")) {
    for (const auto& e : main_report["experiments"]) {
      if (e["name"] != "equivalence" || !e["metrics"].contains("desk_grid_slope_gap")) continue;
      double worst = 0.0;
      for (const auto& [key, gap] : e["metrics"]["desk_grid_slope_gap"].items()) worst = std::max(worst, gap.get<double>());
      crit[9].notes.push_back("informational: worst slope gap on the first decade of t in [1e-3, 1] is " +
                              std::to_string(worst) + " (not asymptotic yet; verdicts use the default t-grid)");
    }
  }
  ++crit[13].verdicts;
  if (main_run.exit_code != 0 || !(main_run.seconds < kTimeBudgetSeconds)) ++crit[13].failures;
  crit[13].notes.push_back("exit " + std::to_string(main_run.exit_code) + " after " +
                           std::to_string(main_run.seconds) + " s");

  // Zonal experiments again at lambda = 1 and 3/2.
  const std::vector<std::string> zonal{"semigroup", "bernstein", "equivalence", "saturation", "class-equiv",
                                       "integral-rep"};
  for (int d : {4, 5}) {
    const fs::path cfg = root / ("d" + std::to_string(d) + ".json");
    std::ofstream(cfg) << json{{"dimension", d}}.dump();
    for (const auto& name : zonal) {
      const fs::path out = root / ("d" + std::to_string(d)) / name;
      run_cli({name, "-q", "-c", cfg.string(), "-o", out.string()});
      collect(crit, read_report(out), "d=" + std::to_string(d));
    }
  }

  check_kfunctional(crit[10]);

  int failed = 0;
  for (auto& [id, c] : crit) {
    const bool ok = c.verdicts > 0 && c.failures == 0;
    if (!ok) ++failed;
    std::printf("criterion %2d %s: %s (%d checks", id, ok ? "PASS" : "FAIL", c.title.c_str(), c.verdicts);
    if (c.failures) std::printf(", %d failed", c.failures);
    std::printf(")\n");
    for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(crit.size()) - failed, crit.size());
  return failed == 0 ? 0 : 1;
}
