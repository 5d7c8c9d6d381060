#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "sphsemi/cli.hpp"
#include "sphsemi/error.hpp"
#include "sphsemi/experiments.hpp"

using namespace sphsemi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("sphsemi_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "sphsemi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto def = default_config();
  CHECK(def.operators.size() == 5);
  CHECK(def.kernel.multipliers.size() == 30);
  const auto echo = config_to_json(def);
  CHECK(config_to_json(parse_config(echo)) == echo);

  CHECK_THROWS_AS(parse_config(nlohmann::json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json{{"band_limit", "x"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json{{"dimension", 2}}), ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json{{"t_grid", {{"t_min", 2.0}, {"t_max", 1.0}, {"points", 5}}}}), ConfigError);

  const auto d5 = parse_config(nlohmann::json{{"dimension", 5}});
  CHECK(d5.lambda() == 1.5);
  CHECK(d5.operators[3].label(1.5) == "W^0.5");
  CHECK(d5.kernel.multipliers.size() == 30);
  CHECK(d5.kernel.multipliers[18]["p"][1] == 3.0);
}

TEST_CASE("multiplier specs") {
  const auto s = parse_multiplier_spec({{"type", "semigroup"}, {"p", {0, 1}}, {"gamma", 1.0}, {"t", 0.5}, {"r", 2}}, 0.5);
  CHECK(s(3) == doctest::Approx(1 - std::pow(1 - std::exp(-1.5), 2)));
  CHECK(parse_multiplier_spec({{"type", "translation"}, {"theta", 0.3}}, 0.5)(1) == doctest::Approx(std::cos(0.3)));
  CHECK(parse_multiplier_spec({{"type", "difference"}, {"alpha", 2.0}, {"theta", 0.3}}, 0.5)(1) ==
        doctest::Approx(1 - std::cos(0.3)));
  CHECK(parse_multiplier_spec({{"type", "cesaro"}, {"K", 4}, {"alpha", 1.0}}, 0.5)(5) == 0.0);
  CHECK_THROWS_AS(parse_multiplier_spec({{"type", "nope"}}, 0.5), ConfigError);
  CHECK_THROWS_AS(parse_multiplier_spec({{"type", "semigroup"}, {"p", {0, 1}}, {"gamma", 2.0}, {"t", 1.0}}, 0.5),
                  ConfigError);
}

TEST_CASE("suites are reproducible") {
  const auto a = build_suite(SuiteSpec{}, 0.5, 64, 42);
  const auto b = build_suite(SuiteSpec{}, 0.5, 64, 42);
  REQUIRE(a.size() == 12);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].f.values == b[i].f.values);
  CHECK(random_zonal(0.5, 8, 1).values != random_zonal(0.5, 8, 2).values);
}

TEST_CASE("cli exit codes") {
  std::string text;
  CHECK(run({"--help"}, &text) == 0);
  CHECK(text.find("series,t,lhs,rhs,ratio") != std::string::npos);
  CHECK(run({}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({"semigroup", "--config", "/nonexistent/config.json"}) == 2);

  const auto dir = scratch("badcfg");
  std::ofstream(dir / "bad.json") << "{\"band_limit\": ";
  CHECK(run({"semigroup", "--config", (dir / "bad.json").string()}) == 2);
  std::ofstream(dir / "unknown.json") << "{\"colour\": 1}";
  CHECK(run({"semigroup", "--config", (dir / "unknown.json").string()}) == 2);

  // On t in [1e-3, 1] the Weierstrass slopes are still pre-asymptotic: a
  // verdict failure, not a configuration error.
  std::ofstream(dir / "eq.json") << R"({"band_limit": 16, "r": [1], "modulus_alphas": [],
    "operators": [{"family": "weierstrass", "gamma": 1}], "suite": {"eigen": [8], "random": {"count": 0, "band_limit": 8}},
    "t_grid": {"t_min": 1e-3, "t_max": 1, "points": 31}})";
  CHECK(run({"equivalence", "--config", (dir / "eq.json").string(), "-o", (dir / "out").string(), "-q"}) == 1);
}

TEST_CASE("cli outputs are deterministic") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  CHECK(run({"integral-rep", "-o", a.string(), "-q"}) == 0);
  CHECK(run({"integral-rep", "-o", b.string(), "-q"}) == 0);
  CHECK(fs::exists(a / "report.json"));
  const auto csv = slurp(a / "integral-rep.csv");
  CHECK(csv.rfind("series,t,lhs,rhs,ratio\n", 0) == 0);
  CHECK(csv == slurp(b / "integral-rep.csv"));
  const auto report = nlohmann::json::parse(slurp(a / "report.json"));
  CHECK(report["subcommand"] == "integral-rep");
  CHECK(report["passed"] == true);
  auto expect = default_config();
  expect.output_dir = a.string();
  CHECK(report["config"] == config_to_json(expect));
  for (const auto& v : report["experiments"][0]["verdicts"]) {
    CHECK(v.contains("tolerance"));
    CHECK(v.contains("criterion"));
  }
}

TEST_CASE("output directory precedence") {
  const auto env_dir = scratch("env");
  const auto flag_dir = scratch("flag");
  ::setenv("SPHSEMI_OUTPUT_DIR", env_dir.string().c_str(), 1);
  CHECK(run({"integral-rep", "-q"}) == 0);
  CHECK(fs::exists(env_dir / "report.json"));
  CHECK(run({"integral-rep", "-q", "-o", flag_dir.string()}) == 0);
  CHECK(fs::exists(flag_dir / "report.json"));
  ::unsetenv("SPHSEMI_OUTPUT_DIR");
}
