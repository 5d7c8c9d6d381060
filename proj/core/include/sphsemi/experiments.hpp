#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphsemi/laplace_series.hpp"
#include "sphsemi/multiplier_ops.hpp"

namespace sphsemi {

/// One exponential-type family e^{-(p(k))^gamma t}.
struct OperatorSpec {
  std::vector<double> p{0.0, 1.0};
  double gamma = 1.0;
  bool permissive = false;

  /// "V^g" for p(x) = x, "W^g" for p(x) = x(x + 2 lambda), otherwise "p=[..]^g".
  std::string label(double lambda) const;
  RegularPolynomial polynomial() const;
  int degree() const { return static_cast<int>(p.size()) - 1; }
};

/// Geometric grid t_min .. t_max with `points` points.
struct TGrid {
  double t_min = 1e-8;
  double t_max = 1.0;
  int points = 81;

  std::vector<double> values() const;
  /// Same end points, every interval halved.
  TGrid refined() const { return {t_min, t_max, 2 * points - 1}; }
};

struct SuiteSpec {
  std::vector<int> eigen{1, 2, 4, 8, 16, 32};
  int random_count = 4;
  int random_band_limit = 32;
  /// Named coefficient profiles: "geometric" (2^{-k}) and "power4" ((k+1)^{-4}).
  std::vector<std::string> smooth{"geometric", "power4"};
};

struct KernelStudySpec {
  /// Multiplier specs with a t value (and optional r for Boolean kernels).
  std::vector<nlohmann::json> multipliers;
  std::vector<double> poisson_u{0.3, 0.5, 0.8};
  int positivity_points = 8192;
  int convolution_count = 20;
  int convolution_degree = 10;
  double convolution_u = 0.5;
};

struct IntegralRepSpec {
  std::vector<OperatorSpec> operators;
  std::vector<double> t{0.0, 0.1, 0.5, 1.0};
  std::vector<int> r{1, 2};
  int band_limit = 32;
};

struct ExperimentConfig {
  int dimension = 3;
  int band_limit = 64;
  std::uint64_t seed = 20240611;
  TGrid t_grid{};
  /// Informational second grid for the equivalence slopes.
  TGrid desk_t_grid{1e-3, 1.0, 31};
  SuiteSpec suite;
  std::vector<OperatorSpec> operators;
  std::vector<int> r_values{1, 2, 3};
  std::vector<double> modulus_alphas{1.0, 2.0};
  double n_constant = 1.0;
  /// Strong continuity is followed along t = 2^{-j}, j = 0..continuity_steps.
  int continuity_steps = 40;
  KernelStudySpec kernel;
  IntegralRepSpec integral_rep;
  std::string output_dir = "sphsemi_out";

  double lambda() const { return 0.5 * (dimension - 2); }
};

/// Built-in configuration used when no file is given.
ExperimentConfig default_config();
/// Throws ConfigError on unknown keys, wrong types, or invalid values.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Builds a multiplier from a record such as
/// {"type": "semigroup", "p": [0, 1], "gamma": 1.0, "t": 0.25, "r": 2}
/// (r > 1 gives the Boolean combination), {"type": "translation", "theta": 0.3},
/// {"type": "difference", "alpha": 1.5, "theta": 0.3}, {"type": "cesaro", "K": 16, "alpha": 1}.
MultiplierSequence parse_multiplier_spec(const nlohmann::json& j, double lambda);

struct Verdict {
  std::string name;
  /// Acceptance criterion this verdict feeds; 0 for none.
  int criterion = 0;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  /// How measured relates to tolerance when passing: "<=", ">=" or "==".
  std::string relation = "<=";
  std::string detail;
};

struct CsvRow {
  std::string series;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct ExperimentReport {
  std::string name;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<Verdict> verdicts;
  std::vector<CsvRow> rows;
  /// Additional files (name, content), e.g. kernel dumps.
  std::vector<std::pair<std::string, std::string>> files;
  double wall_clock_seconds = 0.0;

  bool passed() const;
};

ExperimentReport run_semigroup_checks(const ExperimentConfig& cfg);
ExperimentReport run_bernstein_study(const ExperimentConfig& cfg);
ExperimentReport run_equivalence_study(const ExperimentConfig& cfg);
ExperimentReport run_saturation_study(const ExperimentConfig& cfg);
ExperimentReport run_class_equivalence(const ExperimentConfig& cfg);
ExperimentReport run_integral_representation_check(const ExperimentConfig& cfg);
ExperimentReport run_kernel_study(const ExperimentConfig& cfg);

/// Subcommand names in execution order for `all`.
const std::vector<std::string>& experiment_names();
ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& cfg);

nlohmann::json report_to_json(const ExperimentReport& report);
/// `series,t,lhs,rhs,ratio` rows with shortest round-trip floats.
std::string rows_to_csv(const std::vector<CsvRow>& rows);

/// Writes <name>.csv and extra files for every report plus report.json.
void write_outputs(const std::filesystem::path& dir, const std::string& subcommand, const ExperimentConfig& cfg,
                   const std::vector<ExperimentReport>& reports);

/// Test functions used by the studies.
struct SuiteMember {
  std::string name;
  LaplaceCoefficients f;
};
std::vector<SuiteMember> build_suite(const SuiteSpec& spec, double lambda, int band_limit, std::uint64_t seed);
/// Coefficients uniform in [-1, 1] up to degree n from a 64-bit Mersenne twister.
LaplaceCoefficients random_zonal(double lambda, int n, std::uint64_t seed);
LaplaceCoefficients random_sphere(int n, std::uint64_t seed);

}  // namespace sphsemi
