#include "sphsemi/cli.hpp"

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphsemi/error.hpp"
#include "sphsemi/experiments.hpp"
#include "sphsemi/number_format.hpp"

namespace sphsemi {

namespace {

constexpr const char* kOutputEnv = "SPHSEMI_OUTPUT_DIR";

constexpr const char* kFooter = R"(Outputs (in the output directory):
  report.json     subcommand, config echo, per-experiment metrics, verdicts, wall-clock
  <name>.csv      columns series,t,lhs,rhs,ratio
                    series  measurement family, e.g. modulus/V^0.5/r=1/Y_4
                    t       time (or step) parameter
                    lhs     measured left-hand side
                    rhs     comparison quantity
                    ratio   lhs/rhs (1 when both are 0)
  kernel_<i>.csv  '# multiplier=... N=... tail_bound=...' then theta,value

Output directory: --output, else $SPHSEMI_OUTPUT_DIR, else the config's output_dir.
Exit status: 0 all verdicts pass, 1 some verdict failed, 2 bad arguments or config.)";

void print_report(std::ostream& out, const ExperimentReport& rep) {
  out << "== " << rep.name << " (" << format_double(rep.wall_clock_seconds) << " s)\n";
  for (const auto& v : rep.verdicts) {
    out << (v.passed ? "  PASS " : "  FAIL ") << v.name << ": " << format_double(v.measured) << ' ' << v.relation
        << ' ' << format_double(v.tolerance) << '\n';
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiplier semigroups on the sphere: experiment harness", "sphsemi"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string output_dir;
  bool quiet = false;
  app.add_option("-c,--config", config_path, "JSON configuration file");
  app.add_option("-o,--output", output_dir, "output directory");
  app.add_flag("-q,--quiet", quiet, "print only the final status");

  std::vector<std::string> names = experiment_names();
  names.push_back("all");
  for (const auto& n : names) app.add_subcommand(n, n == "all" ? "run every experiment" : "run the " + n + " experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  try {
    cfg = config_path.empty() ? default_config() : load_config(config_path);
  } catch (const std::exception& e) {
    err << "sphsemi: " << e.what() << '\n';
    return 2;
  }
  if (!output_dir.empty()) {
    cfg.output_dir = output_dir;
  } else if (const char* env = std::getenv(kOutputEnv); env != nullptr && *env != '\0') {
    cfg.output_dir = env;
  }

  std::vector<ExperimentReport> reports;
  try {
    const std::vector<std::string> todo = sub == "all" ? experiment_names() : std::vector<std::string>{sub};
    for (const auto& name : todo) {
      reports.push_back(run_experiment(name, cfg));
      if (!quiet) print_report(out, reports.back());
    }
    write_outputs(cfg.output_dir, sub, cfg, reports);
  } catch (const ConfigError& e) {
    err << "sphsemi: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "sphsemi: " << sub << " failed: " << e.what() << '\n';
    return 1;
  }

  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  out << (ok ? "all verdicts passed" : "some verdicts FAILED") << "; outputs in " << cfg.output_dir << '\n';
  return ok ? 0 : 1;
}

}  // namespace sphsemi
