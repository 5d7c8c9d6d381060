#include "sphsemi/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "sphsemi/error.hpp"
#include "sphsemi/gegenbauer.hpp"
#include "sphsemi/kernels.hpp"
#include "sphsemi/number_format.hpp"
#include "sphsemi/quadrature.hpp"
#include "sphsemi/smoothness.hpp"

namespace sphsemi {

using nlohmann::json;

// ---------------------------------------------------------------- config

std::string OperatorSpec::label(double lambda) const {
  const std::string g = format_double(gamma);
  if (p == std::vector<double>{0.0, 1.0}) return "V^" + g;
  if (p == std::vector<double>{0.0, 2.0 * lambda, 1.0}) return "W^" + g;
  std::string s = "p=[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + format_double(p[i]);
  return s + "]^" + g;
}

RegularPolynomial OperatorSpec::polynomial() const { return RegularPolynomial(p); }

std::vector<double> TGrid::values() const {
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = t_min;
    return v;
  }
  const double a = std::log(t_min);
  const double b = std::log(t_max);
  for (int i = 0; i < points; ++i) v[i] = std::exp(a + (b - a) * i / (points - 1));
  v.front() = t_min;
  v.back() = t_max;
  return v;
}

namespace {

json semigroup_spec(std::vector<double> p, double gamma, double t, int r) {
  json j = {{"type", "semigroup"}, {"p", p}, {"gamma", gamma}, {"t", t}};
  if (r > 1) j["r"] = r;
  return j;
}

OperatorSpec op(std::vector<double> p, double gamma) { return OperatorSpec{std::move(p), gamma, false}; }

// Defaults whose operators depend on lambda follow the dimension.
ExperimentConfig defaults_for(int dimension) {
  ExperimentConfig cfg;
  cfg.dimension = dimension;
  const double lam = cfg.lambda();
  const std::vector<double> lin{0.0, 1.0};
  const std::vector<double> lb{0.0, 2.0 * lam, 1.0};
  cfg.operators = {op(lin, 0.5), op(lin, 0.75), op(lin, 1.0), op(lb, 0.5), op(lb, 1.0)};
  for (const auto& o : cfg.operators) {
    for (double t : {0.05, 0.2, 1.0}) {
      cfg.kernel.multipliers.push_back(semigroup_spec(o.p, o.gamma, t, 1));
      cfg.kernel.multipliers.push_back(semigroup_spec(o.p, o.gamma, t, 3));
    }
  }
  cfg.integral_rep.operators = {op(lin, 0.5), op(lin, 1.0), op(lb, 0.5)};
  return cfg;
}

}  // namespace

ExperimentConfig default_config() { return defaults_for(3); }

namespace {

void config_fail(const std::string& what) { throw ConfigError("config: " + what); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) config_fail(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) config_fail("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T read(const json& j, const char* key, const std::string& where, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_fail("'" + std::string(key) + "' in " + where + " has the wrong type");
  }
  return fallback;
}

OperatorSpec parse_operator(const json& j, double lambda) {
  check_keys(j, "operator", {"type", "family", "p", "gamma", "kappa", "permissive", "t", "r"});
  OperatorSpec o;
  const auto family = read<std::string>(j, "family", "operator", "");
  if (family == "abel_poisson") {
    o.p = {0.0, 1.0};
  } else if (family == "weierstrass") {
    o.p = {0.0, 2.0 * lambda, 1.0};
  } else if (!family.empty()) {
    config_fail("unknown operator family '" + family + "'");
  }
  const auto type = read<std::string>(j, "type", "operator", "semigroup");
  if (type != "semigroup") config_fail("operators must have type 'semigroup'");
  o.p = read<std::vector<double>>(j, "p", "operator", o.p);
  o.gamma = read<double>(j, "gamma", "operator", read<double>(j, "kappa", "operator", 1.0));
  o.permissive = read<bool>(j, "permissive", "operator", false);
  try {
    (void)o.polynomial();
  } catch (const ValidationError& e) {
    config_fail(e.what());
  }
  if (!(o.gamma > 0.0) || (o.gamma > 1.0 && !o.permissive)) {
    config_fail("operator gamma must lie in (0, 1] unless 'permissive' is true");
  }
  return o;
}

json operator_to_json(const OperatorSpec& o) {
  return {{"type", "semigroup"}, {"p", o.p}, {"gamma", o.gamma}, {"permissive", o.permissive}};
}

TGrid parse_grid(const json& j, const std::string& where, TGrid fallback) {
  check_keys(j, where, {"t_min", "t_max", "points"});
  TGrid g{read<double>(j, "t_min", where, fallback.t_min), read<double>(j, "t_max", where, fallback.t_max),
          read<int>(j, "points", where, fallback.points)};
  if (!(g.t_min > 0.0) || !(g.t_max > g.t_min) || g.points < 2) {
    config_fail(where + " must satisfy 0 < t_min < t_max with at least 2 points");
  }
  if (g.t_max > 1.0) config_fail(where + ": t_max must be <= 1");
  return g;
}

json grid_to_json(const TGrid& g) { return {{"t_min", g.t_min}, {"t_max", g.t_max}, {"points", g.points}}; }

}  // namespace

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "config", {"dimension", "band_limit", "seed", "t_grid", "desk_t_grid", "suite", "operators", "r",
                           "modulus_alphas", "n_constant", "continuity_steps", "kernel", "integral_rep",
                           "output_dir"});
  const int dimension = read<int>(j, "dimension", "config", 3);
  if (dimension < 3) config_fail("dimension must be >= 3");
  ExperimentConfig cfg = defaults_for(dimension);
  const double lam = cfg.lambda();
  cfg.band_limit = read<int>(j, "band_limit", "config", cfg.band_limit);
  if (cfg.band_limit < 1 || cfg.band_limit > 512) config_fail("band_limit must lie in [1, 512]");
  cfg.seed = read<std::uint64_t>(j, "seed", "config", cfg.seed);
  if (j.contains("t_grid")) cfg.t_grid = parse_grid(j["t_grid"], "t_grid", cfg.t_grid);
  if (j.contains("desk_t_grid")) cfg.desk_t_grid = parse_grid(j["desk_t_grid"], "desk_t_grid", cfg.desk_t_grid);
  if (j.contains("suite")) {
    const auto& s = j["suite"];
    check_keys(s, "suite", {"eigen", "random", "smooth"});
    cfg.suite.eigen = read<std::vector<int>>(s, "eigen", "suite", cfg.suite.eigen);
    if (s.contains("random")) {
      check_keys(s["random"], "suite.random", {"count", "band_limit"});
      cfg.suite.random_count = read<int>(s["random"], "count", "suite.random", cfg.suite.random_count);
      cfg.suite.random_band_limit =
          read<int>(s["random"], "band_limit", "suite.random", cfg.suite.random_band_limit);
    }
    cfg.suite.smooth = read<std::vector<std::string>>(s, "smooth", "suite", cfg.suite.smooth);
  }
  for (int e : cfg.suite.eigen) {
    if (e < 1 || e > cfg.band_limit) config_fail("suite.eigen degrees must lie in [1, band_limit]");
  }
  if (cfg.suite.random_count < 0 || cfg.suite.random_band_limit < 1 ||
      cfg.suite.random_band_limit > cfg.band_limit) {
    config_fail("suite.random needs count >= 0 and 1 <= band_limit <= config band_limit");
  }
  for (const auto& s : cfg.suite.smooth) {
    if (s != "geometric" && s != "power4") config_fail("unknown smooth profile '" + s + "'");
  }
  if (j.contains("operators")) {
    if (!j["operators"].is_array()) config_fail("operators must be an array");
    cfg.operators.clear();
    for (const auto& o : j["operators"]) cfg.operators.push_back(parse_operator(o, lam));
  }
  cfg.r_values = read<std::vector<int>>(j, "r", "config", cfg.r_values);
  for (int r : cfg.r_values) {
    if (r < 1 || r > 3) config_fail("r values must lie in {1, 2, 3}");
  }
  cfg.modulus_alphas = read<std::vector<double>>(j, "modulus_alphas", "config", cfg.modulus_alphas);
  for (double a : cfg.modulus_alphas) {
    if (!(a > 0.0)) config_fail("modulus_alphas must be positive");
  }
  cfg.n_constant = read<double>(j, "n_constant", "config", cfg.n_constant);
  if (!(cfg.n_constant >= 0.0)) config_fail("n_constant must be >= 0");
  cfg.continuity_steps = read<int>(j, "continuity_steps", "config", cfg.continuity_steps);
  if (cfg.continuity_steps < 1 || cfg.continuity_steps > 60) config_fail("continuity_steps must lie in [1, 60]");
  if (j.contains("kernel")) {
    const auto& k = j["kernel"];
    check_keys(k, "kernel", {"multipliers", "poisson_u", "positivity_points", "convolution"});
    if (k.contains("multipliers")) {
      if (!k["multipliers"].is_array()) config_fail("kernel.multipliers must be an array");
      cfg.kernel.multipliers.clear();
      for (const auto& m : k["multipliers"]) cfg.kernel.multipliers.push_back(m);
    }
    cfg.kernel.poisson_u = read<std::vector<double>>(k, "poisson_u", "kernel", cfg.kernel.poisson_u);
    for (double u : cfg.kernel.poisson_u) {
      if (!(u >= 0.0 && u < 1.0)) config_fail("kernel.poisson_u entries must lie in [0, 1)");
    }
    cfg.kernel.positivity_points = read<int>(k, "positivity_points", "kernel", cfg.kernel.positivity_points);
    if (cfg.kernel.positivity_points < 2) config_fail("kernel.positivity_points must be >= 2");
    if (k.contains("convolution")) {
      const auto& c = k["convolution"];
      check_keys(c, "kernel.convolution", {"count", "degree", "u"});
      cfg.kernel.convolution_count = read<int>(c, "count", "kernel.convolution", cfg.kernel.convolution_count);
      cfg.kernel.convolution_degree = read<int>(c, "degree", "kernel.convolution", cfg.kernel.convolution_degree);
      cfg.kernel.convolution_u = read<double>(c, "u", "kernel.convolution", cfg.kernel.convolution_u);
      if (cfg.kernel.convolution_count < 0 || cfg.kernel.convolution_degree < 0 ||
          !(cfg.kernel.convolution_u > 0.0 && cfg.kernel.convolution_u < 1.0)) {
        config_fail("kernel.convolution needs count >= 0, degree >= 0 and 0 < u < 1");
      }
    }
  }
  for (const auto& m : cfg.kernel.multipliers) {
    try {
      (void)parse_multiplier_spec(m, lam);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      config_fail(std::string("kernel multiplier: ") + e.what());
    }
  }
  if (j.contains("integral_rep")) {
    const auto& ir = j["integral_rep"];
    check_keys(ir, "integral_rep", {"operators", "t", "r", "band_limit"});
    if (ir.contains("operators")) {
      if (!ir["operators"].is_array()) config_fail("integral_rep.operators must be an array");
      cfg.integral_rep.operators.clear();
      for (const auto& o : ir["operators"]) cfg.integral_rep.operators.push_back(parse_operator(o, lam));
    }
    cfg.integral_rep.t = read<std::vector<double>>(ir, "t", "integral_rep", cfg.integral_rep.t);
    cfg.integral_rep.r = read<std::vector<int>>(ir, "r", "integral_rep", cfg.integral_rep.r);
    cfg.integral_rep.band_limit = read<int>(ir, "band_limit", "integral_rep", cfg.integral_rep.band_limit);
  }
  for (double t : cfg.integral_rep.t) {
    if (!(t >= 0.0 && t <= 10.0)) config_fail("integral_rep.t entries must lie in [0, 10]");
  }
  for (int r : cfg.integral_rep.r) {
    if (r != 1 && r != 2) config_fail("integral_rep.r entries must be 1 or 2");
  }
  if (cfg.integral_rep.band_limit < 1 || cfg.integral_rep.band_limit > 128) {
    config_fail("integral_rep.band_limit must lie in [1, 128]");
  }
  cfg.output_dir = read<std::string>(j, "output_dir", "config", cfg.output_dir);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json ops = json::array();
  for (const auto& o : cfg.operators) ops.push_back(operator_to_json(o));
  json irops = json::array();
  for (const auto& o : cfg.integral_rep.operators) irops.push_back(operator_to_json(o));
  return {
      {"dimension", cfg.dimension},
      {"band_limit", cfg.band_limit},
      {"seed", cfg.seed},
      {"t_grid", grid_to_json(cfg.t_grid)},
      {"desk_t_grid", grid_to_json(cfg.desk_t_grid)},
      {"suite",
       {{"eigen", cfg.suite.eigen},
        {"random", {{"count", cfg.suite.random_count}, {"band_limit", cfg.suite.random_band_limit}}},
        {"smooth", cfg.suite.smooth}}},
      {"operators", ops},
      {"r", cfg.r_values},
      {"modulus_alphas", cfg.modulus_alphas},
      {"n_constant", cfg.n_constant},
      {"continuity_steps", cfg.continuity_steps},
      {"kernel",
       {{"multipliers", cfg.kernel.multipliers},
        {"poisson_u", cfg.kernel.poisson_u},
        {"positivity_points", cfg.kernel.positivity_points},
        {"convolution",
         {{"count", cfg.kernel.convolution_count},
          {"degree", cfg.kernel.convolution_degree},
          {"u", cfg.kernel.convolution_u}}}}},
      {"integral_rep",
       {{"operators", irops},
        {"t", cfg.integral_rep.t},
        {"r", cfg.integral_rep.r},
        {"band_limit", cfg.integral_rep.band_limit}}},
      {"output_dir", cfg.output_dir},
  };
}

MultiplierSequence parse_multiplier_spec(const json& j, double lambda) {
  if (!j.is_object()) config_fail("multiplier spec must be an object");
  const auto type = read<std::string>(j, "type", "multiplier", "");
  if (type == "semigroup") {
    check_keys(j, "semigroup multiplier", {"type", "family", "p", "gamma", "kappa", "permissive", "t", "r"});
    const auto o = parse_operator(j, lambda);
    const double t = read<double>(j, "t", "multiplier", -1.0);
    if (!(t >= 0.0)) config_fail("semigroup multiplier needs t >= 0");
    const int r = read<int>(j, "r", "multiplier", 1);
    if (r < 1) config_fail("multiplier r must be >= 1");
    auto m = semigroup_multiplier(o.polynomial(), o.gamma, t, SemigroupOptions{o.permissive});
    return r == 1 ? m : boolean(m, r);
  }
  if (type == "translation") {
    check_keys(j, "translation multiplier", {"type", "theta"});
    return translation_multiplier(read<double>(j, "theta", "multiplier", 0.0), lambda);
  }
  if (type == "difference") {
    check_keys(j, "difference multiplier", {"type", "alpha", "theta", "terms"});
    const double alpha = read<double>(j, "alpha", "multiplier", 2.0);
    const double theta = read<double>(j, "theta", "multiplier", 0.0);
    if (j.contains("terms")) {
      return binomial_difference_series(alpha, theta, lambda, read<int>(j, "terms", "multiplier", 1));
    }
    return frac_difference_multiplier(alpha, theta, lambda);
  }
  if (type == "cesaro") {
    check_keys(j, "cesaro multiplier", {"type", "K", "alpha"});
    return cesaro_multiplier(read<int>(j, "K", "multiplier", 0), read<double>(j, "alpha", "multiplier", 0.0));
  }
  config_fail("unknown multiplier type '" + type + "'");
  return identity_multiplier();
}

// ---------------------------------------------------------------- suites

LaplaceCoefficients random_zonal(double lambda, int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto c = LaplaceCoefficients::zonal(lambda, n);
  for (auto& v : c.values) v = 2.0 * std::ldexp(static_cast<double>(gen() >> 11), -53) - 1.0;
  return c;
}

LaplaceCoefficients random_sphere(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto c = LaplaceCoefficients::sphere(n);
  for (auto& v : c.values) v = 2.0 * std::ldexp(static_cast<double>(gen() >> 11), -53) - 1.0;
  return c;
}

namespace {

LaplaceCoefficients embed(const LaplaceCoefficients& f, int n) {
  auto out = LaplaceCoefficients::zonal(f.lambda, n);
  for (int k = 0; k <= std::min(n, f.max_degree); ++k) out.values[k] = f.values[k];
  return out;
}

}  // namespace

std::vector<SuiteMember> build_suite(const SuiteSpec& spec, double lambda, int band_limit, std::uint64_t seed) {
  std::vector<SuiteMember> out;
  for (int j : spec.eigen) {
    auto f = LaplaceCoefficients::zonal(lambda, band_limit);
    f.values.at(j) = 1.0;
    out.push_back({"Y_" + std::to_string(j), f});
  }
  for (int i = 0; i < spec.random_count; ++i) {
    out.push_back({"random_" + std::to_string(i),
                   embed(random_zonal(lambda, spec.random_band_limit, seed + 1000 + i), band_limit)});
  }
  for (const auto& name : spec.smooth) {
    auto f = LaplaceCoefficients::zonal(lambda, band_limit);
    for (int k = 0; k <= band_limit; ++k) {
      f.values[k] = name == "geometric" ? std::ldexp(1.0, -k) : std::pow(k + 1.0, -4.0);
    }
    out.push_back({"smooth_" + name, f});
  }
  return out;
}

// ---------------------------------------------------------------- helpers

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void add_verdict(ExperimentReport& rep, std::string name, int criterion, double measured, double tolerance,
                 const std::string& relation, std::string detail = {}) {
  bool ok = false;
  if (!std::isnan(measured)) {
    if (relation == "<=") ok = measured <= tolerance;
    if (relation == ">=") ok = measured >= tolerance;
    if (relation == "==") ok = measured == tolerance;
  }
  rep.verdicts.push_back({std::move(name), criterion, ok, measured, tolerance, relation, std::move(detail)});
}

// a_k = (p(k))^gamma for k = 0..n.
std::vector<double> symbol(const OperatorSpec& o, int n) {
  const auto p = o.polynomial();
  std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) a[k] = std::pow(p(k), o.gamma);
  return a;
}

MultiplierSequence semigroup_of(const OperatorSpec& o, double t) {
  return semigroup_multiplier(o.polynomial(), o.gamma, t, SemigroupOptions{o.permissive});
}

// ||(I - (+)^r T(t)) f||_2, through the symbol (1 - m)^r.
double boolean_error(const LaplaceCoefficients& f, const OperatorSpec& o, double t, int r) {
  return parseval_l2_norm(apply(complement_power(semigroup_of(o, t), r), f));
}

bool is_constant(const LaplaceCoefficients& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.degree_of(i) > 0 && f.values[i] != 0.0) return false;
  }
  return true;
}

double nonconstant_norm(const LaplaceCoefficients& f) {
  auto g = f;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.degree_of(i) == 0) g.values[i] = 0.0;
  }
  return parseval_l2_norm(g);
}

std::string rtag(int r) { return "r=" + std::to_string(r); }

std::vector<double> every_other(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
  return out;
}

struct Band {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(const EquivalenceRatio& e) {
    if (std::isnan(e.min_ratio)) return;
    lo = std::min(lo, e.min_ratio);
    hi = std::max(hi, e.max_ratio);
  }
  double change_to(const Band& other) const {
    return std::max(std::abs(other.lo / lo - 1.0), std::abs(other.hi / hi - 1.0));
  }
};

// Pairs (lhs, rhs) of one relation on the fine grid, per suite member.
struct Relation {
  std::string name;
  std::vector<std::string> members;
  std::vector<std::vector<double>> lhs;
  std::vector<std::vector<double>> rhs;
};

struct RelationSummary {
  double worst_slope_gap = 0.0;
  std::string worst_member;
  Band coarse;
  Band fine;
};

RelationSummary summarize(const Relation& rel, const std::vector<double>& fine_ts) {
  RelationSummary s;
  const auto coarse_ts = every_other(fine_ts);
  for (std::size_t i = 0; i < rel.members.size(); ++i) {
    const auto lc = every_other(rel.lhs[i]);
    const auto rc = every_other(rel.rhs[i]);
    const auto ec = equivalence_ratio(lc, rc, coarse_ts);
    const auto ef = equivalence_ratio(rel.lhs[i], rel.rhs[i], fine_ts);
    const double gap = std::abs(ec.lhs_fit.slope - ec.rhs_fit.slope);
    if (!(gap <= s.worst_slope_gap)) {
      s.worst_slope_gap = gap;
      s.worst_member = rel.members[i];
    }
    s.coarse.add(ec);
    s.fine.add(ef);
  }
  return s;
}

void push_rows(ExperimentReport& rep, const std::string& series, const std::vector<double>& ts,
               const std::vector<double>& lhs, const std::vector<double>& rhs) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double ratio = rhs[i] != 0.0 ? lhs[i] / rhs[i] : (lhs[i] == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    rep.rows.push_back({series, ts[i], lhs[i], rhs[i], ratio});
  }
}

NormSpec sup_norm() { return NormSpec{NormKind::sup_grid, kInfiniteExponent, kSupGridPoints}; }
NormSpec l1_norm() { return NormSpec{NormKind::lp_grid, 1.0, 0}; }

}  // namespace

bool ExperimentReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

// ---------------------------------------------------------------- semigroup

ExperimentReport run_semigroup_checks(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "semigroup";
  const double lam = cfg.lambda();
  const int n = cfg.band_limit;
  const auto suite = build_suite(cfg.suite, lam, n, cfg.seed);
  const auto law_ts = TGrid{1e-3, 1.0, 10}.values();

  for (const auto& o : cfg.operators) {
    const std::string label = o.label(lam);
    const auto p = o.polynomial();

    const auto law_start = Clock::now();
    double law = 0.0;
    for (double t1 : law_ts) {
      const auto m1 = semigroup_of(o, t1).values(n);
      for (double t2 : law_ts) {
        const auto m2 = semigroup_of(o, t2).values(n);
        const auto m12 = semigroup_of(o, t1 + t2).values(n);
        for (int k = 0; k <= n; ++k) law = std::max(law, std::abs(m1[k] * m2[k] - m12[k]));
      }
    }
    const double law_seconds = seconds_since(law_start);
    add_verdict(rep, "semigroup law " + label, 1, law, 1e-13, "<=", "max |m_t1 m_t2 - m_{t1+t2}|, k <= N, 10x10 t-grid");
    add_verdict(rep, "semigroup law runtime " + label, 1, law_seconds, 1.0, "<=", "seconds");

    const auto m0 = semigroup_of(o, 0.0).values(n);
    double id = 0.0;
    for (double v : m0) id = std::max(id, std::abs(v - 1.0));
    add_verdict(rep, "identity at t=0 " + label, 0, id, 0.0, "<=");

    double excess = -std::numeric_limits<double>::infinity();
    for (const auto& mem : suite) {
      const double nf = parseval_l2_norm(mem.f);
      for (double t : cfg.t_grid.values()) {
        const double nt = parseval_l2_norm(apply(semigroup_of(o, t), mem.f));
        excess = std::max(excess, (nt - nf) / nf);
      }
    }
    add_verdict(rep, "L2 contraction " + label, 2, excess, 1e-12, "<=", "max (||T(t)f|| - ||f||)/||f||");

    if (o.gamma <= 1.0) {
      double sup_excess = -std::numeric_limits<double>::infinity();
      double l1_excess = -std::numeric_limits<double>::infinity();
      for (const auto& mem : suite) {
        if (mem.name.rfind("Y_", 0) == 0) continue;
        const double ns = function_norm(mem.f, sup_norm());
        const double n1 = function_norm(mem.f, l1_norm());
        for (double t : {1e-3, 1e-2, 1e-1, 1.0}) {
          const auto g = apply(semigroup_of(o, t), mem.f);
          sup_excess = std::max(sup_excess, (function_norm(g, sup_norm()) - ns) / ns);
          l1_excess = std::max(l1_excess, (function_norm(g, l1_norm()) - n1) / n1);
        }
      }
      add_verdict(rep, "sup contraction " + label, 0, sup_excess, 1e-9, "<=", "grid sup-norm surrogate");
      add_verdict(rep, "L1 contraction " + label, 0, l1_excess, 1e-6, "<=", "Gauss quadrature of |f|");
    }

    bool monotone = true;
    double final_rel = 0.0;
    for (const auto& mem : suite) {
      const double nf = parseval_l2_norm(mem.f);
      std::vector<double> ts;
      std::vector<double> errs;
      for (int j = cfg.continuity_steps; j >= 0; --j) {
        const double t = std::ldexp(1.0, -j);
        ts.push_back(t);
        errs.push_back(parseval_l2_norm(apply(subtract_identity(semigroup_of(o, t)), mem.f)));
      }
      for (std::size_t i = 1; i < errs.size(); ++i) monotone = monotone && errs[i - 1] <= errs[i];
      final_rel = std::max(final_rel, errs.front() / nf);
      push_rows(rep, "continuity/" + label + "/" + mem.name, ts, errs, std::vector<double>(ts.size(), nf));
    }
    add_verdict(rep, "strong continuity monotone " + label, 0, monotone ? 1.0 : 0.0, 1.0, "==",
                "||T(t)f - f|| nonincreasing as t = 2^-j decreases");
    add_verdict(rep, "strong continuity limit " + label, 0, final_rel, 1e-6, "<=",
                "||T(2^-" + std::to_string(cfg.continuity_steps) + ")f - f|| / ||f||");

    double gen = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double a = std::pow(p(k), o.gamma);
      const double h = 1e-3 / a;
      const double d1 = -semigroup_of(o, h).complement(k) / h;
      const double d2 = -semigroup_of(o, 0.5 * h).complement(k) / (0.5 * h);
      gen = std::max(gen, std::abs((2.0 * d2 - d1) + a) / a);
    }
    add_verdict(rep, "generator limit " + label, 0, gen, 1e-6, "<=",
                "Richardson-extrapolated (m_h(k) - 1)/h vs -(p(k))^gamma");

    double bool_id = 0.0;
    for (int r : cfg.r_values) {
      for (double t : {1e-3, 0.1, 1.0}) {
        const auto m = semigroup_of(o, t);
        for (const auto& mem : suite) {
          const auto lhs = apply(boolean(m, r), mem.f);
          const auto rest = apply(complement_power(m, r), mem.f);
          for (std::size_t i = 0; i < lhs.size(); ++i) {
            bool_id = std::max(bool_id, std::abs(lhs.values[i] - (mem.f.values[i] - rest.values[i])));
          }
        }
      }
    }
    add_verdict(rep, "Boolean identity " + label, 0, bool_id, 1e-14, "<=",
                "(+)^r T f vs f - (I - T)^r f, coefficientwise");

    double law8 = 0.0;
    for (int r : {1, 2, 3}) {
      for (double t : cfg.t_grid.values()) {
        const auto comp = complement_power(semigroup_of(o, t), r);
        for (int j = 0; j <= std::min(32, n); ++j) {
          auto y = LaplaceCoefficients::zonal(lam, n);
          y.values[j] = 1.0;
          const double measured = parseval_l2_norm(apply(comp, y));
          const double a = j == 0 ? 0.0 : std::pow(p(j), o.gamma);
          const double closed = std::pow(1.0 - std::exp(-a * t), r);
          law8 = std::max(law8, std::abs(measured - closed));
        }
      }
    }
    add_verdict(rep, "eigenfunction error law " + label, 8, law8, 1e-14, "<=",
                "| ||(I - (+)^r T(t)) Y_j|| - (1 - e^{-(p(j))^gamma t})^r |, j <= 32, r <= 3");
  }
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------- Bernstein

ExperimentReport run_bernstein_study(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "bernstein";
  const double lam = cfg.lambda();
  const int n = cfg.band_limit;
  const auto suite = build_suite(cfg.suite, lam, n, cfg.seed);
  const auto ts = cfg.t_grid.values();
  const double inv_e = std::exp(-1.0);

  for (const auto& o : cfg.operators) {
    const std::string label = o.label(lam);
    const auto gen = generator_multiplier(o.polynomial(), o.gamma, 1, SemigroupOptions{o.permissive});
    double worst = 0.0;
    double grid_n = 0.0;
    for (const auto& mem : suite) {
      const double nf = parseval_l2_norm(mem.f);
      std::vector<double> lhs;
      for (double t : ts) {
        const double v = t * parseval_l2_norm(apply(compose(gen, semigroup_of(o, t)), mem.f));
        lhs.push_back(v);
        worst = std::max(worst, v / nf);
      }
      push_rows(rep, "bernstein/" + label + "/" + mem.name, ts, lhs, std::vector<double>(ts.size(), nf));
      if (mem.name.rfind("Y_", 0) != 0) {
        const double ns = function_norm(mem.f, sup_norm());
        for (double t : {1e-3, 1e-2, 1e-1, 1.0}) {
          const auto g = apply(compose(gen, semigroup_of(o, t)), mem.f);
          grid_n = std::max(grid_n, t * function_norm(g, sup_norm()) / ns);
        }
      }
    }
    add_verdict(rep, "Bernstein L2 bound " + label, 6, worst, inv_e + 1e-10, "<=",
                "sup over suite and t-grid of t ||A T(t) f|| / ||f||");

    double dev = 0.0;
    const auto a = symbol(o, n);
    for (int j : cfg.suite.eigen) {
      auto y = LaplaceCoefficients::zonal(lam, n);
      y.values[j] = 1.0;
      const double t = 1.0 / a[j];
      const double v = t * parseval_l2_norm(apply(compose(gen, semigroup_of(o, t)), y));
      dev = std::max(dev, std::abs(v - inv_e));
    }
    add_verdict(rep, "Bernstein single-mode maximum " + label, 6, dev, 1e-10, "<=",
                "|t ||A T(t) Y_j|| - 1/e| at t = (p(j))^-gamma");
    rep.metrics["empirical_N_sup_norm"][label] = grid_n;
  }
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------- equivalence

namespace {

void relation_verdicts(ExperimentReport& rep, const Relation& rel, const std::vector<double>& fine_ts,
                       const std::string& desk_detail = {}) {
  const auto s = summarize(rel, fine_ts);
  add_verdict(rep, "slope agreement " + rel.name, 9, s.worst_slope_gap, 0.05, "<=",
              "max |slope(lhs) - slope(rhs)| on the smallest t-decade (worst: " + s.worst_member + ")" + desk_detail);
  add_verdict(rep, "band stability " + rel.name, 9, s.coarse.change_to(s.fine), 0.05, "<=",
              "relative change of the ratio band [" + format_double(s.coarse.lo) + ", " +
                  format_double(s.coarse.hi) + "] under t-grid doubling");
  rep.metrics["bands"][rel.name] = {{"min", s.coarse.lo}, {"max", s.coarse.hi}, {"refined_min", s.fine.lo},
                                    {"refined_max", s.fine.hi}, {"worst_slope_gap", s.worst_slope_gap}};
}

}  // namespace

ExperimentReport run_equivalence_study(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "equivalence";
  const double lam = cfg.lambda();
  const int n = cfg.band_limit;
  const auto fine_ts = cfg.t_grid.refined().values();
  const auto coarse_ts = every_other(fine_ts);
  const auto desk_ts = cfg.desk_t_grid.values();
  ModulusOptions mopts;

  std::vector<SuiteMember> eigen;
  for (int j : cfg.suite.eigen) {
    auto y = LaplaceCoefficients::zonal(lam, n);
    y.values[j] = 1.0;
    eigen.push_back({"Y_" + std::to_string(j), y});
  }

  for (const auto& o : cfg.operators) {
    if (o.gamma > 1.0) continue;
    const std::string label = o.label(lam);
    const double step_power = 1.0 / (o.degree() * o.gamma);
    const auto a = symbol(o, n);
    for (int r : cfg.r_values) {
      const double alpha = o.degree() * r * o.gamma;
      std::vector<double> ar(a.size());
      for (std::size_t k = 0; k < a.size(); ++k) ar[k] = std::pow(a[k], r);

      Relation mod{"modulus " + label + " " + rtag(r), {}, {}, {}};
      Relation kf{"K-functional " + label + " " + rtag(r), {}, {}, {}};
      double desk_gap = 0.0;
      for (const auto& mem : eigen) {
        std::vector<double> lhs;
        std::vector<double> rm;
        std::vector<double> rk;
        for (double t : fine_ts) {
          lhs.push_back(boolean_error(mem.f, o, t, r));
          rm.push_back(modulus(mem.f, alpha, std::pow(t, step_power), {}, mopts).value);
          rk.push_back(kfunctional_l2_exact(mem.f, ar, std::pow(t, r)).value);
        }
        mod.members.push_back(mem.name);
        mod.lhs.push_back(lhs);
        mod.rhs.push_back(rm);
        kf.members.push_back(mem.name);
        kf.lhs.push_back(lhs);
        kf.rhs.push_back(rk);
        push_rows(rep, "modulus/" + label + "/" + rtag(r) + "/" + mem.name, coarse_ts, every_other(lhs), every_other(rm));
        push_rows(rep, "kfunctional/" + label + "/" + rtag(r) + "/" + mem.name, coarse_ts, every_other(lhs),
                  every_other(rk));

        std::vector<double> dl;
        std::vector<double> dr;
        for (double t : desk_ts) {
          dl.push_back(boolean_error(mem.f, o, t, r));
          dr.push_back(modulus(mem.f, alpha, std::pow(t, step_power), {}, mopts).value);
        }
        const auto e = equivalence_ratio(dl, dr, desk_ts);
        desk_gap = std::max(desk_gap, std::abs(e.lhs_fit.slope - e.rhs_fit.slope));
      }
      rep.metrics["desk_grid_slope_gap"][mod.name] = desk_gap;
      relation_verdicts(rep, mod, fine_ts);
      relation_verdicts(rep, kf, fine_ts);
    }
  }

  // omega^alpha(f, t) against K_{D^{alpha/2}}(f, t^alpha), D with symbol k(k + 2 lambda).
  for (double alpha : cfg.modulus_alphas) {
    std::vector<double> d(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) d[k] = std::pow(k * (k + 2.0 * lam), 0.5 * alpha);
    Relation rel{"modulus vs K alpha=" + format_double(alpha), {}, {}, {}};
    for (const auto& mem : eigen) {
      std::vector<double> lhs;
      std::vector<double> rhs;
      for (double t : fine_ts) {
        lhs.push_back(modulus(mem.f, alpha, t, {}, mopts).value);
        rhs.push_back(kfunctional_l2_exact(mem.f, d, std::pow(t, alpha)).value);
      }
      rel.members.push_back(mem.name);
      rel.lhs.push_back(lhs);
      rel.rhs.push_back(rhs);
      push_rows(rep, "modulus_vs_k/alpha=" + format_double(alpha) + "/" + mem.name, coarse_ts, every_other(lhs),
                every_other(rhs));
    }
    relation_verdicts(rep, rel, fine_ts);
  }
  rep.metrics["slope_window"] = "t in [t_min, 10 t_min]";
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------- saturation

ExperimentReport run_saturation_study(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "saturation";
  const double lam = cfg.lambda();
  const int n = cfg.band_limit;
  const auto ts = cfg.t_grid.values();
  const double window = 10.0 * ts.front() * (1.0 + 1e-12);
  const auto suite = build_suite(cfg.suite, lam, n, cfg.seed);
  auto constant = LaplaceCoefficients::zonal(lam, n);
  constant.values[0] = 1.0;

  for (const auto& o : cfg.operators) {
    const std::string label = o.label(lam);
    const auto a = symbol(o, n);
    for (int r : cfg.r_values) {
      const std::string tag = label + " " + rtag(r);
      const double tr_min = std::pow(ts.front(), r);

      // (a) f with (p(k))^{r gamma} f_k = -g_k lies in the saturation class.
      auto g = embed(random_zonal(lam, cfg.suite.random_band_limit, cfg.seed + 7), n);
      g.values[0] = 0.0;
      auto f = g;
      for (int k = 1; k <= n; ++k) f.values[k] = -g.values[k] / std::pow(a[k], r);
      const double gn = parseval_l2_norm(g);
      double worst_a = 0.0;
      for (double t : ts) worst_a = std::max(worst_a, boolean_error(f, o, t, r) / std::pow(t, r) / gn);
      add_verdict(rep, "class member bounded " + tag, 11, worst_a, 1.0 + 1e-10, "<=",
                  "sup_t ||(I - (+)^r T(t)) f|| / (t^r ||g||)");

      // (b) exact law for eigenfunctions.
      double law = 0.0;
      double limit = 0.0;
      for (int j : cfg.suite.eigen) {
        auto y = LaplaceCoefficients::zonal(lam, n);
        y.values[j] = 1.0;
        std::vector<double> lhs;
        std::vector<double> rhs;
        for (double t : ts) {
          const double e = boolean_error(y, o, t, r);
          const double closed = std::pow(-std::expm1(-a[j] * t), r);
          law = std::max(law, std::abs(e / closed - 1.0));
          lhs.push_back(e);
          rhs.push_back(std::pow(t, r));
        }
        const double lead = std::pow(a[j], r);
        limit = std::max(limit, std::abs(lhs.front() / tr_min / lead - 1.0) / (0.5 * r * a[j] * ts.front()));
        push_rows(rep, "saturation/" + label + "/" + rtag(r) + "/Y_" + std::to_string(j), ts, lhs, rhs);
      }
      add_verdict(rep, "eigenfunction law " + tag, 11, law, 1e-12, "<=",
                  "relative deviation from (1 - e^{-(p(j))^gamma t})^r");
      add_verdict(rep, "eigenfunction limit " + tag, 11, limit, 1.01, "<=",
                  "|err/t^r / (p(j))^{r gamma} - 1| in units of r (p(j))^gamma t_min / 2 (first-order term)");

      // (d) constants are fixed; every other member saturates at exactly t^r.
      double const_err = 0.0;
      for (double t : ts) const_err = std::max(const_err, boolean_error(constant, o, t, r));
      add_verdict(rep, "constant fixed " + tag, 11, const_err, 0.0, "==", "error of a constant function");
      double away = std::numeric_limits<double>::infinity();
      double worst_slope = 0.0;
      for (const auto& mem : suite) {
        if (is_constant(mem.f)) continue;
        const double floor_value = 0.5 * std::pow(a[1], r) * nonconstant_norm(mem.f);
        std::vector<double> errs;
        for (double t : ts) errs.push_back(boolean_error(mem.f, o, t, r));
        for (std::size_t i = 0; i < ts.size() && ts[i] <= window; ++i) {
          away = std::min(away, errs[i] / std::pow(ts[i], r) / floor_value);
        }
        if (mem.name.rfind("smooth_", 0) == 0) {
          const auto fit = loglog_slope(ts, errs, window);
          worst_slope = std::max(worst_slope, std::abs(fit.slope - r));
          push_rows(rep, "saturation/" + label + "/" + rtag(r) + "/" + mem.name, ts, errs,
                    [&] {
                      std::vector<double> v;
                      for (double t : ts) v.push_back(std::pow(t, r));
                      return v;
                    }());
        }
      }
      add_verdict(rep, "non-constant error/t^r bounded away from 0 " + tag, 11, away, 1.0, ">=",
                  "min over the smallest decade of err/t^r in units of (p(1))^{r gamma} ||f - Y_0 f|| / 2");
      add_verdict(rep, "smooth suite slope " + tag, 11, worst_slope, 0.05, "<=", "|fitted slope - r|");

      // (c) slowly decaying coefficients outside the class: reported only.
      constexpr int kSlow = 512;
      auto slow = LaplaceCoefficients::zonal(lam, kSlow);
      for (int k = 1; k <= kSlow; ++k) slow.values[k] = std::pow(k, -0.75);
      const double a_top = std::pow(o.polynomial()(kSlow), o.gamma);
      const double lo = std::min(0.1, 10.0 / a_top);
      std::vector<double> sts;
      std::vector<double> serr;
      for (double t : TGrid{lo, 1.0, 21}.values()) {
        sts.push_back(t);
        serr.push_back(boolean_error(slow, o, t, r));
      }
      rep.metrics["slow_decay_slope"][tag] = loglog_slope(sts, serr, 1.0).slope;
    }
  }
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------- class equivalence

ExperimentReport run_class_equivalence(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "class-equiv";
  const double lam = cfg.lambda();
  const int n = cfg.band_limit;
  const auto ts = cfg.t_grid.values();
  std::vector<double> a(static_cast<std::size_t>(n) + 1);
  std::vector<double> b(a.size());
  for (int k = 0; k <= n; ++k) {
    a[k] = static_cast<double>(k) * k;
    b[k] = k * (k + 2.0 * lam);
  }

  auto band_for = [&](const SuiteSpec& spec, bool record) {
    Band band;
    for (const auto& mem : build_suite(spec, lam, n, cfg.seed)) {
      std::vector<double> ka;
      std::vector<double> kb;
      for (double t : ts) {
        ka.push_back(kfunctional_l2_exact(mem.f, a, t).value);
        kb.push_back(kfunctional_l2_exact(mem.f, b, t).value);
      }
      band.add(equivalence_ratio(ka, kb));
      if (record) push_rows(rep, "class/" + mem.name, ts, ka, kb);
    }
    return band;
  };

  SuiteSpec base = cfg.suite;
  base.smooth.clear();
  SuiteSpec doubled = base;
  std::set<int> js(base.eigen.begin(), base.eigen.end());
  for (int j : base.eigen) js.insert(std::min(n, j + (j + 1) / 2));
  doubled.eigen.assign(js.begin(), js.end());
  doubled.random_count = 2 * base.random_count;

  const Band b1 = band_for(base, true);
  const Band b2 = band_for(doubled, false);
  const bool finite = std::isfinite(b1.lo) && std::isfinite(b1.hi) && b1.lo > 0.0;
  add_verdict(rep, "K ratio band finite", 12, finite ? b1.hi / b1.lo : std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::max(), "<=",
              "band [" + format_double(b1.lo) + ", " + format_double(b1.hi) + "] of K_A / K_B, a = k^2, b = k(k+2 lambda)");
  add_verdict(rep, "K ratio band stable under suite doubling", 12, b1.change_to(b2), 0.05, "<=",
              "doubled-suite band [" + format_double(b2.lo) + ", " + format_double(b2.hi) + "]");

  double same = 0.0;
  for (const auto& mem : build_suite(base, lam, n, cfg.seed)) {
    for (double t : ts) {
      const double x = kfunctional_l2_exact(mem.f, a, t).value;
      const double y = kfunctional_l2_exact(mem.f, a, t).value;
      same = std::max(same, std::abs(x / y - 1.0));
    }
  }
  add_verdict(rep, "identical operators give ratio 1", 0, same, 1e-12, "<=");

  const int jt = n;
  auto y = LaplaceCoefficients::zonal(lam, n);
  y.values[jt] = 1.0;
  rep.metrics["band"] = {{"min", b1.lo}, {"max", b1.hi}, {"doubled_min", b2.lo}, {"doubled_max", b2.hi}};
  rep.metrics["high_degree_ratio_t=1e-3"] =
      kfunctional_l2_exact(y, a, 1e-3).value / kfunctional_l2_exact(y, b, 1e-3).value;
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------- integral representation

ExperimentReport run_integral_representation_check(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "integral-rep";
  const double lam = cfg.lambda();
  const int n = cfg.integral_rep.band_limit;
  const auto f = random_zonal(lam, n, cfg.seed + 11);
  const auto gl = build_theta_quadrature(0.5, 16);

  for (const auto& o : cfg.integral_rep.operators) {
    const std::string label = o.label(lam);
    const auto a = symbol(o, n);
    for (int r : cfg.integral_rep.r) {
      double worst = 0.0;
      for (double t : cfg.integral_rep.t) {
        const auto direct = apply(complement_power(semigroup_of(o, t), r), f);
        const auto g = apply(generator_multiplier(o.polynomial(), o.gamma, r, SemigroupOptions{o.permissive}), f);
        for (int k = 0; k <= n; ++k) {
          // (T(t) - I)^r f has symbol (-(1 - m))^r.
          const double lhs = (r % 2 == 0 ? 1.0 : -1.0) * direct.values[k];
          // Composite Gauss-Legendre in u with panels no wider than 1/a.
          const int panels = std::max(1, static_cast<int>(std::ceil(a[k] * t)));
          std::vector<double> e;
          std::vector<double> w;
          for (int pnl = 0; pnl < panels; ++pnl) {
            const double lo = t * pnl / panels;
            const double hi = t * (pnl + 1) / panels;
            for (std::size_t i = 0; i < gl.size(); ++i) {
              const double u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[i];
              e.push_back(std::exp(-a[k] * u));
              w.push_back(0.5 * (hi - lo) * gl.weights[i]);
            }
          }
          double integral = 0.0;
          if (r == 1) {
            for (std::size_t i = 0; i < e.size(); ++i) integral += w[i] * e[i];
          } else {
            for (std::size_t i = 0; i < e.size(); ++i) {
              double inner = 0.0;
              for (std::size_t jj = 0; jj < e.size(); ++jj) inner += w[jj] * (e[i] * e[jj]);
              integral += w[i] * inner;
            }
          }
          const double rhs = integral * g.values[k];
          worst = std::max(worst, std::abs(lhs - rhs));
          if (k == n) rep.rows.push_back({"integral/" + label + "/" + rtag(r) + "/k=" + std::to_string(k), t, lhs, rhs,
                                          rhs != 0.0 ? lhs / rhs : 1.0});
        }
      }
      add_verdict(rep, "integral representation " + label + " " + rtag(r), 7, worst, 1e-10, "<=",
                  "max per-coefficient |(T(t) - I)^r f - int_[0,t]^r T(u_1 + ... + u_r) A^r f du|");
    }
  }
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------- kernels

ExperimentReport run_kernel_study(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "kernel";
  const double lam = cfg.lambda();
  const auto grid = uniform_theta_grid(cfg.kernel.positivity_points);
  KernelOptions kopts;
  kopts.dimension = cfg.dimension;

  double worst_norm = 0.0;
  int file_index = 0;
  for (const auto& spec : cfg.kernel.multipliers) {
    const auto m = parse_multiplier_spec(spec, lam);
    ZonalKernel kern;
    try {
      kern = synthesize_kernel(m, kopts, grid);
    } catch (const TruncationError& e) {
      add_verdict(rep, "synthesis " + m.tag(), 3, std::numeric_limits<double>::quiet_NaN(), 0.0, "<=", e.what());
      continue;
    }
    const int r = m.params().r.value_or(1);
    const auto pos = positivity_report(kern);
    if (r == 1 && m.params().t.has_value()) {
      add_verdict(rep, "positivity " + m.tag(), 3, pos.margin / pos.max_value, -pos.tolerance, ">=",
                  "(min - tail) / max over " + std::to_string(grid.size()) + " angles, N=" +
                      std::to_string(kern.truncation));
    } else {
      rep.metrics["boolean_min_over_max"][m.tag()] = pos.min_value / pos.max_value;
    }
    const double integral = l1_normalization(kern, kernel_quadrature(kern));
    worst_norm = std::max(worst_norm, std::abs(integral - 1.0));
    add_verdict(rep, "normalization " + m.tag(), 3, std::abs(integral - 1.0), 1e-9, "<=",
                "|integral of the kernel - 1|");
    if (r > 1) {
      add_verdict(rep, "Boolean L1 bound " + m.tag(), 0, kernel_l1_norm(kern), std::ldexp(1.0, r), "<=",
                  "||kernel||_1 <= 2^r");
    }
    rep.metrics["truncation"][m.tag()] = kern.truncation;
    std::ostringstream csv;
    write_kernel_csv(csv, kern);
    rep.files.emplace_back("kernel_" + std::to_string(file_index++) + ".csv", csv.str());
  }
  rep.metrics["worst_normalization_error"] = worst_norm;

  for (double u : cfg.kernel.poisson_u) {
    const auto m = abel_poisson_multiplier(1.0, -std::log(u));
    const auto kern = synthesize_kernel(m, kopts, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      err = std::max(err, std::abs(kern.values[i] - closed_form_poisson(u, std::cos(grid[i]), cfg.dimension)));
    }
    add_verdict(rep, "Poisson closed form u=" + format_double(u), 4, err, 1e-8, "<=",
                "max abs error over " + std::to_string(grid.size()) + " angles");
  }

  if (cfg.dimension == 3) {
    const int deg = cfg.kernel.convolution_degree;
    const auto m = abel_poisson_multiplier(1.0, -std::log(cfg.kernel.convolution_u));
    const auto kern = synthesize_kernel(m, kopts, {});
    const int band = (deg + kern.truncation + 1) / 2;
    const SphereConvolution conv(kern, build_sphere_grid(std::max(band, deg)), deg);
    double worst = 0.0;
    double young_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.kernel.convolution_count; ++i) {
      const auto f = random_sphere(deg, cfg.seed + 2000 + i);
      const auto physical = conv(f);
      const auto coeff = apply(m, f);
      for (std::size_t q = 0; q < f.size(); ++q) worst = std::max(worst, std::abs(physical[q] - coeff[q]));
      if (i == 0) {
        const auto y = young_check(f, kern, conv.grid());
        young_slack = y.bound - y.convolution_norm;
      }
    }
    add_verdict(rep, "Funk-Hecke convolution", 5, worst, 1e-7, "<=",
                std::to_string(cfg.kernel.convolution_count) + " random S^2 functions of degree " +
                    std::to_string(deg) + ", max coefficient error");
    add_verdict(rep, "Young inequality", 0, young_slack, 0.0, ">=", "||phi||_1 ||f|| - ||f * phi||");

    auto one = LaplaceCoefficients::sphere(deg);
    one[0] = 1.0;
    const auto c = conv(one);
    double const_err = 0.0;
    for (std::size_t q = 0; q < c.size(); ++q) const_err = std::max(const_err, std::abs(c[q] - one[q]));
    add_verdict(rep, "constant preserved by convolution", 0, const_err, 1e-12, "<=");

    const auto dkern = synthesize_kernel(delta_multiplier(0), kopts, {});
    const auto f = random_sphere(deg, cfg.seed + 2999);
    const auto g = SphereConvolution(dkern, build_sphere_grid(deg), deg)(f);
    double delta_err = std::abs(g[0] - f[0]);
    for (std::size_t q = 1; q < g.size(); ++q) delta_err = std::max(delta_err, std::abs(g[q]));
    add_verdict(rep, "degree-0 kernel projects onto constants", 0, delta_err, 1e-12, "<=");
  }
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

// ---------------------------------------------------------------- dispatch and output

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"kernel",      "semigroup",   "bernstein",   "equivalence",
                                              "saturation",  "class-equiv", "integral-rep"};
  return names;
}

ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "kernel") return run_kernel_study(cfg);
  if (name == "semigroup") return run_semigroup_checks(cfg);
  if (name == "bernstein") return run_bernstein_study(cfg);
  if (name == "equivalence") return run_equivalence_study(cfg);
  if (name == "saturation") return run_saturation_study(cfg);
  if (name == "class-equiv") return run_class_equivalence(cfg);
  if (name == "integral-rep") return run_integral_representation_check(cfg);
  throw ConfigError("unknown experiment '" + name + "'");
}

namespace {

// JSON has no inf/nan; keep them readable as strings.
json number_or_text(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

json report_to_json(const ExperimentReport& report) {
  json verdicts = json::array();
  for (const auto& v : report.verdicts) {
    verdicts.push_back({{"name", v.name},
                        {"criterion", v.criterion},
                        {"passed", v.passed},
                        {"measured", number_or_text(v.measured)},
                        {"tolerance", number_or_text(v.tolerance)},
                        {"relation", v.relation},
                        {"detail", v.detail}});
  }
  json files = json::array();
  for (const auto& f : report.files) files.push_back(f.first);
  return {{"name", report.name},
          {"passed", report.passed()},
          {"wall_clock_seconds", report.wall_clock_seconds},
          {"metrics", report.metrics},
          {"verdicts", verdicts},
          {"rows", report.rows.size()},
          {"files", files}};
}

std::string rows_to_csv(const std::vector<CsvRow>& rows) {
  std::string out = "series,t,lhs,rhs,ratio\n";
  for (const auto& r : rows) {
    out += r.series + ',' + format_double(r.t) + ',' + format_double(r.lhs) + ',' + format_double(r.rhs) + ',' +
           format_double(r.ratio) + '\n';
  }
  return out;
}

void write_outputs(const std::filesystem::path& dir, const std::string& subcommand, const ExperimentConfig& cfg,
                   const std::vector<ExperimentReport>& reports) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    if (!out) throw DataError("cannot write " + (dir / name).string());
  };
  json all = json::array();
  bool passed = true;
  for (const auto& rep : reports) {
    write(rep.name + ".csv", rows_to_csv(rep.rows));
    for (const auto& f : rep.files) write(f.first, f.second);
    all.push_back(report_to_json(rep));
    passed = passed && rep.passed();
  }
  const json doc{{"subcommand", subcommand}, {"config", config_to_json(cfg)}, {"experiments", all}, {"passed", passed}};
  write("report.json", doc.dump(2) + "\n");
}

}  // namespace sphsemi
