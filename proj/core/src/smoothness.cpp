#include "sphsemi/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>

#include "sphsemi/error.hpp"
#include "sphsemi/quadrature.hpp"

namespace sphsemi {

namespace {

// Basis values e_k(x_i) on a fixed node set, shared between calls.
struct ZonalGrid {
  std::vector<double> theta;
  std::vector<double> weights;  // empty for sup grids
  int max_degree = 0;
  std::vector<double> basis;    // basis[i * (N+1) + k]
};

std::shared_ptr<const ZonalGrid> cached_grid(bool gauss, double lambda, int points, int max_degree) {
  static std::mutex mu;
  static std::map<std::tuple<bool, double, int, int>, std::shared_ptr<const ZonalGrid>> cache;
  const auto key = std::make_tuple(gauss, lambda, points, max_degree);
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto g = std::make_shared<ZonalGrid>();
  g->max_degree = max_degree;
  if (gauss) {
    const auto q = build_theta_quadrature(lambda, points);
    g->theta = q.theta;
    g->weights = q.weights;
  } else {
    g->theta.resize(points);
    for (int i = 0; i < points; ++i) g->theta[i] = std::numbers::pi * i / (points - 1);
  }
  const std::size_t stride = static_cast<std::size_t>(max_degree) + 1;
  g->basis.resize(g->theta.size() * stride);
  for (std::size_t i = 0; i < g->theta.size(); ++i) {
    const auto e = zonal_basis(max_degree, lambda, std::cos(g->theta[i]));
    std::copy(e.begin(), e.end(), g->basis.begin() + static_cast<std::ptrdiff_t>(i * stride));
  }
  cache.emplace(key, g);
  return g;
}

std::vector<double> synth_on(const ZonalGrid& g, const LaplaceCoefficients& f) {
  const std::size_t stride = static_cast<std::size_t>(g.max_degree) + 1;
  std::vector<double> out(g.theta.size(), 0.0);
  for (std::size_t i = 0; i < g.theta.size(); ++i) {
    const double* e = &g.basis[i * stride];
    double s = 0.0;
    for (int k = 0; k <= f.max_degree; ++k) s += f.values[k] * e[k];
    out[i] = s;
  }
  return out;
}

void require_zonal(const LaplaceCoefficients& f) {
  if (f.kind != SeriesKind::zonal) {
    throw ParameterError("function_norm: grid norms are available for zonal series only");
  }
}

double golden_max(const std::function<double(double)>& g, double a, double b, double rel_tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = g(c);
  double fd = g(d);
  for (int it = 0; it < 200 && (b - a) > rel_tol * std::max(std::abs(a), std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = g(d);
    }
  }
  return fc > fd ? c : d;
}

}  // namespace

double function_norm(const LaplaceCoefficients& f, const NormSpec& norm) {
  switch (norm.kind) {
    case NormKind::l2:
      return parseval_l2_norm(f);
    case NormKind::lp_grid: {
      require_zonal(f);
      if (!(norm.p >= 1.0)) throw ParameterError("function_norm: exponent must be >= 1");
      const int n = std::max(4 * (f.max_degree + 1), 512);
      const auto g = cached_grid(true, f.lambda, n, f.max_degree);
      const auto v = synth_on(*g, f);
      ThetaQuadrature q;
      q.lambda = f.lambda;
      q.theta = g->theta;
      q.weights = g->weights;
      q.x.resize(g->theta.size());
      return zonal_lp_norm_samples(v, norm.p, q);
    }
    case NormKind::sup_grid: {
      require_zonal(f);
      const int n = std::max(norm.grid_points, 2);
      const auto g = cached_grid(false, f.lambda, n, f.max_degree);
      const auto v = synth_on(*g, f);
      std::size_t best = 0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
      }
      const double lo = g->theta[best == 0 ? 0 : best - 1];
      const double hi = g->theta[std::min(best + 1, v.size() - 1)];
      auto absf = [&](double th) { return std::abs(synth_zonal(f, th)); };
      const double th = golden_max(absf, lo, hi, 1e-13);
      return std::max(std::abs(v[best]), absf(th));
    }
  }
  throw ParameterError("function_norm: unknown norm kind");
}

ModulusResult modulus(const LaplaceCoefficients& f, double alpha, double t, const NormSpec& norm,
                      const ModulusOptions& options) {
  if (!(alpha > 0.0)) throw ParameterError("modulus: alpha must be positive");
  if (!(t > 0.0) || t > std::numbers::pi) throw ParameterError("modulus: t must lie in (0, pi]");
  if (options.grid_points < 2 || !(options.min_ratio > 0.0 && options.min_ratio < 1.0)) {
    throw ParameterError("modulus: invalid grid options");
  }
  auto g = [&](double theta) {
    return function_norm(apply(frac_difference_multiplier(alpha, theta, f.lambda), f), norm);
  };
  auto once = [&](int points) {
    const double lmin = std::log(t * options.min_ratio);
    const double lmax = std::log(t);
    std::vector<double> thetas(points);
    double best = -1.0;
    int best_i = 0;
    for (int i = 0; i < points; ++i) {
      thetas[i] = i == points - 1 ? t : std::exp(lmin + (lmax - lmin) * i / (points - 1));
      const double v = g(thetas[i]);
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    ModulusResult r{best, thetas[best_i], points};
    if (best_i > 0 && best_i < points - 1) {
      auto lg = [&](double s) { return g(std::exp(s)); };
      const double s = golden_max(lg, std::log(thetas[best_i - 1]), std::log(thetas[best_i + 1]), 1e-10);
      const double v = lg(s);
      if (v > r.value) r = {v, std::exp(s), points};
    }
    return r;
  };
  ModulusResult r = once(options.grid_points);
  if (!options.doubling) return r;
  for (int points = 2 * options.grid_points; points <= options.max_grid_points; points *= 2) {
    const ModulusResult next = once(points);
    const double change = std::abs(next.value - r.value);
    r = next;
    if (change <= options.doubling_tolerance * std::abs(next.value)) break;
  }
  return r;
}

KFunctionalResult kfunctional_l2_exact(const LaplaceCoefficients& f, const MultiplierSequence& a, double t) {
  const auto v = a.values(f.max_degree);
  return kfunctional_l2_exact(f, v, t);
}

KFunctionalResult kfunctional_l2_exact(const LaplaceCoefficients& f, std::span<const double> a, double t) {
  if (!(t >= 0.0)) throw ParameterError("kfunctional: t must be >= 0");
  if (a.size() < static_cast<std::size_t>(f.max_degree) + 1) {
    throw ParameterError("kfunctional: symbol shorter than the band limit");
  }
  std::vector<double> fk;
  std::vector<double> ak;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values[i] == 0.0) continue;
    const double ai = std::abs(a[f.degree_of(i)]);
    // Components in the kernel of A are reproduced exactly by every g on the path.
    if (ai == 0.0) continue;
    fk.push_back(std::abs(f.values[i]));
    ak.push_back(ai);
  }
  if (t == 0.0 || fk.empty()) return {0.0, 0.0};

  auto objective = [&](double mu) {
    double e2 = 0.0;
    double g2 = 0.0;
    for (std::size_t i = 0; i < fk.size(); ++i) {
      const double s = mu * ak[i] * ak[i];
      const double d = 1.0 + s;
      const double err = fk[i] * (s / d);
      const double ag = ak[i] * fk[i] / d;
      e2 += err * err;
      g2 += ag * ag;
    }
    return std::sqrt(e2) + t * std::sqrt(g2);
  };

  double af = 0.0;
  double fn = 0.0;
  for (std::size_t i = 0; i < fk.size(); ++i) {
    af += (ak[i] * fk[i]) * (ak[i] * fk[i]);
    fn += fk[i] * fk[i];
  }
  KFunctionalResult best{t * std::sqrt(af), 0.0};
  if (std::sqrt(fn) < best.value) best = {std::sqrt(fn), std::numeric_limits<double>::infinity()};

  const auto [amin, amax] = std::minmax_element(ak.begin(), ak.end());
  const double lo = std::log(1e-8 / (*amax * *amax));
  const double hi = std::log(1e8 / (*amin * *amin));
  constexpr int kScan = 400;
  int best_i = -1;
  double best_scan = std::numeric_limits<double>::infinity();
  std::vector<double> grid(kScan);
  for (int i = 0; i < kScan; ++i) {
    grid[i] = lo + (hi - lo) * i / (kScan - 1);
    const double v = objective(std::exp(grid[i]));
    if (v < best_scan) {
      best_scan = v;
      best_i = i;
    }
  }
  auto neg = [&](double s) { return -objective(std::exp(s)); };
  const double a0 = grid[std::max(best_i - 1, 0)];
  const double b0 = grid[std::min(best_i + 1, kScan - 1)];
  const double s = golden_max(neg, a0, b0, 1e-12);
  const double refined = objective(std::exp(s));
  if (best_scan < best.value) best = {best_scan, std::exp(grid[best_i])};
  if (refined < best.value) best = {refined, std::exp(s)};
  return best;
}

double kfunctional_realization_upper(const LaplaceCoefficients& f, const RegularPolynomial& p, double gamma,
                                     int r, double t, const RealizationOptions& options) {
  if (r < 1) throw ParameterError("realization: r must be >= 1");
  if (!(t >= 0.0)) throw ParameterError("realization: t must be >= 0");
  if (!(gamma > 0.0)) throw ParameterError("realization: gamma must be positive");
  const double step = r * (options.n_constant + 2.0) * t;
  LaplaceCoefficients err = f;
  LaplaceCoefficients smooth = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int k = f.degree_of(i);
    const double a = k == 0 ? 0.0 : std::pow(p(k), gamma);
    const double c = -std::expm1(-a * step);
    const double cr = std::pow(c, r);
    // 1 - c^r with c = 1 - e^{-a m t}, accurate at both ends.
    const double one_minus_cr = c == 0.0 ? 1.0 : -std::expm1(r * std::log(c));
    err.values[i] = cr * f.values[i];
    smooth.values[i] = std::pow(a, r) * one_minus_cr * f.values[i];
  }
  return function_norm(err, options.norm) + std::pow(t, r) * function_norm(smooth, options.norm);
}

SlopeFit loglog_slope(std::span<const double> ts, std::span<const double> values, double window_max) {
  if (ts.size() != values.size()) throw DataError("loglog_slope: length mismatch");
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] > 0.0 && ts[i] <= window_max && values[i] > 0.0) {
      pts.emplace_back(std::log(ts[i]), std::log(values[i]));
    }
  }
  SlopeFit fit;
  fit.points = static_cast<int>(pts.size());
  if (pts.size() < 2) {
    fit.slope = std::numeric_limits<double>::quiet_NaN();
    fit.intercept = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double den = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const auto& [x, y] : pts) {
    const double e = y - (fit.intercept + fit.slope * x);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

EquivalenceRatio equivalence_ratio(std::span<const double> lhs, std::span<const double> rhs) {
  if (lhs.size() != rhs.size()) throw DataError("equivalence_ratio: length mismatch");
  EquivalenceRatio out;
  out.max_ratio = -std::numeric_limits<double>::infinity();
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] < 0.0 || rhs[i] < 0.0 || std::isnan(lhs[i]) || std::isnan(rhs[i])) {
      throw DataError("equivalence_ratio: entries must be nonnegative (position " + std::to_string(i) + ")");
    }
    if (lhs[i] == 0.0 && rhs[i] == 0.0) {
      out.skipped.push_back(static_cast<int>(i));
      continue;
    }
    if (lhs[i] == 0.0 || rhs[i] == 0.0) {
      throw DataError("equivalence_ratio: zero paired with nonzero at position " + std::to_string(i));
    }
    const double q = lhs[i] / rhs[i];
    out.max_ratio = std::max(out.max_ratio, q);
    out.min_ratio = std::min(out.min_ratio, q);
  }
  if (out.skipped.size() == lhs.size()) out.max_ratio = out.min_ratio = std::numeric_limits<double>::quiet_NaN();
  return out;
}

EquivalenceRatio equivalence_ratio(std::span<const double> lhs, std::span<const double> rhs,
                                   std::span<const double> ts) {
  if (ts.size() != lhs.size()) throw DataError("equivalence_ratio: t-grid length mismatch");
  EquivalenceRatio out = equivalence_ratio(lhs, rhs);
  double tmin = std::numeric_limits<double>::infinity();
  for (double t : ts) {
    if (t > 0.0) tmin = std::min(tmin, t);
  }
  const double window = 10.0 * tmin * (1.0 + 1e-12);
  out.lhs_fit = loglog_slope(ts, lhs, window);
  out.rhs_fit = loglog_slope(ts, rhs, window);
  return out;
}

}  // namespace sphsemi
