#include "sphsemi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>

#include "sphsemi/error.hpp"
#include "sphsemi/gegenbauer.hpp"
#include "sphsemi/number_format.hpp"

namespace sphsemi {

namespace {

constexpr int kBlock = 256;

double lambda_of(int dimension) {
  if (dimension < 3) {
    throw ParameterError("kernels: ambient dimension must be >= 3, got " + std::to_string(dimension));
  }
  return 0.5 * (dimension - 2);
}

// (k + lambda)/lambda P_k(1) / |S^{d-1}| for k = 0..n.
std::vector<double> series_factors(int n, double lambda, double area) {
  std::vector<double> f(static_cast<std::size_t>(n) + 1);
  double at_one = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) at_one *= (k + 2.0 * lambda - 1.0) / k;
    f[k] = (k + lambda) / lambda * at_one / area;
  }
  return f;
}

// sum_k w_k P_k(x)/P_k(1) at every x, in blocks so the inner degree loop
// runs over contiguous arrays.
std::vector<double> evaluate_series(std::span<const double> w, double lambda, std::span<const double> xs) {
  const int n = static_cast<int>(w.size()) - 1;
  std::vector<double> out(xs.size(), 0.0);
  if (n < 0) return out;
  std::vector<double> alpha(static_cast<std::size_t>(std::max(n, 1)) + 1, 0.0);
  std::vector<double> beta(alpha.size(), 0.0);
  for (int k = 2; k <= n; ++k) {
    const double denom = k + 2.0 * lambda - 1.0;
    alpha[k] = 2.0 * (k + lambda - 1.0) / denom;
    beta[k] = (k - 1.0) / denom;
  }
  double x[kBlock];
  double r0[kBlock];
  double r1[kBlock];
  double acc[kBlock];
  for (std::size_t start = 0; start < xs.size(); start += kBlock) {
    const int nb = static_cast<int>(std::min<std::size_t>(kBlock, xs.size() - start));
    for (int i = 0; i < nb; ++i) {
      x[i] = xs[start + i];
      r0[i] = 1.0;
      r1[i] = x[i];
      acc[i] = w[0] + (n >= 1 ? w[1] * x[i] : 0.0);
    }
    for (int k = 2; k <= n; ++k) {
      const double a = alpha[k];
      const double b = beta[k];
      const double wk = w[k];
      for (int i = 0; i < nb; ++i) {
        const double r2 = a * x[i] * r1[i] - b * r0[i];
        r0[i] = r1[i];
        r1[i] = r2;
        acc[i] += wk * r2;
      }
    }
    for (int i = 0; i < nb; ++i) out[start + i] = acc[i];
  }
  return out;
}

}  // namespace

TruncationChoice choose_truncation(const MultiplierSequence& m, int dimension, double tolerance,
                                   int min_degree, int degree_cap) {
  const double lambda = lambda_of(dimension);
  const double area = surface_measure(dimension);
  if (!(tolerance > 0.0)) throw ParameterError("kernels: tail tolerance must be positive");
  min_degree = std::max(min_degree, 0);
  int horizon = 64;
  while (horizon < 2 * min_degree) horizon *= 2;

  for (;;) {
    if (horizon > degree_cap) {
      throw TruncationError("kernel synthesis: tail of '" + m.tag() + "' not below " +
                            format_double(tolerance) + " relative within degree cap " +
                            std::to_string(degree_cap) + "; the multiplier decays too slowly");
    }
    const auto values = m.values(horizon);
    const auto factors = series_factors(horizon, lambda, area);
    std::vector<double> terms(static_cast<std::size_t>(horizon) + 1);
    double total = 0.0;
    double block = 0.0;
    for (int k = 0; k <= horizon; ++k) {
      terms[k] = std::abs(values[k]) * factors[k];
      total += terms[k];
      if (k > horizon / 2) block += terms[k];
    }
    if (!std::isfinite(total)) {
      throw TruncationError("kernel synthesis: series of '" + m.tag() + "' is not finite");
    }
    if (total == 0.0) return {min_degree, 0.0, 0.0};
    if (block <= 1e-2 * tolerance * total) {
      // The last block bounds what lies beyond the horizon for sequences
      // that decay at least geometrically from here on.
      double tail = block;
      int n = horizon;
      while (n > min_degree && tail + terms[n] <= tolerance * total) {
        tail += terms[n];
        --n;
      }
      return {n, tail, total};
    }
    horizon *= 2;
  }
}

ZonalKernel synthesize_kernel(const MultiplierSequence& m, const KernelOptions& options,
                              std::span<const double> thetas) {
  const double lambda = lambda_of(options.dimension);
  const auto choice =
      choose_truncation(m, options.dimension, options.tail_tolerance, options.degree, options.degree_cap);
  ZonalKernel kern;
  kern.lambda = lambda;
  kern.dimension = options.dimension;
  kern.truncation = choice.degree;
  kern.tail_bound = choice.tail_bound;
  kern.scale = choice.scale;
  kern.tag = m.tag();
  const auto values = m.values(choice.degree);
  kern.weights = series_factors(choice.degree, lambda, surface_measure(options.dimension));
  for (int k = 0; k <= choice.degree; ++k) kern.weights[k] *= values[k];
  kern.theta.assign(thetas.begin(), thetas.end());
  kern.values = kernel_values(kern, thetas);
  return kern;
}

std::vector<double> kernel_values(const ZonalKernel& kern, std::span<const double> thetas) {
  std::vector<double> xs(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) xs[i] = std::cos(thetas[i]);
  return evaluate_series(kern.weights, kern.lambda, xs);
}

double closed_form_poisson(double u, double cos_theta, int dimension) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw ParameterError("closed_form_poisson: u must lie in [0, 1), got " + std::to_string(u));
  }
  const double lambda = lambda_of(dimension);
  const double denom = 1.0 - 2.0 * u * cos_theta + u * u;
  return (1.0 - u * u) / std::pow(denom, lambda + 1.0) / surface_measure(dimension);
}

std::vector<double> uniform_theta_grid(int n) {
  if (n < 2) throw ParameterError("uniform_theta_grid: need at least two points");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = std::numbers::pi * i / (n - 1);
  return g;
}

PositivityReport positivity_report(const ZonalKernel& kern, double tolerance) {
  if (kern.values.empty()) throw DataError("positivity_report: kernel has no samples");
  PositivityReport r;
  r.tolerance = tolerance;
  r.tail_bound = kern.tail_bound;
  const auto lo = std::min_element(kern.values.begin(), kern.values.end());
  r.min_value = *lo;
  r.argmin = kern.theta[lo - kern.values.begin()];
  r.max_value = *std::max_element(kern.values.begin(), kern.values.end());
  r.margin = r.min_value - r.tail_bound;
  r.positive = r.margin >= -tolerance * std::abs(r.max_value);
  return r;
}

PositivityReport positivity_report(const ZonalKernel& kern, std::span<const double> dense_grid,
                                   double tolerance) {
  ZonalKernel dense = kern;
  dense.theta.assign(dense_grid.begin(), dense_grid.end());
  dense.values = kernel_values(kern, dense_grid);
  return positivity_report(dense, tolerance);
}

double l1_normalization(const ZonalKernel& kern, const ThetaQuadrature& q) {
  if (q.lambda != kern.lambda) throw ParameterError("l1_normalization: quadrature built for another lambda");
  const auto v = kernel_values(kern, q.theta);
  return equator_measure(kern.lambda) * q.integrate_samples(v);
}

ThetaQuadrature kernel_quadrature(const ZonalKernel& kern) {
  const double first = std::min(0.125, 2.0 / std::max(kern.truncation, 1));
  return build_graded_theta_quadrature(kern.lambda, first);
}

double kernel_l1_norm(const ZonalKernel& kern) {
  const auto q = kernel_quadrature(kern);
  auto v = kernel_values(kern, q.theta);
  for (auto& x : v) x = std::abs(x);
  return equator_measure(kern.lambda) * q.integrate_samples(v);
}

double funk_hecke_factor(int k, double lambda) {
  GegenbauerIndex{k, lambda}.validate();
  const double log_c = std::log(equator_measure(lambda)) + std::log(k + lambda) - std::log(lambda) -
                       std::log(sphere_measure(lambda)) - std::log(norm_constant(k, lambda)) -
                       log_gegenbauer_at_one(k, lambda);
  return std::exp(log_c);
}

SphereConvolution::SphereConvolution(const ZonalKernel& kern, SphereGridS2 grid, int input_degree)
    : grid_(std::move(grid)), input_degree_(input_degree) {
  if (kern.dimension != 3) throw ParameterError("SphereConvolution: only S^2 (d = 3) is supported");
  if (input_degree < 0 || input_degree > grid_.band_limit ||
      input_degree + kern.truncation > 2 * grid_.band_limit) {
    throw ParameterError("SphereConvolution: grid band limit " + std::to_string(grid_.band_limit) +
                         " cannot resolve input degree " + std::to_string(input_degree) +
                         " against kernel degree " + std::to_string(kern.truncation) +
                         " (need input + kernel <= 2 * band limit)");
  }
  const std::size_t nl = grid_.n_lat();
  const std::size_t nm = grid_.n_lon();
  std::vector<double> xs(nl * nl * nm);
  for (std::size_t i = 0; i < nl; ++i) {
    const double si = std::sin(grid_.theta[i]);
    for (std::size_t j = 0; j < nl; ++j) {
      const double sj = std::sin(grid_.theta[j]);
      for (std::size_t d = 0; d < nm; ++d) {
        const double c = grid_.x[i] * grid_.x[j] + si * sj * std::cos(grid_.phi[d]);
        xs[(i * nl + j) * nm + d] = std::clamp(c, -1.0, 1.0);
      }
    }
  }
  table_ = evaluate_series(kern.weights, kern.lambda, xs);
}

LaplaceCoefficients SphereConvolution::operator()(const LaplaceCoefficients& f) const {
  if (f.kind != SeriesKind::sphere) throw ParameterError("SphereConvolution: input must be an S^2 series");
  if (f.max_degree > input_degree_) {
    throw ParameterError("SphereConvolution: input degree exceeds the resolved degree");
  }
  const auto samples = synth_s2(f, grid_);
  const std::size_t nl = grid_.n_lat();
  const std::size_t nm = grid_.n_lon();
  std::vector<double> out(grid_.size(), 0.0);
  for (std::size_t i = 0; i < nl; ++i) {
    for (std::size_t a = 0; a < nm; ++a) {
      double s = 0.0;
      for (std::size_t j = 0; j < nl; ++j) {
        const double* row = &table_[(i * nl + j) * nm];
        const double* fj = &samples[j * nm];
        double sj = 0.0;
        for (std::size_t b = 0; b < nm; ++b) {
          const std::size_t d = a >= b ? a - b : a + nm - b;
          sj += fj[b] * row[d];
        }
        s += grid_.lat_weights[j] * sj;
      }
      out[i * nm + a] = s;
    }
  }
  return analyze_s2_samples(out, input_degree_, grid_);
}

LaplaceCoefficients convolve_s2(const LaplaceCoefficients& f, const ZonalKernel& kern,
                                const SphereGridS2& grid) {
  return SphereConvolution(kern, grid, f.max_degree)(f);
}

YoungReport young_check(const LaplaceCoefficients& f, const ZonalKernel& kern, const SphereGridS2& grid) {
  YoungReport r;
  r.convolution_norm = parseval_l2_norm(convolve_s2(f, kern, grid));
  r.kernel_l1 = kernel_l1_norm(kern);
  r.input_norm = parseval_l2_norm(f);
  r.bound = r.kernel_l1 * r.input_norm;
  r.holds = r.convolution_norm <= r.bound * (1.0 + 1e-12) + 1e-15;
  return r;
}

void write_kernel_csv(std::ostream& out, const ZonalKernel& kern) {
  out << "# multiplier=" << kern.tag << " N=" << kern.truncation
      << " tail_bound=" << format_double(kern.tail_bound) << '\n';
  out << "theta,value\n";
  for (std::size_t i = 0; i < kern.theta.size(); ++i) {
    out << format_double(kern.theta[i]) << ',' << format_double(kern.values[i]) << '\n';
  }
}

}  // namespace sphsemi
