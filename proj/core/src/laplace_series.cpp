#include "sphsemi/laplace_series.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "sphsemi/error.hpp"
#include "sphsemi/gegenbauer.hpp"
#include "sphsemi/number_format.hpp"

namespace sphsemi {

namespace {

constexpr double kPi = std::numbers::pi;

int tri_index(int k, int m) { return k * (k + 1) / 2 + m; }

// Orthonormal associated Legendre functions P~_{k,m}(cos theta), 0 <= m <= k <= n,
// scaled so that 2 pi * int P~_{k,m}^2 dx = 1 (m = 0) and the real harmonics
// sqrt(2) P~_{k,m} cos/sin(m phi) are orthonormal on S^2.
std::vector<double> normalized_legendre(int n, double x, double s) {
  std::vector<double> p(static_cast<std::size_t>(tri_index(n, n)) + 1, 0.0);
  p[0] = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 1; m <= n; ++m) {
    p[tri_index(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p[tri_index(m - 1, m - 1)];
  }
  for (int m = 0; m < n; ++m) {
    p[tri_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * p[tri_index(m, m)];
    for (int k = m + 2; k <= n; ++k) {
      const double kk = static_cast<double>(k) * k;
      const double mm = static_cast<double>(m) * m;
      const double a = std::sqrt((4.0 * kk - 1.0) / (kk - mm));
      const double b = std::sqrt(((k - 1.0) * (k - 1.0) - mm) / (4.0 * (k - 1.0) * (k - 1.0) - 1.0));
      p[tri_index(k, m)] = a * (x * p[tri_index(k - 1, m)] - b * p[tri_index(k - 2, m)]);
    }
  }
  return p;
}

void check_degree(int n) {
  if (n < 0) throw ParameterError("laplace_series: band limit must be nonnegative");
}

}  // namespace

LaplaceCoefficients LaplaceCoefficients::zonal(double lambda, int max_degree) {
  check_degree(max_degree);
  if (!(lambda > 0.0)) throw ParameterError("laplace_series: lambda must be positive");
  return {SeriesKind::zonal, lambda, max_degree,
          std::vector<double>(static_cast<std::size_t>(max_degree) + 1, 0.0)};
}

LaplaceCoefficients LaplaceCoefficients::sphere(int max_degree) {
  check_degree(max_degree);
  const auto n = static_cast<std::size_t>(max_degree + 1);
  return {SeriesKind::sphere, 0.5, max_degree, std::vector<double>(n * n, 0.0)};
}

int LaplaceCoefficients::degree_of(std::size_t i) const {
  if (kind == SeriesKind::zonal) return static_cast<int>(i);
  auto k = static_cast<int>(std::sqrt(static_cast<double>(i)));
  while (static_cast<std::size_t>(k) * k > i) --k;
  while (static_cast<std::size_t>(k + 1) * (k + 1) <= i) ++k;
  return k;
}

SphereGridS2 build_sphere_grid(int band_limit) {
  check_degree(band_limit);
  const auto gl = build_theta_quadrature(0.5, band_limit + 1);
  const int n_lon = 2 * band_limit + 1;
  SphereGridS2 g;
  g.band_limit = band_limit;
  g.theta = gl.theta;
  g.x = gl.x;
  g.lat_weights.resize(gl.size());
  for (std::size_t i = 0; i < gl.size(); ++i) g.lat_weights[i] = gl.weights[i] * 2.0 * kPi / n_lon;
  g.phi.resize(n_lon);
  for (int j = 0; j < n_lon; ++j) g.phi[j] = 2.0 * kPi * j / n_lon;
  return g;
}

std::vector<double> zonal_basis(int max_degree, double lambda, double x) {
  auto p = eval_gegenbauer_all(max_degree, lambda, x);
  const double eq = equator_measure(lambda);
  for (int k = 0; k <= max_degree; ++k) p[k] *= std::sqrt(norm_constant(k, lambda) / eq);
  return p;
}

LaplaceCoefficients analyze_zonal(const std::function<double(double)>& phi, double lambda,
                                  int max_degree, const ThetaQuadrature& q) {
  if (q.lambda != lambda) throw ParameterError("analyze_zonal: quadrature built for another lambda");
  auto c = LaplaceCoefficients::zonal(lambda, max_degree);
  const double eq = equator_measure(lambda);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double v = phi(q.x[i]);
    const auto e = zonal_basis(max_degree, lambda, q.x[i]);
    for (int k = 0; k <= max_degree; ++k) c.values[k] += eq * q.weights[i] * v * e[k];
  }
  return c;
}

double synth_zonal(const LaplaceCoefficients& c, double theta) {
  if (c.kind != SeriesKind::zonal) throw ParameterError("synth_zonal: coefficients are not zonal");
  const auto e = zonal_basis(c.max_degree, c.lambda, std::cos(theta));
  double s = 0.0;
  for (int k = c.max_degree; k >= 0; --k) s += c.values[k] * e[k];
  return s;
}

std::vector<double> synth_zonal(const LaplaceCoefficients& c, std::span<const double> thetas) {
  std::vector<double> out(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) out[i] = synth_zonal(c, thetas[i]);
  return out;
}

LaplaceCoefficients analyze_s2(const SphereFunction& f, int max_degree, const SphereGridS2& grid) {
  std::vector<double> samples(grid.size());
  for (std::size_t i = 0; i < grid.n_lat(); ++i) {
    const double s = std::sin(grid.theta[i]);
    for (std::size_t j = 0; j < grid.n_lon(); ++j) {
      samples[i * grid.n_lon() + j] =
          f(s * std::cos(grid.phi[j]), s * std::sin(grid.phi[j]), grid.x[i]);
    }
  }
  return analyze_s2_samples(samples, max_degree, grid);
}

LaplaceCoefficients analyze_s2_samples(std::span<const double> samples, int max_degree,
                                       const SphereGridS2& grid) {
  if (samples.size() != grid.size()) throw DataError("analyze_s2: sample count does not match grid");
  if (max_degree > grid.band_limit) {
    throw ParameterError("analyze_s2: band limit " + std::to_string(max_degree) +
                         " exceeds grid resolution " + std::to_string(grid.band_limit));
  }
  auto c = LaplaceCoefficients::sphere(max_degree);
  const std::size_t n_lon = grid.n_lon();
  std::vector<double> cs(static_cast<std::size_t>(max_degree) + 1);
  std::vector<double> sn(static_cast<std::size_t>(max_degree) + 1);
  for (std::size_t i = 0; i < grid.n_lat(); ++i) {
    for (int m = 0; m <= max_degree; ++m) {
      double a = 0.0;
      double b = 0.0;
      for (std::size_t j = 0; j < n_lon; ++j) {
        const double v = samples[i * n_lon + j];
        a += v * std::cos(m * grid.phi[j]);
        b += v * std::sin(m * grid.phi[j]);
      }
      cs[m] = a;
      sn[m] = b;
    }
    const auto p = normalized_legendre(max_degree, grid.x[i], std::sin(grid.theta[i]));
    const double w = grid.lat_weights[i];
    for (int k = 0; k <= max_degree; ++k) {
      c.values[LaplaceCoefficients::index(k, 0)] += w * p[tri_index(k, 0)] * cs[0];
      for (int m = 1; m <= k; ++m) {
        const double pw = w * std::numbers::sqrt2 * p[tri_index(k, m)];
        c.values[LaplaceCoefficients::index(k, m)] += pw * cs[m];
        c.values[LaplaceCoefficients::index(k, -m)] += pw * sn[m];
      }
    }
  }
  return c;
}

std::vector<double> synth_s2(const LaplaceCoefficients& c, const SphereGridS2& grid) {
  if (c.kind != SeriesKind::sphere) throw ParameterError("synth_s2: coefficients are not on S^2");
  const int n = c.max_degree;
  const std::size_t n_lon = grid.n_lon();
  std::vector<double> out(grid.size(), 0.0);
  std::vector<double> a(static_cast<std::size_t>(n) + 1);
  std::vector<double> b(static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i < grid.n_lat(); ++i) {
    const auto p = normalized_legendre(n, grid.x[i], std::sin(grid.theta[i]));
    for (int m = 0; m <= n; ++m) {
      double sa = 0.0;
      double sb = 0.0;
      for (int k = m; k <= n; ++k) {
        sa += p[tri_index(k, m)] * c.values[LaplaceCoefficients::index(k, m)];
        if (m > 0) sb += p[tri_index(k, m)] * c.values[LaplaceCoefficients::index(k, -m)];
      }
      a[m] = m == 0 ? sa : std::numbers::sqrt2 * sa;
      b[m] = std::numbers::sqrt2 * sb;
    }
    for (std::size_t j = 0; j < n_lon; ++j) {
      double v = a[0];
      for (int m = 1; m <= n; ++m) v += a[m] * std::cos(m * grid.phi[j]) + b[m] * std::sin(m * grid.phi[j]);
      out[i * n_lon + j] = v;
    }
  }
  return out;
}

double eval_s2(const LaplaceCoefficients& c, double theta, double phi) {
  if (c.kind != SeriesKind::sphere) throw ParameterError("eval_s2: coefficients are not on S^2");
  const int n = c.max_degree;
  const auto p = normalized_legendre(n, std::cos(theta), std::sin(theta));
  double v = 0.0;
  for (int k = 0; k <= n; ++k) {
    v += p[tri_index(k, 0)] * c.values[LaplaceCoefficients::index(k, 0)];
    for (int m = 1; m <= k; ++m) {
      v += std::numbers::sqrt2 * p[tri_index(k, m)] *
           (c.values[LaplaceCoefficients::index(k, m)] * std::cos(m * phi) +
            c.values[LaplaceCoefficients::index(k, -m)] * std::sin(m * phi));
    }
  }
  return v;
}

double real_spherical_harmonic(int k, int m, double theta, double phi) {
  if (k < 0 || std::abs(m) > k) throw ParameterError("real_spherical_harmonic: need |m| <= k");
  const auto p = normalized_legendre(k, std::cos(theta), std::sin(theta));
  const double base = p[tri_index(k, std::abs(m))];
  if (m == 0) return base;
  if (m > 0) return std::numbers::sqrt2 * base * std::cos(m * phi);
  return std::numbers::sqrt2 * base * std::sin(-m * phi);
}

LaplaceCoefficients project_degree(const LaplaceCoefficients& c, int k) {
  LaplaceCoefficients out = c;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.degree_of(i) != k) out.values[i] = 0.0;
  }
  return out;
}

double parseval_l2_norm(const LaplaceCoefficients& c) {
  // Scaled sum of squares: no overflow or underflow for extreme coefficients.
  double scale = 0.0;
  for (double v : c.values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : c.values) s += (v / scale) * (v / scale);
  return scale * std::sqrt(s);
}

void write_coefficients_csv(std::ostream& out, const LaplaceCoefficients& c) {
  const bool zonal = c.kind == SeriesKind::zonal;
  out << "kind,lambda,N\n"
      << (zonal ? "zonal" : "sphere") << ',' << format_double(c.lambda) << ',' << c.max_degree << '\n';
  if (zonal) {
    out << "k,value\n";
    for (int k = 0; k <= c.max_degree; ++k) out << k << ',' << format_double(c.values[k]) << '\n';
    return;
  }
  out << "k,m,value\n";
  for (int k = 0; k <= c.max_degree; ++k) {
    for (int m = -k; m <= k; ++m) {
      out << k << ',' << m << ',' << format_double(c.values[LaplaceCoefficients::index(k, m)]) << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

int parse_int(const std::string& s) {
  const double v = parse_double(s);
  if (v != std::floor(v)) throw DataError("coefficient csv: expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

LaplaceCoefficients read_coefficients_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("kind,lambda,N", 0) != 0) {
    throw DataError("coefficient csv: missing 'kind,lambda,N' header");
  }
  if (!std::getline(in, line)) throw DataError("coefficient csv: missing header values");
  const auto head = split_fields(line);
  if (head.size() != 3) throw DataError("coefficient csv: malformed header values");
  const double lambda = parse_double(head[1]);
  const int n = parse_int(head[2]);
  LaplaceCoefficients c;
  if (head[0] == "zonal") {
    c = LaplaceCoefficients::zonal(lambda, n);
  } else if (head[0] == "sphere") {
    c = LaplaceCoefficients::sphere(n);
  } else {
    throw DataError("coefficient csv: unknown kind '" + head[0] + "'");
  }
  std::getline(in, line);  // column names
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_fields(line);
    if (c.kind == SeriesKind::zonal) {
      if (f.size() != 2) throw DataError("coefficient csv: expected k,value");
      const int k = parse_int(f[0]);
      if (k < 0 || k > n) throw DataError("coefficient csv: degree out of range");
      c.values[k] = parse_double(f[1]);
    } else {
      if (f.size() != 3) throw DataError("coefficient csv: expected k,m,value");
      const int k = parse_int(f[0]);
      const int m = parse_int(f[1]);
      if (k < 0 || k > n || std::abs(m) > k) throw DataError("coefficient csv: index out of range");
      c.values[LaplaceCoefficients::index(k, m)] = parse_double(f[2]);
    }
  }
  return c;
}

}  // namespace sphsemi
