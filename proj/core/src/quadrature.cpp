#include "sphsemi/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sphsemi/error.hpp"

namespace sphsemi {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("quadrature: lambda must be positive, got " + std::to_string(lambda));
  }
}

// Squared off-diagonal of the monic Gegenbauer recurrence, k >= 1.
double recurrence_beta(int k, double lambda) {
  return k * (k + 2.0 * lambda - 1.0) / (4.0 * (k + lambda) * (k + lambda - 1.0));
}

}  // namespace

double ThetaQuadrature::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * f(x[i]);
  return s;
}

double ThetaQuadrature::integrate_samples(std::span<const double> samples) const {
  if (samples.size() != weights.size()) {
    throw DataError("quadrature: sample count does not match node count");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) s += weights[i] * samples[i];
  return s;
}

SphereMeasure SphereMeasure::for_dimension(int d) {
  return SphereMeasure{d, surface_measure(d), 0.5 * (d - 2)};
}

double surface_measure(int d) {
  if (d < 3) {
    throw ParameterError("surface_measure: ambient dimension must be >= 3, got " + std::to_string(d));
  }
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double sphere_measure(double lambda) {
  check_lambda(lambda);
  return 2.0 * std::exp((lambda + 1.0) * std::log(std::numbers::pi) - std::lgamma(lambda + 1.0));
}

double equator_measure(double lambda) {
  check_lambda(lambda);
  return 2.0 * std::exp((lambda + 0.5) * std::log(std::numbers::pi) - std::lgamma(lambda + 0.5));
}

double weight_mass(double lambda) {
  check_lambda(lambda);
  return std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(lambda + 0.5) -
                  std::lgamma(lambda + 1.0));
}

ThetaQuadrature build_theta_quadrature(double lambda, int n_nodes) {
  check_lambda(lambda);
  if (n_nodes < 1) {
    throw ParameterError("build_theta_quadrature: need at least one node, got " +
                         std::to_string(n_nodes));
  }
  const int n = n_nodes;
  const double mu0 = weight_mass(lambda);

  std::vector<double> sqrt_beta(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) sqrt_beta[k] = std::sqrt(recurrence_beta(k, lambda));

  std::vector<double> nodes(n, 0.0);
  if (n > 1) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = sqrt_beta[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("build_theta_quadrature: tridiagonal eigen-solver did not converge (lambda=" +
                           std::to_string(lambda) + ", n=" + std::to_string(n) + ")");
    }
    for (int i = 0; i < n; ++i) nodes[i] = solver.eigenvalues()[i];
  }

  // Orthonormal polynomials p_0..p_n at x, with derivative of p_n.
  auto orthonormal = [&](double x, std::vector<double>& p, double& dpn) {
    p.assign(static_cast<std::size_t>(n) + 1, 0.0);
    p[0] = 1.0 / std::sqrt(mu0);
    double dprev = 0.0;
    double dcurr = 0.0;
    if (n >= 1) {
      p[1] = x * p[0] / sqrt_beta[1];
      dcurr = p[0] / sqrt_beta[1];
    }
    for (int k = 1; k < n; ++k) {
      p[k + 1] = (x * p[k] - sqrt_beta[k] * p[k - 1]) / sqrt_beta[k + 1];
      const double dnext = (p[k] + x * dcurr - sqrt_beta[k] * dprev) / sqrt_beta[k + 1];
      dprev = dcurr;
      dcurr = dnext;
    }
    dpn = dcurr;
  };

  std::vector<double> weights(n);
  std::vector<double> p;
  for (int i = 0; i < n; ++i) {
    double dpn = 0.0;
    orthonormal(nodes[i], p, dpn);
    if (dpn != 0.0) nodes[i] -= p[n] / dpn;
    orthonormal(nodes[i], p, dpn);
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += p[k] * p[k];
    weights[i] = 1.0 / s;
  }
  // The weight is even: enforce exact node symmetry.
  for (int i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[n - 1 - i]);
    nodes[i] = -a;
    nodes[n - 1 - i] = a;
    weights[i] = weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;

  ThetaQuadrature q;
  q.lambda = lambda;
  q.exactness = 2 * n - 1;
  q.theta.resize(n);
  q.x.resize(n);
  q.weights.resize(n);
  // Ascending x maps to descending theta.
  for (int i = 0; i < n; ++i) {
    const int src = n - 1 - i;
    q.x[i] = nodes[src];
    q.theta[i] = std::acos(std::clamp(nodes[src], -1.0, 1.0));
    q.weights[i] = weights[src];
  }
  return q;
}

ThetaQuadrature build_graded_theta_quadrature(double lambda, double first_panel,
                                              int points_per_panel, double max_panel) {
  check_lambda(lambda);
  if (!(first_panel > 0.0) || !(max_panel > 0.0) || points_per_panel < 1) {
    throw ParameterError("build_graded_theta_quadrature: invalid panel layout");
  }
  const auto legendre = build_theta_quadrature(0.5, points_per_panel);
  constexpr double pi = std::numbers::pi;

  std::vector<double> breaks{0.0};
  double width = std::min(first_panel, max_panel);
  while (breaks.back() + width < pi && width < max_panel) {
    breaks.push_back(breaks.back() + width);
    width *= 2.0;
  }
  const double rest = pi - breaks.back();
  const int uniform = std::max(1, static_cast<int>(std::ceil(rest / max_panel)));
  const double start = breaks.back();
  for (int j = 1; j <= uniform; ++j) breaks.push_back(start + rest * j / uniform);
  breaks.back() = pi;

  ThetaQuadrature q;
  q.lambda = lambda;
  q.exactness = -1;
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    const double a = breaks[j];
    const double b = breaks[j + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    // legendre.x is ascending in x, so iterate to keep theta increasing.
    for (std::size_t i = 0; i < legendre.size(); ++i) {
      const double th = mid + half * legendre.x[i];
      q.theta.push_back(th);
      q.x.push_back(std::cos(th));
      q.weights.push_back(half * legendre.weights[i] * std::pow(std::sin(th), 2.0 * lambda));
    }
  }
  return q;
}

SupResult sup_on_interval(const std::function<double(double)>& f, double lo, double hi, int points) {
  if (points < 2 || !(hi >= lo)) throw ParameterError("sup_on_interval: invalid grid");
  SupResult best{std::abs(f(lo)), lo};
  int best_i = 0;
  for (int i = 1; i < points; ++i) {
    const double th = lo + (hi - lo) * i / (points - 1);
    const double v = std::abs(f(th));
    if (v > best.value) {
      best = {v, th};
      best_i = i;
    }
  }
  // Golden-section search on the bracket around the grid maximizer.
  double a = lo + (hi - lo) * std::max(best_i - 1, 0) / (points - 1);
  double b = lo + (hi - lo) * std::min(best_i + 1, points - 1) / (points - 1);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = std::abs(f(c));
  double fd = std::abs(f(d));
  for (int it = 0; it < 60 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = std::abs(f(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = std::abs(f(d));
    }
  }
  if (fc > best.value) best = {fc, c};
  if (fd > best.value) best = {fd, d};
  return best;
}

double zonal_lp_norm(const std::function<double(double)>& phi, double p, const ThetaQuadrature& q) {
  if (!(p >= 1.0)) throw ParameterError("zonal_lp_norm: exponent must be >= 1");
  if (std::isinf(p)) {
    return sup_on_interval([&](double th) { return phi(std::cos(th)); }, 0.0, std::numbers::pi,
                           kSupGridPoints)
        .value;
  }
  std::vector<double> samples(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) samples[i] = phi(q.x[i]);
  return zonal_lp_norm_samples(samples, p, q);
}

double zonal_lp_norm_samples(std::span<const double> samples, double p, const ThetaQuadrature& q) {
  if (!(p >= 1.0)) throw ParameterError("zonal_lp_norm: exponent must be >= 1");
  if (samples.size() != q.size()) throw DataError("zonal_lp_norm: sample count mismatch");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : samples) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) s += q.weights[i] * std::pow(std::abs(samples[i]), p);
  return std::pow(equator_measure(q.lambda) * s, 1.0 / p);
}

}  // namespace sphsemi
