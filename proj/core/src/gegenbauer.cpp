#include "sphsemi/gegenbauer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sphsemi/error.hpp"

namespace sphsemi {

namespace {

void check_nu(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw ParameterError("gegenbauer: parameter nu must be positive, got " + std::to_string(nu));
  }
}

void check_degree(int k) {
  if (k < 0) {
    throw ParameterError("gegenbauer: degree must be nonnegative, got " + std::to_string(k));
  }
}

double checked_argument(double x) {
  if (!(std::abs(x) <= 1.0 + 1e-12)) {
    throw ParameterError("gegenbauer: argument must lie in [-1, 1], got " + std::to_string(x));
  }
  return std::clamp(x, -1.0, 1.0);
}

}  // namespace

void GegenbauerIndex::validate() const {
  check_degree(degree);
  check_nu(nu);
}

double eval_gegenbauer(int k, double nu, double x) {
  GegenbauerIndex{k, nu}.validate();
  x = checked_argument(x);
  if (k == 0) return 1.0;
  double prev = 1.0;
  double curr = 2.0 * nu * x;
  for (int j = 2; j <= k; ++j) {
    const double next = (2.0 * (j + nu - 1.0) * x * curr - (j + 2.0 * nu - 2.0) * prev) / j;
    prev = curr;
    curr = next;
  }
  return curr;
}

std::vector<double> eval_gegenbauer_all(int max_degree, double nu, double x) {
  GegenbauerIndex{max_degree, nu}.validate();
  x = checked_argument(x);
  std::vector<double> out(static_cast<std::size_t>(max_degree) + 1);
  out[0] = 1.0;
  if (max_degree >= 1) out[1] = 2.0 * nu * x;
  for (int j = 2; j <= max_degree; ++j) {
    out[j] = (2.0 * (j + nu - 1.0) * x * out[j - 1] - (j + 2.0 * nu - 2.0) * out[j - 2]) / j;
  }
  return out;
}

double log_gegenbauer_at_one(int k, double nu) {
  GegenbauerIndex{k, nu}.validate();
  return std::lgamma(k + 2.0 * nu) - std::lgamma(2.0 * nu) - std::lgamma(k + 1.0);
}

double gegenbauer_at_one(int k, double nu) {
  GegenbauerIndex{k, nu}.validate();
  // Legendre: exactly one for every degree.
  if (nu == 0.5) return 1.0;
  if (k == 0) return 1.0;
  return std::exp(log_gegenbauer_at_one(k, nu));
}

double norm_constant(int k, double nu) {
  GegenbauerIndex{k, nu}.validate();
  const double log_c = (2.0 * nu - 1.0) * std::numbers::ln2 + 2.0 * std::lgamma(nu) +
                       std::log(k + nu) + std::lgamma(k + 1.0) - std::log(std::numbers::pi) -
                       std::lgamma(k + 2.0 * nu);
  return std::exp(log_c);
}

std::vector<double> gegenbauer_ratio_deficits(int max_degree, double nu, double theta) {
  GegenbauerIndex{max_degree, nu}.validate();
  if (!std::isfinite(theta)) throw ParameterError("gegenbauer: theta must be finite");
  const double half_sin = std::sin(0.5 * theta);
  const double one_minus_x = 2.0 * half_sin * half_sin;
  const double x = 1.0 - one_minus_x;

  // With R_k = alpha_k x R_{k-1} - beta_k R_{k-2}, alpha_k - beta_k = 1:
  //   D_k = alpha_k (1 - x) + alpha_k x D_{k-1} - beta_k D_{k-2}.
  std::vector<double> d(static_cast<std::size_t>(max_degree) + 1);
  d[0] = 0.0;
  if (max_degree >= 1) d[1] = one_minus_x;
  for (int k = 2; k <= max_degree; ++k) {
    const double denom = k + 2.0 * nu - 1.0;
    const double alpha = 2.0 * (k + nu - 1.0) / denom;
    const double beta = (k - 1.0) / denom;
    d[k] = alpha * one_minus_x + alpha * x * d[k - 1] - beta * d[k - 2];
  }
  return d;
}

std::vector<double> gegenbauer_ratios(int max_degree, double nu, double theta) {
  auto d = gegenbauer_ratio_deficits(max_degree, nu, theta);
  for (auto& v : d) v = 1.0 - v;
  return d;
}

}  // namespace sphsemi
