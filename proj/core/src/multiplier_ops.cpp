#include "sphsemi/multiplier_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "sphsemi/error.hpp"
#include "sphsemi/gegenbauer.hpp"
#include "sphsemi/number_format.hpp"

namespace sphsemi {

namespace {

void check_r(int r) {
  if (r < 1) throw ParameterError("multiplier: Boolean and power order r must be >= 1, got " + std::to_string(r));
}

void check_theta(double theta) {
  if (!(theta >= 0.0) || theta > std::numbers::pi + 1e-15) {
    throw ParameterError("multiplier: theta must lie in [0, pi], got " + std::to_string(theta));
  }
}

void check_gamma(double gamma, const SemigroupOptions& options) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ParameterError("semigroup: gamma must be positive, got " + std::to_string(gamma));
  }
  if (gamma > 1.0 && !options.permissive_gamma) {
    throw ParameterError("semigroup: gamma must lie in (0, 1] unless permissive mode is enabled, got " +
                         std::to_string(gamma));
  }
}

// (p(k))^gamma, refusing nonpositive p(k) at k >= 1.
double exponent_base(const RegularPolynomial& p, int k, double gamma) {
  if (k == 0) return 0.0;
  const double v = p(k);
  if (!(v > 0.0)) {
    throw ValidationError("semigroup: p(" + std::to_string(k) + ") = " + std::to_string(v) +
                          " is not positive");
  }
  return gamma == 1.0 ? v : std::pow(v, gamma);
}

std::string poly_text(const RegularPolynomial& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.coefficients().size(); ++i) {
    if (i) s += ',';
    s += format_double(p.coefficients()[i]);
  }
  return s + "]";
}

double int_pow(double x, int r) {
  double v = 1.0;
  for (int i = 0; i < r; ++i) v *= x;
  return v;
}

}  // namespace

RegularPolynomial::RegularPolynomial(std::vector<double> coefficients, int check_up_to)
    : coefficients_(std::move(coefficients)) {
  while (!coefficients_.empty() && coefficients_.back() == 0.0) coefficients_.pop_back();
  if (coefficients_.size() < 2) throw ValidationError("regular polynomial: degree must be >= 1");
  for (double c : coefficients_) {
    if (!std::isfinite(c)) throw ValidationError("regular polynomial: coefficients must be finite");
  }
  if (coefficients_[0] != 0.0) throw ValidationError("regular polynomial: p(0) must be 0");
  for (std::size_t i = 1; i < coefficients_.size(); ++i) {
    if (coefficients_[i] != 0.0) {
      if (coefficients_[i] < 0.0) {
        throw ValidationError("regular polynomial: lowest-order nonzero coefficient must be positive");
      }
      break;
    }
  }
  for (int k = 1; k <= check_up_to; ++k) {
    if (!((*this)(k) > 0.0)) {
      throw ValidationError("regular polynomial: p(" + std::to_string(k) + ") is not positive");
    }
  }
}

RegularPolynomial RegularPolynomial::linear() { return RegularPolynomial({0.0, 1.0}); }

RegularPolynomial RegularPolynomial::laplace_beltrami(double lambda) {
  return RegularPolynomial({0.0, 2.0 * lambda, 1.0});
}

double RegularPolynomial::operator()(double x) const {
  double v = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) v = v * x + *it;
  return v;
}

MultiplierSequence::MultiplierSequence(std::string tag, Batch batch, MultiplierParams params)
    : tag_(std::move(tag)), batch_(std::move(batch)), params_(std::move(params)) {}

MultiplierTable MultiplierSequence::table(int max_degree) const {
  if (max_degree < 0) throw ParameterError("multiplier: degree must be nonnegative");
  MultiplierTable t;
  t.value.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
  t.complement.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
  batch_(max_degree, t.value, t.complement);
  return t;
}

double MultiplierSequence::operator()(int k) const { return table(k).value[k]; }
double MultiplierSequence::complement(int k) const { return table(k).complement[k]; }

MultiplierSequence identity_multiplier() {
  return MultiplierSequence("identity", [](int, std::span<double> v, std::span<double> c) {
    std::fill(v.begin(), v.end(), 1.0);
    std::fill(c.begin(), c.end(), 0.0);
  });
}

MultiplierSequence zero_multiplier() {
  return MultiplierSequence("zero", [](int, std::span<double> v, std::span<double> c) {
    std::fill(v.begin(), v.end(), 0.0);
    std::fill(c.begin(), c.end(), 1.0);
  });
}

MultiplierSequence delta_multiplier(int degree) {
  if (degree < 0) throw ParameterError("delta multiplier: degree must be nonnegative");
  return MultiplierSequence("delta(" + std::to_string(degree) + ")",
                            [degree](int n, std::span<double> v, std::span<double> c) {
                              for (int k = 0; k <= n; ++k) {
                                v[k] = k == degree ? 1.0 : 0.0;
                                c[k] = 1.0 - v[k];
                              }
                            });
}

MultiplierSequence from_values(std::string tag, std::vector<double> values) {
  return MultiplierSequence(std::move(tag), [values = std::move(values)](int n, std::span<double> v,
                                                                        std::span<double> c) {
    for (int k = 0; k <= n; ++k) {
      v[k] = static_cast<std::size_t>(k) < values.size() ? values[k] : 0.0;
      c[k] = 1.0 - v[k];
    }
  });
}

LaplaceCoefficients apply(const MultiplierSequence& m, const LaplaceCoefficients& f) {
  const auto v = m.values(f.max_degree);
  LaplaceCoefficients out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= v[out.degree_of(i)];
  return out;
}

MultiplierSequence boolean(const MultiplierSequence& m, int r) {
  check_r(r);
  auto params = m.params();
  params.r = r;
  return MultiplierSequence(
      "boolean(" + m.tag() + ",r=" + std::to_string(r) + ")",
      [m, r](int n, std::span<double> v, std::span<double> c) {
        const auto base = m.table(n);
        for (int k = 0; k <= n; ++k) {
          const double b = base.value[k];
          c[k] = int_pow(base.complement[k], r);
          // 1 - (1 - b)^r without cancellation when b is small.
          v[k] = (b > -0.5 && b < 0.5) ? -std::expm1(r * std::log1p(-b)) : 1.0 - c[k];
        }
      },
      params);
}

MultiplierSequence complement_power(const MultiplierSequence& m, int r) {
  check_r(r);
  return MultiplierSequence("complement_power(" + m.tag() + ",r=" + std::to_string(r) + ")",
                            [m, r](int n, std::span<double> v, std::span<double> c) {
                              const auto base = m.table(n);
                              for (int k = 0; k <= n; ++k) {
                                v[k] = int_pow(base.complement[k], r);
                                c[k] = 1.0 - v[k];
                              }
                            },
                            m.params());
}

MultiplierSequence semigroup_multiplier(const RegularPolynomial& p, double gamma, double t,
                                        SemigroupOptions options) {
  check_gamma(gamma, options);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ParameterError("semigroup: t must be finite and >= 0, got " + std::to_string(t));
  }
  MultiplierParams params{p.coefficients(), gamma, t, {}, {}, {}};
  return MultiplierSequence(
      "semigroup(p=" + poly_text(p) + ",gamma=" + format_double(gamma) + ",t=" + format_double(t) + ")",
      [p, gamma, t](int n, std::span<double> v, std::span<double> c) {
        for (int k = 0; k <= n; ++k) {
          const double e = exponent_base(p, k, gamma) * t;
          v[k] = std::exp(-e);
          c[k] = -std::expm1(-e);
        }
      },
      params);
}

MultiplierSequence generator_multiplier(const RegularPolynomial& p, double gamma, int r,
                                        SemigroupOptions options) {
  check_gamma(gamma, options);
  check_r(r);
  MultiplierParams params{p.coefficients(), gamma, {}, {}, {}, r};
  return MultiplierSequence(
      "generator(p=" + poly_text(p) + ",gamma=" + format_double(gamma) + ",r=" + std::to_string(r) + ")",
      [p, gamma, r](int n, std::span<double> v, std::span<double> c) {
        const double sign = r % 2 == 0 ? 1.0 : -1.0;
        for (int k = 0; k <= n; ++k) {
          v[k] = sign * int_pow(exponent_base(p, k, gamma), r);
          c[k] = 1.0 - v[k];
        }
      },
      params);
}

MultiplierSequence abel_poisson_multiplier(double gamma, double t) {
  return semigroup_multiplier(RegularPolynomial::linear(), gamma, t);
}

MultiplierSequence weierstrass_multiplier(double kappa, double t, double lambda) {
  return semigroup_multiplier(RegularPolynomial::laplace_beltrami(lambda), kappa, t);
}

MultiplierSequence translation_multiplier(double theta, double lambda) {
  check_theta(theta);
  GegenbauerIndex{0, lambda}.validate();
  MultiplierParams params;
  params.theta = theta;
  return MultiplierSequence("translation(theta=" + format_double(theta) + ")",
                            [theta, lambda](int n, std::span<double> v, std::span<double> c) {
                              const auto d = gegenbauer_ratio_deficits(n, lambda, theta);
                              for (int k = 0; k <= n; ++k) {
                                c[k] = d[k];
                                v[k] = 1.0 - d[k];
                              }
                            },
                            params);
}

MultiplierSequence frac_difference_multiplier(double alpha, double theta, double lambda) {
  check_theta(theta);
  GegenbauerIndex{0, lambda}.validate();
  if (!(alpha > 0.0)) throw ParameterError("fractional difference: alpha must be positive");
  MultiplierParams params;
  params.theta = theta;
  params.alpha = alpha;
  return MultiplierSequence(
      "difference(alpha=" + format_double(alpha) + ",theta=" + format_double(theta) + ")",
      [alpha, theta, lambda](int n, std::span<double> v, std::span<double> c) {
        const auto d = gegenbauer_ratio_deficits(n, lambda, theta);
        for (int k = 0; k <= n; ++k) {
          const double base = std::max(d[k], 0.0);
          v[k] = alpha == 2.0 ? d[k] : std::pow(base, 0.5 * alpha);
          c[k] = 1.0 - v[k];
        }
      },
      params);
}

MultiplierSequence binomial_difference_series(double alpha, double theta, double lambda, int terms) {
  check_theta(theta);
  GegenbauerIndex{0, lambda}.validate();
  if (!(alpha > 0.0)) throw ParameterError("binomial difference: alpha must be positive");
  if (terms < 1) throw ParameterError("binomial difference: need at least one term");
  MultiplierParams params;
  params.theta = theta;
  params.alpha = alpha;
  return MultiplierSequence(
      "binomial_difference(alpha=" + format_double(alpha) + ",theta=" + format_double(theta) +
          ",terms=" + std::to_string(terms) + ")",
      [alpha, theta, lambda, terms](int n, std::span<double> v, std::span<double> c) {
        const auto d = gegenbauer_ratio_deficits(n, lambda, theta);
        const double half = 0.5 * alpha;
        for (int k = 0; k <= n; ++k) {
          const double ratio = 1.0 - d[k];
          double coeff = 1.0;
          double power = 1.0;
          double s = 1.0;
          for (int i = 1; i < terms; ++i) {
            coeff *= (half - i + 1.0) / i;
            power *= ratio;
            s += (i % 2 == 0 ? 1.0 : -1.0) * coeff * power;
          }
          v[k] = s;
          c[k] = 1.0 - s;
        }
      },
      params);
}

double cesaro_number(int k, double alpha) {
  if (k < 0) throw ParameterError("cesaro: index must be nonnegative");
  if (!(alpha >= 0.0)) throw ParameterError("cesaro: alpha must be >= 0");
  if (k <= 1000) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= (alpha + i) / i;
    return v;
  }
  // log A_k = sum_i log(1 + alpha/i); log-Gamma differences lose digits here.
  double s = 0.0;
  for (int i = 1; i <= k; ++i) s += std::log1p(alpha / i);
  return std::exp(s);
}

MultiplierSequence cesaro_multiplier(int big_k, double alpha) {
  if (big_k < 0) throw ParameterError("cesaro: K must be nonnegative");
  if (!(alpha >= 0.0)) throw ParameterError("cesaro: alpha must be >= 0");
  MultiplierParams params;
  params.alpha = alpha;
  return MultiplierSequence(
      "cesaro(K=" + std::to_string(big_k) + ",alpha=" + format_double(alpha) + ")",
      [big_k, alpha](int n, std::span<double> v, std::span<double> c) {
        // A_{K-k} / A_K = exp(-sum_{i=K-k+1}^{K} log(1 + alpha/i)).
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
          if (k > big_k) {
            v[k] = 0.0;
            c[k] = 1.0;
            continue;
          }
          if (k > 0) s += std::log1p(alpha / (big_k - k + 1));
          v[k] = std::exp(-s);
          c[k] = -std::expm1(-s);
        }
      },
      params);
}

LaplaceCoefficients cesaro_mean(const LaplaceCoefficients& f, int big_k, double alpha) {
  return apply(cesaro_multiplier(big_k, alpha), f);
}

MultiplierSequence compose(const MultiplierSequence& a, const MultiplierSequence& b) {
  return MultiplierSequence("compose(" + a.tag() + "," + b.tag() + ")",
                            [a, b](int n, std::span<double> v, std::span<double> c) {
                              const auto ta = a.table(n);
                              const auto tb = b.table(n);
                              for (int k = 0; k <= n; ++k) {
                                v[k] = ta.value[k] * tb.value[k];
                                c[k] = ta.complement[k] + tb.complement[k] -
                                       ta.complement[k] * tb.complement[k];
                              }
                            });
}

MultiplierSequence subtract_identity(const MultiplierSequence& m) {
  return MultiplierSequence("subtract_identity(" + m.tag() + ")",
                            [m](int n, std::span<double> v, std::span<double> c) {
                              const auto t = m.table(n);
                              for (int k = 0; k <= n; ++k) {
                                v[k] = -t.complement[k];
                                c[k] = 1.0 + t.complement[k];
                              }
                            },
                            m.params());
}

MultiplierSequence scale(const MultiplierSequence& m, double s) {
  return MultiplierSequence("scale(" + m.tag() + "," + format_double(s) + ")",
                            [m, s](int n, std::span<double> v, std::span<double> c) {
                              const auto t = m.table(n);
                              for (int k = 0; k <= n; ++k) {
                                v[k] = s * t.value[k];
                                c[k] = 1.0 - v[k];
                              }
                            },
                            m.params());
}

}  // namespace sphsemi
