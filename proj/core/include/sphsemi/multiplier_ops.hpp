#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sphsemi/laplace_series.hpp"

namespace sphsemi {

/// p(x) = sum_i coefficients[i] x^i with p(0) = 0, lowest nonzero coefficient
/// positive and p(k) > 0 on the positive integers.
class RegularPolynomial {
 public:
  /// Validates on k = 1..check_up_to; throws ValidationError.
  explicit RegularPolynomial(std::vector<double> coefficients, int check_up_to = 4096);

  static RegularPolynomial linear();                    // p(x) = x
  static RegularPolynomial laplace_beltrami(double lambda);  // p(x) = x(x + 2 lambda)

  double operator()(double x) const;
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coefficients_; }

 private:
  std::vector<double> coefficients_;
};

struct MultiplierParams {
  std::vector<double> p;
  std::optional<double> gamma;
  std::optional<double> t;
  std::optional<double> theta;
  std::optional<double> alpha;
  std::optional<int> r;
};

/// Values m(k) and complements 1 - m(k) for k = 0..N. The complement is
/// tracked separately so that 1 - m keeps full relative accuracy when m -> 1.
struct MultiplierTable {
  std::vector<double> value;
  std::vector<double> complement;
};

/// A rule k -> m(k) acting diagonally on Laplace coefficients.
class MultiplierSequence {
 public:
  using Batch = std::function<void(int max_degree, std::span<double> value, std::span<double> complement)>;

  MultiplierSequence(std::string tag, Batch batch, MultiplierParams params = {});

  MultiplierTable table(int max_degree) const;
  std::vector<double> values(int max_degree) const { return table(max_degree).value; }
  double operator()(int k) const;
  double complement(int k) const;

  const std::string& tag() const { return tag_; }
  const MultiplierParams& params() const { return params_; }

 private:
  std::string tag_;
  Batch batch_;
  MultiplierParams params_;
};

struct SemigroupOptions {
  /// Allow gamma > 1; kernel positivity is then not expected.
  bool permissive_gamma = false;
};

MultiplierSequence identity_multiplier();
MultiplierSequence zero_multiplier();
MultiplierSequence delta_multiplier(int degree);
/// m(k) = values[k] for k < values.size(), zero beyond.
MultiplierSequence from_values(std::string tag, std::vector<double> values);

/// Scales coefficients degree by degree.
LaplaceCoefficients apply(const MultiplierSequence& m, const LaplaceCoefficients& f);

/// k -> 1 - (1 - m(k))^r.
MultiplierSequence boolean(const MultiplierSequence& m, int r);

/// k -> exp(-(p(k))^gamma t); the identity at t = 0.
MultiplierSequence semigroup_multiplier(const RegularPolynomial& p, double gamma, double t,
                                        SemigroupOptions options = {});
/// k -> (-(p(k))^gamma)^r.
MultiplierSequence generator_multiplier(const RegularPolynomial& p, double gamma, int r,
                                        SemigroupOptions options = {});

/// Abel-Poisson family: p(x) = x.
MultiplierSequence abel_poisson_multiplier(double gamma, double t);
/// Weierstrass family: p(x) = x(x + 2 lambda), exponent kappa.
MultiplierSequence weierstrass_multiplier(double kappa, double t, double lambda);

/// k -> P_k^lambda(cos theta) / P_k^lambda(1); identity at theta = 0.
MultiplierSequence translation_multiplier(double theta, double lambda);
/// k -> (1 - P_k^lambda(cos theta) / P_k^lambda(1))^{alpha/2}.
MultiplierSequence frac_difference_multiplier(double alpha, double theta, double lambda);
/// Partial sum sum_{i < terms} (-1)^i C(alpha/2, i) S_theta^i.
MultiplierSequence binomial_difference_series(double alpha, double theta, double lambda, int terms);

/// A_k^alpha = Gamma(k + alpha + 1) / (Gamma(alpha + 1) Gamma(k + 1)).
double cesaro_number(int k, double alpha);
/// k -> A_{K-k}^alpha / A_K^alpha for k <= K, zero beyond.
MultiplierSequence cesaro_multiplier(int big_k, double alpha);
LaplaceCoefficients cesaro_mean(const LaplaceCoefficients& f, int big_k, double alpha);

/// Pointwise product.
MultiplierSequence compose(const MultiplierSequence& a, const MultiplierSequence& b);
/// k -> m(k) - 1.
MultiplierSequence subtract_identity(const MultiplierSequence& m);
/// k -> s m(k).
MultiplierSequence scale(const MultiplierSequence& m, double s);
/// k -> (1 - m(k))^r, the symbol of (I - T)^r.
MultiplierSequence complement_power(const MultiplierSequence& m, int r);

}  // namespace sphsemi
