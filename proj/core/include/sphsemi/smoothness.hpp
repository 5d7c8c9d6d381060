#pragma once

#include <span>
#include <vector>

#include "sphsemi/laplace_series.hpp"
#include "sphsemi/multiplier_ops.hpp"

namespace sphsemi {

enum class NormKind { l2, lp_grid, sup_grid };

/// Norm selector. l2 is exact (Parseval); lp_grid and sup_grid sample the
/// synthesized function (zonal series only).
struct NormSpec {
  NormKind kind = NormKind::l2;
  double p = 2.0;
  int grid_points = kSupGridPoints;
};

double function_norm(const LaplaceCoefficients& f, const NormSpec& norm);

struct ModulusOptions {
  int grid_points = 256;
  /// The geometric grid spans [t * min_ratio, t].
  double min_ratio = 1e-4;
  /// Double the grid until the sup changes by less than doubling_tolerance (relative).
  bool doubling = false;
  double doubling_tolerance = 1e-6;
  int max_grid_points = 8192;
};

struct ModulusResult {
  double value = 0.0;
  double argmax = 0.0;
  int grid_points = 0;
};

/// omega^alpha(f, t) = sup_{0 < theta <= t} || (I - S_theta)^{alpha/2} f ||.
ModulusResult modulus(const LaplaceCoefficients& f, double alpha, double t, const NormSpec& norm = {},
                      const ModulusOptions& options = {});

struct KFunctionalResult {
  double value = 0.0;
  /// Ridge parameter of the minimizer: g_k = f_k / (1 + mu a_k^2); 0 means g = f,
  /// infinity means g is the projection onto the kernel of A (or g = 0).
  double mu = 0.0;
};

/// inf_g ||f - g||_2 + t ||A g||_2 for A acting by a(k) = operator's multiplier.
KFunctionalResult kfunctional_l2_exact(const LaplaceCoefficients& f, const MultiplierSequence& a, double t);
/// Same with the symbol given per degree: a[k] for k = 0..N.
KFunctionalResult kfunctional_l2_exact(const LaplaceCoefficients& f, std::span<const double> a, double t);

struct RealizationOptions {
  /// Constant N in the step m = r (N + 2).
  double n_constant = 1.0;
  NormSpec norm{};
};

/// ||f - g|| + t^r ||(A_p^gamma)^r g|| for g = (I - (I - T(m t))^r) f, m = r (N + 2).
double kfunctional_realization_upper(const LaplaceCoefficients& f, const RegularPolynomial& p, double gamma,
                                     int r, double t, const RealizationOptions& options = {});

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the log-log fit.
  double residual = 0.0;
  int points = 0;
};

/// Least-squares fit of log(values) against log(ts), restricted to ts <= window_max.
SlopeFit loglog_slope(std::span<const double> ts, std::span<const double> values, double window_max);

struct EquivalenceRatio {
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  SlopeFit lhs_fit;
  SlopeFit rhs_fit;
  /// Positions where lhs and rhs were both zero.
  std::vector<int> skipped;
};

/// Ratio band lhs/rhs and log-log slopes over the smallest decade of t.
/// Throws DataError on negative entries or a zero paired with a nonzero.
EquivalenceRatio equivalence_ratio(std::span<const double> lhs, std::span<const double> rhs,
                                   std::span<const double> ts);
/// Ratios only.
EquivalenceRatio equivalence_ratio(std::span<const double> lhs, std::span<const double> rhs);

}  // namespace sphsemi
