#pragma once

#include <vector>

namespace sphsemi {

/// Degree and parameter of an ultraspherical polynomial P_k^nu.
struct GegenbauerIndex {
  int degree = 0;
  double nu = 0.5;

  /// Throws ParameterError unless degree >= 0 and nu > 0.
  void validate() const;
};

/// P_k^nu(x) by the three-term recurrence
///   k P_k = 2(k+nu-1) x P_{k-1} - (k+2nu-2) P_{k-2},  P_0 = 1, P_1 = 2 nu x.
double eval_gegenbauer(int k, double nu, double x);

/// P_0^nu(x), ..., P_max_degree^nu(x) in one recurrence sweep.
std::vector<double> eval_gegenbauer_all(int max_degree, double nu, double x);

/// P_k^nu(1) = Gamma(k+2nu) / (Gamma(2nu) k!).
double gegenbauer_at_one(int k, double nu);
double log_gegenbauer_at_one(int k, double nu);

/// c(k,nu) with  int_0^pi P_k^nu(cos t)^2 sin^{2nu} t dt = 1 / c(k,nu).
/// Evaluated in log-Gamma space so large k does not overflow.
double norm_constant(int k, double nu);

/// Deficits D_k = 1 - P_k^nu(cos theta) / P_k^nu(1) for k = 0..max_degree.
///
/// Computed by a recurrence on the deficits themselves, seeded with
/// 1 - cos theta = 2 sin^2(theta/2), so the result keeps full relative
/// accuracy as theta -> 0 where the direct ratio cancels.
std::vector<double> gegenbauer_ratio_deficits(int max_degree, double nu, double theta);

/// Ratios R_k = P_k^nu(cos theta) / P_k^nu(1); bounded by 1 in magnitude.
std::vector<double> gegenbauer_ratios(int max_degree, double nu, double theta);

}  // namespace sphsemi
