#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace sphsemi {

/// Quadrature on [0, pi] against the weight sin^{2 lambda}(theta), equivalently
/// on [-1, 1] against (1 - x^2)^{lambda - 1/2} with x = cos(theta).
///
/// Gauss rules carry their polynomial exactness degree; composite rules built
/// in theta (for sharply peaked integrands) report `exactness == -1`.
struct ThetaQuadrature {
  double lambda = 0.5;
  std::vector<double> theta;    // strictly increasing in (0, pi)
  std::vector<double> x;        // cos(theta), hence decreasing
  std::vector<double> weights;  // positive
  int exactness = -1;

  std::size_t size() const { return theta.size(); }

  /// sum_i w_i f(x_i)
  double integrate(const std::function<double(double)>& f) const;
  double integrate_samples(std::span<const double> samples) const;
};

/// Sphere S^{d-1} in R^d with lambda = (d-2)/2.
struct SphereMeasure {
  int dimension = 3;
  double area = 0.0;
  double lambda = 0.5;

  static SphereMeasure for_dimension(int d);
};

/// |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2), d >= 3.
double surface_measure(int d);

/// |S^{d-1}| continued to real lambda = (d-2)/2 > 0.
double sphere_measure(double lambda);

/// |S^{d-2}|, the measure of the equator; prefactor of zonal norms.
double equator_measure(double lambda);

/// int_0^pi sin^{2 lambda}(theta) d theta.
double weight_mass(double lambda);

/// Gauss rule for (1 - x^2)^{lambda - 1/2} with n_nodes nodes (exactness 2n-1).
///
/// Nodes are the eigenvalues of the Jacobi matrix of the Gegenbauer weight,
/// polished by one Newton step; weights are Christoffel numbers from the
/// orthonormal recurrence.
ThetaQuadrature build_theta_quadrature(double lambda, int n_nodes);

/// Composite Gauss-Legendre rule in theta with panels that grow geometrically
/// from `first_panel` at theta = 0 up to `max_panel`, then stay uniform up to pi.
ThetaQuadrature build_graded_theta_quadrature(double lambda, double first_panel,
                                              int points_per_panel = 20,
                                              double max_panel = 0.125);

inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();
inline constexpr int kSupGridPoints = 4096;

/// Zonal L^p norm {|S^{d-2}| int_0^pi |phi(cos t)|^p sin^{2 lambda} t dt}^{1/p}.
/// For p = infinity: max of |phi| over a uniform theta grid of `kSupGridPoints`
/// points, refined once around the grid maximizer.
double zonal_lp_norm(const std::function<double(double)>& phi, double p, const ThetaQuadrature& q);

/// Same, from samples already taken at the quadrature nodes; for p = infinity
/// the maximum over the samples.
double zonal_lp_norm_samples(std::span<const double> samples, double p, const ThetaQuadrature& q);

/// Maximum of |f(theta)| on a uniform grid over [lo, hi] plus one golden-section
/// refinement around the grid maximizer.
struct SupResult {
  double value = 0.0;
  double argmax = 0.0;
};
SupResult sup_on_interval(const std::function<double(double)>& f, double lo, double hi, int points);

}  // namespace sphsemi
