#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "sphsemi/quadrature.hpp"

namespace sphsemi {

enum class SeriesKind { zonal, sphere };

/// A band-limited function stored by its Laplace-series coefficients.
///
/// zonal:  b_k, k = 0..N, against e_k(x) = sqrt(c(k,lambda)/|S^{d-2}|) P_k^lambda(x),
///         so that ||e_k||_{L^2} = 1 on S^{d-1}.
/// sphere: f_{k,m}, k = 0..N, |m| <= k, against real orthonormal spherical
///         harmonics on S^2 (lambda = 1/2), stored at index k^2 + k + m.
struct LaplaceCoefficients {
  SeriesKind kind = SeriesKind::zonal;
  double lambda = 0.5;
  int max_degree = 0;
  std::vector<double> values;

  static LaplaceCoefficients zonal(double lambda, int max_degree);
  static LaplaceCoefficients sphere(int max_degree);

  static constexpr int index(int k, int m) { return k * k + k + m; }
  /// Degree of the coefficient stored at position i.
  int degree_of(std::size_t i) const;

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

/// Tensor grid on S^2: Gauss-Legendre in cos(theta), equispaced in phi.
/// Products of harmonics of degree <= band_limit are integrated exactly.
struct SphereGridS2 {
  int band_limit = 0;
  std::vector<double> theta;         // colatitudes, increasing
  std::vector<double> x;             // cos(theta)
  std::vector<double> lat_weights;   // Gauss-Legendre weight times 2 pi / n_lon
  std::vector<double> phi;

  std::size_t n_lat() const { return theta.size(); }
  std::size_t n_lon() const { return phi.size(); }
  std::size_t size() const { return n_lat() * n_lon(); }
};

/// Grid exact for products of degree <= 2 * band_limit.
SphereGridS2 build_sphere_grid(int band_limit);

/// Normalized zonal basis e_0..e_N at x.
std::vector<double> zonal_basis(int max_degree, double lambda, double x);

LaplaceCoefficients analyze_zonal(const std::function<double(double)>& phi, double lambda,
                                  int max_degree, const ThetaQuadrature& q);
double synth_zonal(const LaplaceCoefficients& c, double theta);
std::vector<double> synth_zonal(const LaplaceCoefficients& c, std::span<const double> thetas);

using SphereFunction = std::function<double(double x, double y, double z)>;

LaplaceCoefficients analyze_s2(const SphereFunction& f, int max_degree, const SphereGridS2& grid);
/// Analysis from samples on the grid, row-major (latitude, longitude).
LaplaceCoefficients analyze_s2_samples(std::span<const double> samples, int max_degree,
                                       const SphereGridS2& grid);
/// Samples on the grid, row-major (latitude, longitude).
std::vector<double> synth_s2(const LaplaceCoefficients& c, const SphereGridS2& grid);
double eval_s2(const LaplaceCoefficients& c, double theta, double phi);

/// Orthonormal real spherical harmonic Y_{k,m} at (theta, phi).
double real_spherical_harmonic(int k, int m, double theta, double phi);

/// Keeps degree k only; zero coefficients if k exceeds the band limit.
LaplaceCoefficients project_degree(const LaplaceCoefficients& c, int k);

double parseval_l2_norm(const LaplaceCoefficients& c);

/// CSV layout: `kind,lambda,N` header, its values, then `k,value` (zonal) or
/// `k,m,value` (sphere) rows. Floats use shortest round-trip text.
void write_coefficients_csv(std::ostream& out, const LaplaceCoefficients& c);
LaplaceCoefficients read_coefficients_csv(std::istream& in);

}  // namespace sphsemi
