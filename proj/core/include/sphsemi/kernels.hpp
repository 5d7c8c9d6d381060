#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sphsemi/laplace_series.hpp"
#include "sphsemi/multiplier_ops.hpp"
#include "sphsemi/quadrature.hpp"

namespace sphsemi {

struct KernelOptions {
  int dimension = 3;
  /// Requested truncation degree; raised automatically when the tail bound
  /// at this degree is above tolerance. Negative: pick the smallest admissible.
  int degree = -1;
  /// Tail tolerance relative to sum_k |m(k)| (k+lambda)/lambda P_k(1) / |S^{d-1}|.
  double tail_tolerance = 1e-12;
  int degree_cap = 1 << 21;
};

/// Truncated zonal kernel
///   phi(cos theta) = (1/|S^{d-1}|) sum_{k<=N} m(k) (k+lambda)/lambda P_k^lambda(cos theta).
struct ZonalKernel {
  double lambda = 0.5;
  int dimension = 3;
  int truncation = 0;
  std::vector<double> theta;
  std::vector<double> values;
  /// sum_{k>N} |m(k)| (k+lambda)/lambda P_k(1) / |S^{d-1}|, bounds the sup-norm truncation error.
  double tail_bound = 0.0;
  /// Same sum over all k; bounds sup |phi|.
  double scale = 0.0;
  std::string tag;
  /// Series weights m(k) (k+lambda)/lambda P_k(1) / |S^{d-1}| against P_k / P_k(1).
  std::vector<double> weights;
};

struct TruncationChoice {
  int degree = 0;
  double tail_bound = 0.0;
  double scale = 0.0;
};

/// Smallest N >= min_degree whose tail bound is below tolerance * scale.
/// Throws TruncationError if no such N exists below the cap.
TruncationChoice choose_truncation(const MultiplierSequence& m, int dimension, double tolerance,
                                   int min_degree = 0, int degree_cap = 1 << 21);

ZonalKernel synthesize_kernel(const MultiplierSequence& m, const KernelOptions& options,
                              std::span<const double> thetas);

/// Evaluates the truncated series at arbitrary angles.
std::vector<double> kernel_values(const ZonalKernel& kern, std::span<const double> thetas);

/// Classical Poisson kernel (1/|S^{d-1}|) (1 - u^2) / (1 - 2 u x + u^2)^{lambda+1}.
double closed_form_poisson(double u, double cos_theta, int dimension);

/// n equispaced angles from 0 to pi inclusive.
std::vector<double> uniform_theta_grid(int n);

inline constexpr int kPositivityGridPoints = 8192;

struct PositivityReport {
  double min_value = 0.0;
  double argmin = 0.0;
  double max_value = 0.0;
  double tail_bound = 0.0;
  /// min_value - tail_bound
  double margin = 0.0;
  double tolerance = 1e-8;
  bool positive = false;
};

/// Positive iff min - tail >= -tolerance * max over the kernel's own samples.
PositivityReport positivity_report(const ZonalKernel& kern, double tolerance = 1e-8);
/// Same, after evaluating the kernel on `dense_grid`.
PositivityReport positivity_report(const ZonalKernel& kern, std::span<const double> dense_grid,
                                   double tolerance = 1e-8);

/// |S^{d-2}| int_0^pi phi(cos t) sin^{2 lambda} t dt.
double l1_normalization(const ZonalKernel& kern, const ThetaQuadrature& q);
/// Graded composite rule resolving the kernel's peak at theta = 0.
ThetaQuadrature kernel_quadrature(const ZonalKernel& kern);
/// |S^{d-2}| int_0^pi |phi(cos t)| sin^{2 lambda} t dt on kernel_quadrature.
double kernel_l1_norm(const ZonalKernel& kern);

/// Scalar c_k with  f * phi = sum_k c_k m(k) Y_k f  for the kernel of m:
///   c_k = |S^{d-2}| (k+lambda) / (lambda |S^{d-1}| c(k,lambda) P_k(1)),
/// which is identically 1 under the |S^{d-1}|^{-1} (k+lambda)/lambda synthesis convention.
double funk_hecke_factor(int k, double lambda);

/// Physical-space zonal convolution on an S^2 grid with a cached kernel table.
class SphereConvolution {
 public:
  /// Throws ParameterError if the grid cannot integrate f(y) phi(x.y) exactly
  /// for inputs of degree `input_degree`.
  SphereConvolution(const ZonalKernel& kern, SphereGridS2 grid, int input_degree);

  /// (f * phi)(x) = int f(y) phi(x.y) dw(y), re-analyzed to degree input_degree.
  LaplaceCoefficients operator()(const LaplaceCoefficients& f) const;
  const SphereGridS2& grid() const { return grid_; }

 private:
  SphereGridS2 grid_;
  int input_degree_ = 0;
  // table_[(i * n_lat + j) * n_lon + d] = phi(x_i . y_j) at longitude offset d.
  std::vector<double> table_;
};

LaplaceCoefficients convolve_s2(const LaplaceCoefficients& f, const ZonalKernel& kern,
                                const SphereGridS2& grid);

struct YoungReport {
  double convolution_norm = 0.0;
  double kernel_l1 = 0.0;
  double input_norm = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// ||f * phi||_2 <= ||phi||_{L^1} ||f||_2.
YoungReport young_check(const LaplaceCoefficients& f, const ZonalKernel& kern, const SphereGridS2& grid);

/// `# multiplier=..., N=..., tail_bound=...` then `theta,value` rows.
void write_kernel_csv(std::ostream& out, const ZonalKernel& kern);

}  // namespace sphsemi
