#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sphsemi/error.hpp"
#include "sphsemi/gegenbauer.hpp"
#include "sphsemi/laplace_series.hpp"

using namespace sphsemi;

namespace {

LaplaceCoefficients random_coefficients(LaplaceCoefficients c, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : c.values) v = u(gen);
  return c;
}

double max_abs_diff(const LaplaceCoefficients& a, const LaplaceCoefficients& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("zonal analysis examples") {
  const auto q = build_theta_quadrature(0.5, 40);
  const auto one = analyze_zonal([](double) { return 1.0; }, 0.5, 10, q);
  CHECK(one[0] == doctest::Approx(std::sqrt(4 * std::numbers::pi)).epsilon(1e-14));
  for (int k = 1; k <= 10; ++k) CHECK(std::abs(one[k]) < 1e-14);

  const auto p3 = analyze_zonal([](double x) { return eval_gegenbauer(3, 0.5, x); }, 0.5, 10, q);
  for (int k = 0; k <= 10; ++k) {
    if (k != 3) CHECK(std::abs(p3[k]) < 1e-14);
  }
  CHECK(std::abs(p3[3]) > 0.1);

  const auto sq = analyze_zonal([](double x) { return x * x; }, 0.5, 10, q);
  for (int k = 1; k <= 10; ++k) {
    if (k != 2) CHECK(std::abs(sq[k]) < 1e-14);
  }
  // x^2 = (2 P_2 + P_0) / 3 and e_k = sqrt((2k+1)/(4 pi)) P_k.
  CHECK(sq[0] == doctest::Approx(std::sqrt(4 * std::numbers::pi) / 3).epsilon(1e-13));
  CHECK(sq[2] == doctest::Approx(2.0 / 3.0 * std::sqrt(4 * std::numbers::pi / 5)).epsilon(1e-13));

  CHECK_THROWS_AS(analyze_zonal([](double) { return 1.0; }, 1.0, 4, q), ParameterError);
}

TEST_CASE("zonal synthesis") {
  const auto zero = LaplaceCoefficients::zonal(0.5, 5);
  CHECK(synth_zonal(zero, 0.7) == 0.0);
  auto c0 = zero;
  c0[0] = 2.0;
  CHECK(synth_zonal(c0, 0.1) == doctest::Approx(synth_zonal(c0, 2.9)).epsilon(1e-15));

  for (double lam : {0.5, 1.0, 1.5}) {
    const auto c = random_coefficients(LaplaceCoefficients::zonal(lam, 16), 7);
    const auto q = build_theta_quadrature(lam, 17);
    const auto back = analyze_zonal([&](double x) { return synth_zonal(c, std::acos(x)); }, lam, 16, q);
    CHECK(max_abs_diff(c, back) <= 1e-10);

    // Parseval against the quadrature L2 norm.
    const auto q2 = build_theta_quadrature(lam, 40);
    double s = 0.0;
    for (std::size_t i = 0; i < q2.size(); ++i) s += q2.weights[i] * std::pow(synth_zonal(c, q2.theta[i]), 2);
    const double l2 = std::sqrt(equator_measure(lam) * s);
    CHECK(parseval_l2_norm(c) == doctest::Approx(l2).epsilon(1e-8));
  }
}

TEST_CASE("sphere analysis examples") {
  const auto grid = build_sphere_grid(8);
  const auto one = analyze_s2([](double, double, double) { return 1.0; }, 8, grid);
  CHECK(one[0] == doctest::Approx(std::sqrt(4 * std::numbers::pi)).epsilon(1e-14));
  for (std::size_t i = 1; i < one.size(); ++i) CHECK(std::abs(one[i]) < 1e-13);

  const auto z2 = analyze_s2([](double, double, double z) { return z * z; }, 8, grid);
  for (std::size_t i = 0; i < z2.size(); ++i) {
    if (i != 0 && i != static_cast<std::size_t>(LaplaceCoefficients::index(2, 0))) CHECK(std::abs(z2[i]) < 1e-13);
  }
  CHECK(std::abs(z2[LaplaceCoefficients::index(2, 0)]) > 0.1);

  for (int m = -2; m <= 2; ++m) {
    const auto y = analyze_s2(
        [&](double x, double yy, double z) {
          const double theta = std::acos(std::clamp(z, -1.0, 1.0));
          return real_spherical_harmonic(2, m, theta, std::atan2(yy, x));
        },
        8, grid);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double expect = i == static_cast<std::size_t>(LaplaceCoefficients::index(2, m)) ? 1.0 : 0.0;
      CHECK(std::abs(y[i] - expect) < 1e-13);
    }
  }
}

TEST_CASE("sphere round trips") {
  const auto grid = build_sphere_grid(12);
  const auto c = random_coefficients(LaplaceCoefficients::sphere(12), 11);
  const auto samples = synth_s2(c, grid);
  const auto back = analyze_s2_samples(samples, 12, grid);
  CHECK(max_abs_diff(c, back) <= 1e-10);
  const auto again = synth_s2(back, grid);
  for (std::size_t i = 0; i < samples.size(); ++i) CHECK(std::abs(again[i] - samples[i]) <= 1e-8);
  CHECK(eval_s2(c, grid.theta[3], grid.phi[5]) == doctest::Approx(samples[3 * grid.n_lon() + 5]).epsilon(1e-12));

  double s = 0.0;
  for (std::size_t i = 0; i < grid.n_lat(); ++i) {
    for (std::size_t j = 0; j < grid.n_lon(); ++j) s += grid.lat_weights[i] * std::pow(samples[i * grid.n_lon() + j], 2);
  }
  CHECK(parseval_l2_norm(c) == doctest::Approx(std::sqrt(s)).epsilon(1e-8));
  CHECK_THROWS_AS(analyze_s2_samples(samples, 13, grid), ParameterError);
}

TEST_CASE("degree projections") {
  const auto c = random_coefficients(LaplaceCoefficients::sphere(6), 3);
  auto sum = LaplaceCoefficients::sphere(6);
  for (int k = 0; k <= 6; ++k) {
    const auto pk = project_degree(c, k);
    CHECK(max_abs_diff(project_degree(pk, k), pk) == 0.0);
    if (k > 0) CHECK(parseval_l2_norm(project_degree(pk, k - 1)) == 0.0);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += pk[i];
  }
  CHECK(max_abs_diff(sum, c) == 0.0);
  CHECK(parseval_l2_norm(project_degree(c, 9)) == 0.0);

  auto constant = LaplaceCoefficients::zonal(0.5, 4);
  constant[0] = 3.0;
  CHECK(max_abs_diff(project_degree(constant, 0), constant) == 0.0);
  CHECK(parseval_l2_norm(project_degree(constant, 1)) == 0.0);
}

TEST_CASE("parseval norm") {
  CHECK(parseval_l2_norm(LaplaceCoefficients::zonal(1.0, 3)) == 0.0);
  auto e = LaplaceCoefficients::sphere(3);
  e[LaplaceCoefficients::index(3, -2)] = 1.0;
  CHECK(parseval_l2_norm(e) == 1.0);
  CHECK(e.degree_of(LaplaceCoefficients::index(3, -2)) == 3);
}

TEST_CASE("coefficient CSV round trip") {
  for (const auto& c : {random_coefficients(LaplaceCoefficients::zonal(1.5, 9), 5),
                        random_coefficients(LaplaceCoefficients::sphere(4), 6)}) {
    std::stringstream ss;
    write_coefficients_csv(ss, c);
    const auto back = read_coefficients_csv(ss);
    CHECK(back.kind == c.kind);
    CHECK(back.lambda == c.lambda);
    CHECK(back.values == c.values);
  }
  std::stringstream bad("kind,lambda,N\nzonal,0.5,2\n0,1\n1,x\n");
  CHECK_THROWS_AS(read_coefficients_csv(bad), DataError);
}
