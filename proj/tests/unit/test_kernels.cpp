#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "sphsemi/error.hpp"
#include "sphsemi/experiments.hpp"
#include "sphsemi/kernels.hpp"

using namespace sphsemi;

TEST_CASE("trivial kernels") {
  const auto grid = uniform_theta_grid(33);
  const auto delta = synthesize_kernel(delta_multiplier(0), {}, grid);
  CHECK(delta.truncation == 0);
  for (double v : delta.values) CHECK(v == doctest::Approx(1 / (4 * std::numbers::pi)).epsilon(1e-15));
  const auto zero = synthesize_kernel(zero_multiplier(), {}, grid);
  for (double v : zero.values) CHECK(v == 0.0);
  CHECK(l1_normalization(zero, kernel_quadrature(zero)) == 0.0);
  CHECK(positivity_report(synthesize_kernel(delta_multiplier(1), {}, grid)).positive == false);
}

TEST_CASE("closed form Poisson") {
  CHECK(closed_form_poisson(0.0, 0.3, 3) == doctest::Approx(1 / (4 * std::numbers::pi)));
  CHECK(closed_form_poisson(0.5, 1.0, 3) == doctest::Approx(6 / (4 * std::numbers::pi)).epsilon(1e-15));
  for (double x : {-1.0, 0.0, 0.9}) CHECK(closed_form_poisson(0.8, x, 3) > 0.0);
  CHECK_THROWS_AS(closed_form_poisson(1.0, 0.0, 3), ParameterError);

  const auto grid = uniform_theta_grid(2001);
  for (double u : {0.3, 0.5, 0.8}) {
    const auto kern = synthesize_kernel(abel_poisson_multiplier(1.0, -std::log(u)), {}, grid);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      err = std::max(err, std::abs(kern.values[i] - oracle::poisson_s2(u, std::cos(grid[i]))));
    }
    CHECK(err <= 1e-8);
    CHECK(kern.tail_bound <= 1e-12 * kern.scale);
  }
  // d = 4 against the library's closed form.
  KernelOptions opts;
  opts.dimension = 4;
  const auto k4 = synthesize_kernel(abel_poisson_multiplier(1.0, -std::log(0.5)), opts, grid);
  for (std::size_t i = 0; i < grid.size(); i += 50) {
    CHECK(k4.values[i] == doctest::Approx(closed_form_poisson(0.5, std::cos(grid[i]), 4)).epsilon(1e-10));
  }
}

TEST_CASE("positivity and normalization") {
  const auto grid = uniform_theta_grid(4096);
  const auto ap = synthesize_kernel(abel_poisson_multiplier(1.0, -std::log(0.5)), {}, grid);
  CHECK(positivity_report(ap).positive);
  const auto w = synthesize_kernel(weierstrass_multiplier(1.0, 0.1, 0.5), {}, grid);
  CHECK(positivity_report(w).positive);
  CHECK(l1_normalization(w, kernel_quadrature(w)) == doctest::Approx(1.0).epsilon(1e-9));
  const auto b3 = synthesize_kernel(boolean(abel_poisson_multiplier(1.0, 0.4), 3), {}, grid);
  CHECK(l1_normalization(b3, kernel_quadrature(b3)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kernel_l1_norm(b3) <= 8.0);

  const auto v = synthesize_kernel(abel_poisson_multiplier(0.5, 0.2), {}, grid);
  CHECK(positivity_report(v).positive);
  CHECK(kernel_l1_norm(v) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("truncation") {
  const auto c = choose_truncation(abel_poisson_multiplier(1.0, 1.0), 3, 1e-12);
  CHECK(c.tail_bound <= 1e-12 * c.scale);
  const auto c1 = choose_truncation(abel_poisson_multiplier(1.0, 1.0), 3, 1e-12, c.degree + 10);
  CHECK(c1.degree == c.degree + 10);
  CHECK_THROWS_AS(choose_truncation(identity_multiplier(), 3, 1e-12, 0, 1 << 12), TruncationError);
}

TEST_CASE("Funk-Hecke factor is one") {
  for (double lam : {0.5, 1.0, 1.5}) {
    for (int k : {0, 1, 5, 100}) CHECK(funk_hecke_factor(k, lam) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("physical convolution") {
  const auto m = abel_poisson_multiplier(1.0, -std::log(0.5));
  const auto kern = synthesize_kernel(m, {}, {});
  const int deg = 6;
  const auto grid = build_sphere_grid((deg + kern.truncation + 1) / 2);
  const SphereConvolution conv(kern, grid, deg);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto f = random_sphere(deg, seed);
    const auto a = conv(f);
    const auto b = apply(m, f);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-7);
  }
  auto one = LaplaceCoefficients::sphere(deg);
  one[0] = 2.5;
  const auto c = convolve_s2(one, kern, grid);
  CHECK(c[0] == doctest::Approx(2.5).epsilon(1e-12));

  CHECK_THROWS_AS(SphereConvolution(kern, build_sphere_grid(8), deg), ParameterError);

  const auto f = random_sphere(deg, 9);
  const auto y = young_check(f, kern, grid);
  CHECK(y.holds);
  CHECK(y.kernel_l1 == doctest::Approx(1.0).epsilon(1e-9));
  auto doubled = kern;
  for (auto& wgt : doubled.weights) wgt *= 2.0;
  CHECK(young_check(f, doubled, grid).bound == doctest::Approx(2.0 * y.bound).epsilon(1e-12));
  const auto y0 = young_check(LaplaceCoefficients::sphere(deg), kern, grid);
  CHECK(y0.convolution_norm == 0.0);
  CHECK(y0.holds);
}

TEST_CASE("kernel CSV") {
  const auto kern = synthesize_kernel(abel_poisson_multiplier(1.0, 1.0), {}, uniform_theta_grid(3));
  std::ostringstream out;
  write_kernel_csv(out, kern);
  const auto text = out.str();
  CHECK(text.rfind("# multiplier=", 0) == 0);
  CHECK(text.find("theta,value\n") != std::string::npos);
}
