#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sphsemi/error.hpp"
#include "sphsemi/quadrature.hpp"

using namespace sphsemi;

TEST_CASE("small Gauss rules") {
  const auto q1 = build_theta_quadrature(0.5, 1);
  REQUIRE(q1.size() == 1);
  CHECK(std::abs(q1.x[0]) < 1e-15);
  CHECK(q1.theta[0] == doctest::Approx(std::numbers::pi / 2));
  CHECK(q1.weights[0] == doctest::Approx(2.0).epsilon(1e-14));

  const auto q2 = build_theta_quadrature(0.5, 2);
  CHECK(q2.x[0] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(q2.x[1] == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(q2.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q2.weights[1] == doctest::Approx(1.0).epsilon(1e-14));

  const auto q3 = build_theta_quadrature(1.0, 1);
  CHECK(std::abs(q3.x[0]) < 1e-15);
  CHECK(q3.weights[0] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
}

TEST_CASE("rule invariants and moments") {
  for (double lam : {0.25, 0.5, 1.0, 1.5, 3.0}) {
    for (int n : {5, 33, 120}) {
      const auto q = build_theta_quadrature(lam, n);
      CHECK(q.exactness == 2 * n - 1);
      for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(q.weights[i] > 0.0);
        if (i) CHECK(q.theta[i] > q.theta[i - 1]);
      }
      double mass = 0.0;
      for (double w : q.weights) mass += w;
      CHECK(mass == doctest::Approx(weight_mass(lam)).epsilon(1e-12));
      CHECK(weight_mass(lam) == doctest::Approx(oracle::weight_moment(lam, 0)).epsilon(1e-13));
      for (int j = 0; j <= std::min(q.exactness, 40); ++j) {
        const double m = q.integrate([&](double x) { return std::pow(x, j); });
        CHECK(std::abs(m - oracle::weight_moment(lam, j)) <= 1e-11 * oracle::weight_moment(lam, j - j % 2) + 1e-15);
      }
    }
  }
}

TEST_CASE("graded rule integrates smooth functions") {
  const auto q = build_graded_theta_quadrature(0.5, 1e-3);
  CHECK(q.exactness == -1);
  CHECK(q.integrate([](double x) { return x * x; }) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  const auto q2 = build_graded_theta_quadrature(1.5, 0.01);
  CHECK(q2.integrate([](double) { return 1.0; }) == doctest::Approx(weight_mass(1.5)).epsilon(1e-13));
}

TEST_CASE("sphere measures") {
  CHECK(surface_measure(3) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-15));
  CHECK(surface_measure(4) == doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-15));
  CHECK_THROWS_AS(surface_measure(2), ParameterError);
  CHECK(equator_measure(0.5) == doctest::Approx(2 * std::numbers::pi));
  // |S^{d-1}| = |S^{d-2}| int sin^{2 lambda}.
  for (double lam : {0.5, 1.0, 1.5, 2.0}) {
    CHECK(sphere_measure(lam) == doctest::Approx(equator_measure(lam) * weight_mass(lam)).epsilon(1e-14));
  }
  const auto s = SphereMeasure::for_dimension(5);
  CHECK(s.lambda == 1.5);
  CHECK(s.area == doctest::Approx(8 * std::numbers::pi * std::numbers::pi / 3));
}

TEST_CASE("zonal norms") {
  const auto q = build_theta_quadrature(0.5, 64);
  CHECK(zonal_lp_norm([](double) { return 1.0; }, 1.0, q) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-13));
  CHECK(zonal_lp_norm([](double) { return 0.0; }, 3.0, q) == 0.0);
  CHECK(zonal_lp_norm([](double x) { return x; }, kInfiniteExponent, q) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(zonal_lp_norm([](double x) { return x; }, 2.0, q) ==
        doctest::Approx(std::sqrt(4 * std::numbers::pi / 3)).epsilon(1e-13));

  // Normalized norms increase with p.
  const double area = 4 * std::numbers::pi;
  auto f = [](double x) { return std::exp(x) * std::sin(3 * x) + 0.2; };
  double prev = 0.0;
  for (double p : {1.0, 1.5, 2.0, 4.0, 8.0, kInfiniteExponent}) {
    const double v = zonal_lp_norm(f, p, q) / (std::isinf(p) ? 1.0 : std::pow(area, 1.0 / p));
    CHECK(v >= prev * (1 - 1e-12));
    prev = v;
  }
}

TEST_CASE("sup on interval refines the grid maximum") {
  const auto r = sup_on_interval([](double t) { return std::sin(t); }, 0.0, 3.0, 7);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.argmax == doctest::Approx(std::numbers::pi / 2).epsilon(1e-5));
}
