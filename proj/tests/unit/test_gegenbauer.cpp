#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sphsemi/error.hpp"
#include "sphsemi/gegenbauer.hpp"
#include "sphsemi/quadrature.hpp"

using namespace sphsemi;

TEST_CASE("gegenbauer values") {
  CHECK(eval_gegenbauer(0, 0.5, 0.3) == 1.0);
  CHECK(eval_gegenbauer(1, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_gegenbauer(2, 1.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(gegenbauer_at_one(0, 0.7) == doctest::Approx(1.0));
  CHECK(gegenbauer_at_one(1, 0.5) == doctest::Approx(1.0));
  CHECK(gegenbauer_at_one(3, 0.5) == doctest::Approx(1.0));
  CHECK(gegenbauer_at_one(2, 1.0) == doctest::Approx(3.0));
}

TEST_CASE("norm constants") {
  CHECK(norm_constant(0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(norm_constant(1, 0.5) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(norm_constant(0, 1.0) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
  // Large degrees stay finite.
  CHECK(std::isfinite(norm_constant(5000, 1.5)));
  CHECK(std::isfinite(log_gegenbauer_at_one(100000, 1.5)));
}

TEST_CASE("invalid index") {
  CHECK_THROWS_AS(eval_gegenbauer(-1, 0.5, 0.0), ParameterError);
  CHECK_THROWS_AS(eval_gegenbauer(2, 0.0, 0.0), ParameterError);
  CHECK_THROWS_AS(gegenbauer_at_one(2, -1.0), ParameterError);
}

TEST_CASE("recurrence matches the explicit sum") {
  for (double nu : {0.25, 0.5, 1.0, 1.5, 2.7}) {
    for (int k = 0; k <= 8; ++k) {
      for (double x : {-1.0, -0.7, -0.1, 0.0, 0.33, 0.9, 1.0}) {
        const double ref = oracle::gegenbauer_explicit(k, nu, x);
        CHECK(std::abs(eval_gegenbauer(k, nu, x) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}

TEST_CASE("batch evaluation agrees with single") {
  const auto all = eval_gegenbauer_all(40, 1.5, 0.41);
  for (int k = 0; k <= 40; ++k) CHECK(all[k] == doctest::Approx(eval_gegenbauer(k, 1.5, 0.41)).epsilon(1e-13));
}

TEST_CASE("generating function") {
  for (double nu : {0.5, 1.0, 1.5}) {
    for (double r : {-0.5, 0.2, 0.5}) {
      for (double x : {-0.8, 0.1, 0.95}) {
        const int n = 80;
        const auto p = eval_gegenbauer_all(n, nu, x);
        double s = 0.0;
        for (int k = n; k >= 0; --k) s = s * r + p[k];
        const double exact = std::pow(1.0 - 2.0 * x * r + r * r, -nu);
        // |P_k(x)| <= P_k(1) and the tail of (1 - |r|)^{-2 nu} beyond n.
        double tail = 0.0;
        for (int k = n + 1; k < 400; ++k) tail += gegenbauer_at_one(k, nu) * std::pow(std::abs(r), k);
        CHECK(std::abs(s - exact) <= tail + 1e-13);
      }
    }
  }
}

TEST_CASE("orthogonality under a Gauss rule") {
  for (double lam : {0.5, 1.0, 1.5}) {
    const int n = 40;
    const auto q = build_theta_quadrature(lam, n + 1);
    for (int k = 0; k <= n; k += 3) {
      for (int j = 0; j <= n; j += 4) {
        const double v = q.integrate([&](double x) { return eval_gegenbauer(k, lam, x) * eval_gegenbauer(j, lam, x); });
        if (k == j) {
          CHECK(v * norm_constant(k, lam) == doctest::Approx(1.0).epsilon(1e-12));
        } else {
          CHECK(std::abs(v) * std::sqrt(norm_constant(k, lam) * norm_constant(j, lam)) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("growth is bounded by P_k(1)") {
  for (double lam : {0.5, 1.0, 1.5}) {
    for (int k : {16, 64, 256}) {
      double mx = 0.0;
      for (int i = 0; i <= 2000; ++i) mx = std::max(mx, std::abs(eval_gegenbauer(k, lam, std::cos(std::numbers::pi * i / 2000))));
      CHECK(mx <= gegenbauer_at_one(k, lam) * (1 + 1e-12));
    }
  }
}

TEST_CASE("ratio deficits are accurate at small angles") {
  for (double nu : {0.5, 1.0, 1.5}) {
    for (double theta : {1e-6, 1e-3, 0.3, 2.0}) {
      const auto d = gegenbauer_ratio_deficits(30, nu, theta);
      const auto r = gegenbauer_ratios(30, nu, theta);
      for (int k = 0; k <= 30; ++k) {
        // Long-double direct evaluation as reference; only trustworthy when
        // the deficit is not tiny.
        long double pk = 1.0L;
        long double pkm = 0.0L;
        const long double x = std::cos(static_cast<long double>(theta));
        long double p1 = 1.0L;
        long double p1m = 0.0L;
        for (int i = 1; i <= k; ++i) {
          const long double next = (2.0L * (i + nu - 1) * x * pk - (i + 2.0L * nu - 2) * pkm) / i;
          pkm = pk;
          pk = next;
          const long double n1 = (2.0L * (i + nu - 1) * p1 - (i + 2.0L * nu - 2) * p1m) / i;
          p1m = p1;
          p1 = n1;
        }
        const double ref = static_cast<double>(1.0L - pk / p1);
        CHECK(r[k] == doctest::Approx(1.0 - d[k]).epsilon(1e-14));
        if (theta >= 1e-3 && k > 0) CHECK(d[k] == doctest::Approx(ref).epsilon(1e-9));
        // Leading term k(k + 2 nu) theta^2 / (2 (2 nu + 1)).
        if (theta == 1e-6 && k > 0) {
          CHECK(d[k] == doctest::Approx(k * (k + 2 * nu) * theta * theta / (2 * (2 * nu + 1))).epsilon(1e-8));
        }
      }
    }
  }
}
