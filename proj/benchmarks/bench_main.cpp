#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "sphsemi/gegenbauer.hpp"
#include "sphsemi/kernels.hpp"
#include "sphsemi/laplace_series.hpp"
#include "sphsemi/multiplier_ops.hpp"
#include "sphsemi/quadrature.hpp"
#include "sphsemi/smoothness.hpp"

using namespace sphsemi;

namespace {

LaplaceCoefficients random_zonal_coeffs(int n) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto f = LaplaceCoefficients::zonal(0.5, n);
  for (auto& v : f.values) v = u(gen);
  return f;
}

}  // namespace

static void BM_GegenbauerSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eval_gegenbauer_all(n, 1.5, 0.3));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GegenbauerSweep)->Arg(64)->Arg(1024)->Arg(16384);

static void BM_GaussRule(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_theta_quadrature(1.0, n));
}
BENCHMARK(BM_GaussRule)->Arg(32)->Arg(128)->Arg(512);

static void BM_SemigroupTable(benchmark::State& state) {
  const auto m = weierstrass_multiplier(0.5, 0.1, 0.5);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m.table(n));
}
BENCHMARK(BM_SemigroupTable)->Arg(64)->Arg(4096);

static void BM_KernelSynthesis(benchmark::State& state) {
  const auto m = abel_poisson_multiplier(1.0, 1.0 / static_cast<double>(state.range(0)));
  const auto grid = uniform_theta_grid(1024);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_kernel(m, {}, grid));
}
BENCHMARK(BM_KernelSynthesis)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_SphereTransform(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  const auto grid = build_sphere_grid(b);
  auto f = LaplaceCoefficients::sphere(b);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 / (1.0 + i);
  for (auto _ : state) {
    const auto samples = synth_s2(f, grid);
    benchmark::DoNotOptimize(analyze_s2_samples(samples, b, grid));
  }
}
BENCHMARK(BM_SphereTransform)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Modulus(benchmark::State& state) {
  const auto f = random_zonal_coeffs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(modulus(f, 1.0, 0.1));
}
BENCHMARK(BM_Modulus)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_KFunctional(benchmark::State& state) {
  const auto f = random_zonal_coeffs(static_cast<int>(state.range(0)));
  const auto a = generator_multiplier(RegularPolynomial::laplace_beltrami(0.5), 1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kfunctional_l2_exact(f, a, 1e-3));
}
BENCHMARK(BM_KFunctional)->Arg(16)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
