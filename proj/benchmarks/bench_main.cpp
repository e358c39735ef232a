#include <random>

#include <benchmark/benchmark.h>

#include "heckelab/eigenforms.hpp"
#include "heckelab/hecke_algebra.hpp"
#include "heckelab/modular.hpp"
#include "heckelab/power_series.hpp"
#include "heckelab/rho2.hpp"
#include "heckelab/sato_tate.hpp"
#include "heckelab/sums.hpp"

using namespace heckelab;

namespace {

std::vector<mpz_class> random_coeffs(std::size_t n, int bits, std::uint64_t seed) {
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(seed);
  std::vector<mpz_class> v(n);
  for (auto& x : v) x = rng.get_z_bits(bits) - (mpz_class(1) << (bits - 1));
  return v;
}

void BM_MultiplyKronecker(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_coeffs(n, 256, 1), b = random_coeffs(n, 256, 2);
  for (auto _ : state) benchmark::DoNotOptimize(detail::multiply_kronecker(a, b, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MultiplyKronecker)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_MultiplySchoolbook(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_coeffs(n, 256, 1), b = random_coeffs(n, 256, 2);
  for (auto _ : state) benchmark::DoNotOptimize(detail::multiply_schoolbook(a, b, n));
}
BENCHMARK(BM_MultiplySchoolbook)->RangeMultiplier(4)->Range(256, 1024);

void BM_DeltaExpansion(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(delta_expansion(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_DeltaExpansion)->Arg(1001)->Arg(10'001)->Unit(benchmark::kMillisecond);

void BM_Eigenforms(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(eigenforms(static_cast<int>(state.range(0)), 10'000));
}
BENCHMARK(BM_Eigenforms)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_FriableTau(benchmark::State& state) {
  const double x = 1e6, y = std::pow(x, 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(friable_sum(x, y, FriableWeight::tau()));
}
BENCHMARK(BM_FriableTau)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_Rho2Table(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Rho2Table::build(10, 1e-4));
}
BENCHMARK(BM_Rho2Table)->Unit(benchmark::kMillisecond);

void BM_MonteCarloMoment(benchmark::State& state) {
  MonteCarloOptions o;
  o.samples = 100'000;
  o.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mc_moment(static_cast<double>(state.range(0)), 2, o));
  state.SetItemsProcessed(state.iterations() * o.samples);
}
BENCHMARK(BM_MonteCarloMoment)->Arg(12)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ExactMoment(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exact_moment(state.range(0), 2));
}
BENCHMARK(BM_ExactMoment)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_BranchingCoeff(benchmark::State& state) {
  const std::vector<std::int64_t> tuple{12, 18, 20, 30};
  for (auto _ : state) benchmark::DoNotOptimize(branching_coeff(tuple, 6));
}
BENCHMARK(BM_BranchingCoeff);

}  // namespace

BENCHMARK_MAIN();
