// OpenMP kernels against their serial references.
//
//   ./kernels_bench --benchmark_filter=gradient
//   OMP_NUM_THREADS=8 ./kernels_bench

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "otmatch/kernels.hpp"
#include "otmatch/lap.hpp"
#include "otmatch/sinkhorn.hpp"

using namespace otmatch;
namespace k = otmatch::kernels;

namespace {

SquareMatrix random_matrix(std::size_t n, std::uint64_t seed, double density = 1.0) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SquareMatrix m(n);
  for (double& x : m.values()) x = u(g) < density ? u(g) : 0.0;
  return m;
}

void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 1), b = random_matrix(n, 2);
  SquareMatrix c;
  for (auto _ : state) {
    k::gemm(a, k::Trans::kNo, b, k::Trans::kYes, 1.0, 0.0, c);
    benchmark::DoNotOptimize(c.data());
  }
}

void BM_GemmSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 1), b = random_matrix(n, 2);
  SquareMatrix c;
  for (auto _ : state) {
    k::serial::gemm(a, k::Trans::kNo, b, k::Trans::kYes, 1.0, 0.0, c);
    benchmark::DoNotOptimize(c.data());
  }
}

// Sparse adjacency against a dense iterate, as in the matcher.
void BM_Gradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 3, 0.05), b = random_matrix(n, 4, 0.05);
  const auto p = random_matrix(n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(k::quadratic_gradient(a, b, p, false));
}

void BM_GradientSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 3, 0.05), b = random_matrix(n, 4, 0.05);
  const auto p = random_matrix(n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(k::serial::quadratic_gradient(a, b, p));
}

void BM_MatvecTransposed(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = random_matrix(n, 6);
  std::vector<double> x(n, 1.0), y(n);
  for (auto _ : state) {
    k::matvec_transposed(m, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_MatvecTransposedSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = random_matrix(n, 6);
  std::vector<double> x(n, 1.0), y(n);
  for (auto _ : state) {
    k::serial::matvec_transposed(m, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_Lot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto m = random_matrix(n, 7);
  for (double& x : m.values()) x = 100.0 + 50.0 * x;
  for (auto _ : state) benchmark::DoNotOptimize(lot(m, Sense::kMinimize));
}

void BM_Lap(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto m = random_matrix(n, 7);
  for (double& x : m.values()) x = 100.0 + 50.0 * x;
  for (auto _ : state) benchmark::DoNotOptimize(solve_lap(m, Sense::kMinimize));
}

}  // namespace

BENCHMARK(BM_Gemm)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GemmSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gradient)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatvecTransposed)->Arg(1000)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatvecTransposedSerial)->Arg(1000)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Lot)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lap)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
