#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "glmmp/kernels.hpp"
#include "glmmp/matrix.hpp"

namespace {

using glmmp::Matrix;

Matrix random_matrix(std::size_t n) {
  Matrix a(n, n);
  glmmp::kernels::fill_gaussian(a, 1.0 / std::sqrt(static_cast<double>(n)), 7);
  return a;
}

template <bool Parallel>
void BM_Matvec(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n);
  std::vector<double> x(n, 1.0), y(n);
  for (auto _ : state) {
    if constexpr (Parallel) glmmp::kernels::matvec(a, x, y);
    else glmmp::kernels::serial::matvec(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(n * n * sizeof(double)));
}

template <bool Parallel>
void BM_MatvecTransposed(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n);
  std::vector<double> x(n, 1.0), y(n);
  for (auto _ : state) {
    if constexpr (Parallel) glmmp::kernels::matvec_transposed(a, x, y);
    else glmmp::kernels::serial::matvec_transposed(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(n * n * sizeof(double)));
}

template <bool Parallel>
void BM_FillGaussian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Matrix a(n, n);
  for (auto _ : state) {
    if constexpr (Parallel) glmmp::kernels::fill_gaussian(a, 1.0, 3);
    else glmmp::kernels::serial::fill_gaussian(a, 1.0, 3);
    benchmark::DoNotOptimize(a.data());
  }
}

} // namespace

BENCHMARK(BM_Matvec<false>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_Matvec<true>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_MatvecTransposed<false>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_MatvecTransposed<true>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_FillGaussian<false>)->Arg(1000);
BENCHMARK(BM_FillGaussian<true>)->Arg(1000);

BENCHMARK_MAIN();
