#include <benchmark/benchmark.h>

#include "specheck/eigh.hpp"
#include "specheck/inequalities.hpp"
#include "specheck/pencil.hpp"
#include "specheck/random.hpp"

using namespace specheck;

namespace {

void BM_eigh(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SplitRng rng(1);
  const HermitianMatrix h = random_hermitian(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigh(h));
  }
}
BENCHMARK(BM_eigh)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_singular_values(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SplitRng rng(2);
  const MatrixC x = random_complex_gaussian(n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(singular_values(x));
  }
}
BENCHMARK(BM_singular_values)->Arg(4)->Arg(8)->Arg(16);

void BM_zhan_check(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PsdMatrix a = random_psd(n, {.lo = 0.0, .hi = 2.0}, 3);
  const PsdMatrix b = random_psd(n, {.lo = 0.0, .hi = 2.0}, 4);
  const InequalityCase c(a, b, 0.5, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(zhan_singular_value_check(c));
  }
}
BENCHMARK(BM_zhan_check)->Arg(2)->Arg(4)->Arg(8);

void BM_track_branches(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SplitRng rng(5);
  const HermitianPencil p{random_hermitian(n, rng), random_hermitian(n, rng)};
  std::vector<double> grid(101);
  for (int k = 0; k <= 100; ++k) grid[k] = -1.9 + 3.9 * k / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(track_branches(p, grid, 0.0));
  }
}
BENCHMARK(BM_track_branches)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
