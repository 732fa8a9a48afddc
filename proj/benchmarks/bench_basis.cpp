#include "hcr/basis.hpp"

#include <benchmark/benchmark.h>

#include <vector>

static void
BM_Poly1dAll(benchmark::State& state)
{
  const int m = static_cast<int>(state.range(0));
  std::vector<double> out(static_cast<std::size_t>(m + 1));
  double x = 0.123;
  for (auto _ : state) {
    hcr::poly_1d_all(m, x, out);
    benchmark::DoNotOptimize(out.data());
    x = x < 0.9 ? x + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_Poly1dAll)->Arg(4)->Arg(9)->Arg(12);
BENCHMARK_MAIN();
