#include "hcr/density.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

hcr::Matrix
uniform_points(Eigen::Index n, int dim, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  hcr::Matrix out(n, dim);
  for (Eigen::Index r = 0; r < n; ++r)
    for (int c = 0; c < dim; ++c)
      out(r, c) = unit(rng);
  return out;
}

void
estimate_with(benchmark::State& state, hcr::Summation mode)
{
  const int dim = static_cast<int>(state.range(0));
  const int degree = static_cast<int>(state.range(1));
  const hcr::Matrix sample = uniform_points(6467, dim, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(hcr::estimate(sample, { dim, degree }, { mode }));
  state.SetItemsProcessed(state.iterations() * sample.rows());
}

} // namespace

static void
BM_EstimateSequential(benchmark::State& state)
{
  estimate_with(state, hcr::Summation::sequential);
}
BENCHMARK(BM_EstimateSequential)->Args({ 2, 9 })->Args({ 4, 6 })->Unit(benchmark::kMillisecond);

static void
BM_EstimateBlocked(benchmark::State& state)
{
  estimate_with(state, hcr::Summation::blocked);
}
BENCHMARK(BM_EstimateBlocked)->Args({ 2, 9 })->Args({ 4, 6 })->Args({ 6, 9 })->Unit(benchmark::kMillisecond);

static void
BM_EvaluateMany(benchmark::State& state)
{
  const int dim = static_cast<int>(state.range(0));
  const int degree = static_cast<int>(state.range(1));
  const auto coeffs = hcr::estimate(uniform_points(6467, dim, 2), { dim, degree },
                                    { hcr::Summation::blocked });
  const hcr::Matrix points = uniform_points(1617, dim, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(hcr::evaluate_many(coeffs, points));
  state.SetItemsProcessed(state.iterations() * points.rows());
}
BENCHMARK(BM_EvaluateMany)->Args({ 2, 9 })->Args({ 6, 9 })->Unit(benchmark::kMillisecond);
