#include <benchmark/benchmark.h>

#include "odi/harness.hpp"
#include "odi/metrics.hpp"

#include <random>

using namespace odi;

namespace {

void reach_dahlquist(benchmark::State& state, Scheme scheme, Execution exec) {
  const Problem p = dahlquist();
  const double h = 1.0 / static_cast<double>(state.range(0));
  const TimeGrid g = TimeGrid::uniform(5.0, h);
  const DiscretizationSchedule s = DiscretizationSchedule::quadratic(g);
  StepOptions opts;
  opts.execution = exec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reach(p, make_vec({5.0}), g, s, scheme, opts));
  }
}

void reach_par_serial(benchmark::State& s) { reach_dahlquist(s, Scheme::parameterized, Execution::serial); }
void reach_par_omp(benchmark::State& s) { reach_dahlquist(s, Scheme::parameterized, Execution::parallel); }
void reach_split_serial(benchmark::State& s) { reach_dahlquist(s, Scheme::split, Execution::serial); }
void reach_split_omp(benchmark::State& s) { reach_dahlquist(s, Scheme::split, Execution::parallel); }

PointCloud cloud(std::size_t n, int d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointCloud out(n, Vec(d));
  for (Vec& v : out) {
    for (int i = 0; i < d; ++i) v[i] = u(rng);
  }
  return out;
}

void hausdorff_pruned(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud a = cloud(n, 2, 1);
  const PointCloud b = cloud(n, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(dist_hausdorff(a, b));
  state.SetComplexityN(state.range(0));
}

void hausdorff_brute(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PointCloud a = cloud(n, 2, 1);
  const PointCloud b = cloud(n, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::dist_hausdorff(a, b));
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(reach_par_serial)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(reach_par_omp)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(reach_split_serial)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(reach_split_omp)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(hausdorff_pruned)->RangeMultiplier(4)->Range(256, 16384)->Complexity();
BENCHMARK(hausdorff_brute)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

BENCHMARK_MAIN();
