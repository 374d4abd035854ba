#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "superres/detect.hpp"
#include "superres/locate.hpp"
#include "superres/model.hpp"
#include "superres/rng.hpp"

using namespace superres;

namespace {

std::vector<cplx> random_points(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<cplx> pts(n);
  for (auto& p : pts)
    p = cplx{2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0};
  return pts;
}

Measurement two_source_measurement(double d, double sigma, int count) {
  const TwoPointSource src = TwoPointSource::canonical(1.0, 3.0, 0.7, d, 1.0);
  return synthesize(src, MeasurementSpec(1.0, count), sample_noise(sigma, count, 42));
}

}  // namespace

static void SmallestEnclosingCircle(benchmark::State& state) {
  const auto pts = random_points(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smallest_enclosing_circle(pts));
  }
}
BENCHMARK(SmallestEnclosingCircle)->Arg(10)->Arg(100)->Arg(1000);

static void L0FeasibilityScan(benchmark::State& state) {
  const Measurement y = two_source_measurement(0.3, 1e-2, 10);
  const auto grid = default_l0_grid(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(l0_one_point_feasible(y, 1e-2, grid));
  }
}
BENCHMARK(L0FeasibilityScan)->Arg(256)->Arg(1024);

static void SvtVerdict(benchmark::State& state) {
  const Measurement y = two_source_measurement(0.3, 1e-2, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(svt_detect(y, 1e-2));
  }
}
BENCHMARK(SvtVerdict);

static void EspritEstimate(benchmark::State& state) {
  const Measurement y = two_source_measurement(0.5, 1e-3, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(esprit_estimate(y));
  }
}
BENCHMARK(EspritEstimate);

static void MusicEstimate(benchmark::State& state) {
  const Measurement y = two_source_measurement(0.5, 1e-3, 10);
  const auto grid = cluster_window_grid(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(music_estimate(y, 2, grid));
  }
}
BENCHMARK(MusicEstimate)->Arg(512)->Arg(2048);

static void MlEstimate(benchmark::State& state) {
  const Measurement y = two_source_measurement(0.5, 1e-3, 10);
  const auto grid = cluster_window_grid(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ml_estimate(y, grid));
  }
}
BENCHMARK(MlEstimate)->Arg(128)->Arg(512);

static void BpdnSolve(benchmark::State& state) {
  const Measurement y = two_source_measurement(1.0, 1e-3, 10);
  const auto grid = cluster_window_grid(1.0, static_cast<int>(state.range(0)));
  BpdnOptions opts;
  opts.max_iter = 500;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bpdn_solve(y, grid, 1e-3 * std::sqrt(10.0), opts));
  }
}
BENCHMARK(BpdnSolve)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
