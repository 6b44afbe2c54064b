#include <benchmark/benchmark.h>

#include <array>
#include <random>

#include "sipseq/signal.hpp"

using namespace sipseq;

static void BM_DetectorFeed(benchmark::State& state) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> hold(3, 80);
  std::uniform_int_distribution<int> level(0, 2);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> volts;
  while (volts.size() < 100000) {
    const double v = std::array{1.0, 2.5, 4.0}[static_cast<std::size_t>(level(rng))];
    for (int n = hold(rng); n > 0; --n) volts.push_back(v + noise(rng));
  }
  PeakDetector det;
  Millis t = 0;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(det.feed({t, volts[i]}));
    t += 10;
    i = i + 1 == volts.size() ? 0 : i + 1;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DetectorFeed);
