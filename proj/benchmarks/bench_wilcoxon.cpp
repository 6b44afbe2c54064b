#include <benchmark/benchmark.h>

#include <random>

#include "sipseq/wilcoxon.hpp"

using namespace sipseq;

static void BM_WilcoxonExact(benchmark::State& state) {
  std::mt19937 rng(3);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<std::pair<double, double>> pairs(static_cast<std::size_t>(state.range(0)));
  for (auto& [a, b] : pairs) {
    a = d(rng);
    b = d(rng) + 0.3;
  }
  for (auto _ : state) benchmark::DoNotOptimize(wilcoxon_signed_rank(pairs, Alternative::kLess));
}
BENCHMARK(BM_WilcoxonExact)->Arg(8)->Arg(20)->Arg(30)->Arg(60);
