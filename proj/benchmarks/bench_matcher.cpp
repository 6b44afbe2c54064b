#include <benchmark/benchmark.h>

#include <random>

#include "sipseq/config.hpp"
#include "sipseq/matcher.hpp"

using namespace sipseq;

namespace {

std::vector<Code> random_codes(std::size_t n) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  std::vector<Code> out(n);
  for (auto& c : out) c = kAllCodes[pick(rng)];
  return out;
}

// Library of every code list up to `len` codes.
std::shared_ptr<const SequenceLibrary> dense_library(std::size_t len) {
  std::vector<UserDefinedSequence> uds;
  std::vector<std::vector<Code>> layer{{}};
  for (std::size_t l = 1; l <= len; ++l) {
    std::vector<std::vector<Code>> next;
    for (const auto& p : layer) {
      for (Code c : kAllCodes) {
        next.push_back(p);
        next.back().push_back(c);
        uds.push_back({"U" + std::to_string(uds.size()), next.back(),
                       kAllModes[uds.size() % kAllModes.size()]});
      }
    }
    layer = std::move(next);
  }
  return std::make_shared<const SequenceLibrary>(uds);
}

void push_stream(benchmark::State& state, std::shared_ptr<const SequenceLibrary> lib) {
  const auto codes = random_codes(4096);
  SequenceMatcher m(std::move(lib));
  Millis t = 0;
  std::size_t i = 0;
  for (auto _ : state) {
    t += 100;
    benchmark::DoNotOptimize(m.push(codes[i++ & 4095], t));
  }
  state.SetItemsProcessed(state.iterations());
}

}  // namespace

static void BM_MatcherPushDefault(benchmark::State& state) { push_stream(state, default_library()); }
BENCHMARK(BM_MatcherPushDefault);

static void BM_MatcherPushDense(benchmark::State& state) {
  push_stream(state, dense_library(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_MatcherPushDense)->Arg(2)->Arg(4)->Arg(6);

static void BM_MatcherTickIdle(benchmark::State& state) {
  SequenceMatcher m(default_library());
  Millis t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(m.tick(t += 10));
}
BENCHMARK(BM_MatcherTickIdle);

static void BM_LibraryBuild(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dense_library(4));
}
BENCHMARK(BM_LibraryBuild);
