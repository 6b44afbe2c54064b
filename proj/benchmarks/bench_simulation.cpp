#include <benchmark/benchmark.h>

#include <filesystem>

#include "sipseq/config.hpp"
#include "sipseq/task.hpp"
#include "sipseq/virtual_user.hpp"

using namespace sipseq;

static void BM_SimulateSession(benchmark::State& state) {
  const auto config = default_config();
  const auto task = load_task_by_id(std::filesystem::path(SIPSEQ_DATA_DIR) / "tasks", "task1_jar");
  const auto kind = state.range(0) == 0 ? InterfaceKind::kAsp : InterfaceKind::kBsp;
  std::uint64_t seed = 1;
  Millis simulated = 0;
  for (auto _ : state) {
    const auto m = simulate_session(task, kind, config.user, config, seed++);
    simulated += m.completion_ms;
  }
  state.counters["sim_s_per_s"] =
      benchmark::Counter(static_cast<double>(simulated) / 1000.0, benchmark::Counter::kIsRate);
  state.SetLabel(state.range(0) == 0 ? "asp" : "bsp");
}
BENCHMARK(BM_SimulateSession)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
