#include <doctest.h>

#include <filesystem>
#include <numeric>

#include "sipseq/config.hpp"
#include "sipseq/errors.hpp"
#include "sipseq/virtual_user.hpp"

using namespace sipseq;

namespace {

const std::filesystem::path kTasks = std::filesystem::path(SIPSEQ_DATA_DIR) / "tasks";

}  // namespace

TEST_CASE("both interfaces finish every shipped task") {
  const auto config = default_config();
  for (const char* id : {"task1_jar", "task2_spoon", "task3_bottle"}) {
    const auto task = load_task_by_id(kTasks, id);
    for (auto kind : {InterfaceKind::kAsp, InterfaceKind::kBsp}) {
      const auto m = simulate_session(task, kind, config.user, config, 1);
      CHECK(m.completion_ms > 0);
      CHECK(m.moving_ms > 0);
      CHECK(m.moving_ms <= m.completion_ms);
      CHECK(m.wasted_ms == m.completion_ms - m.moving_ms);
      CHECK(m.mode_selection_count > 0);
    }
  }
}

TEST_CASE("property: sessions are pure functions of their seed") {
  const auto config = default_config();
  const auto task = load_task_by_id(kTasks, "task1_jar");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (auto kind : {InterfaceKind::kAsp, InterfaceKind::kBsp}) {
      CHECK(simulate_session(task, kind, config.user, config, seed) ==
            simulate_session(task, kind, config.user, config, seed));
    }
  }
}

TEST_CASE("the session guard aborts a task that cannot finish") {
  const auto config = default_config();
  TaskSpec unreachable{"far", "", {Waypoint{Pose{{0.0, 0.3, 3.0}, {}}, GripAction::kNone}}};
  CHECK_THROWS_AS(simulate_session(unreachable, InterfaceKind::kAsp, config.user, config, 1,
                                   SimulationLimits{60 * 1000}),
                  SimulationError);
}

TEST_CASE("property: a slower scroll never makes the baseline faster on average") {
  const auto task = load_task_by_id(kTasks, "task1_jar");
  double previous = 0.0;
  for (Millis period : {1000, 2000, 3000}) {
    auto config = default_config();
    config.timers.scroll_period_ms = period;
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      total += static_cast<double>(
          simulate_session(task, InterfaceKind::kBsp, config.user, config, seed).completion_ms);
    }
    const double mean = total / 10.0;
    CHECK(mean >= previous);
    previous = mean;
  }
}

TEST_CASE("virtual user timings must map onto the detector classes") {
  const DetectorConfig detector;
  VirtualUserModel m;
  m.long_peak_ms = 350;
  CHECK_THROWS_AS(m.validate(detector), ConfigError);
  VirtualUserModel n;
  n.miss_probability = 1.0;
  CHECK_THROWS_AS(n.validate(detector), ConfigError);
}
