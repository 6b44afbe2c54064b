#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "sipseq/config.hpp"
#include "sipseq/pipeline.hpp"
#include "sipseq/task.hpp"

namespace sipseq {

/// What the operator can see on screen when deciding the next sample.
struct UserObservation {
  Millis now = 0;
  Phase phase = Phase::kDetection;
  std::optional<ControlMode> active_mode;
  std::optional<std::size_t> highlight;
  std::optional<Millis> highlight_started_at;
  const ArmState* arm = nullptr;
  std::size_t completed_waypoints = 0;
};

/// Scripted operator that completes a task through either interface.
///
/// From the next unmet waypoint it derives one goal at a time (save or return
/// to a revisited pose, one axis delta, or a gripper action), selects the
/// goal's mode, then holds puff or sip until the axis is within a quarter of
/// the waypoint tolerance. With the sequence interface it types the bound
/// sequence; with the scrolling baseline it waits for the highlight and may
/// let it pass with `miss_probability`. Reaction delays are drawn from a
/// truncated normal. All randomness comes from the seed.
class VirtualUser {
 public:
  VirtualUser(TaskSpec task, InterfaceKind kind, const VirtualUserModel& model,
              const EngineConfig& config, std::uint64_t seed);

  /// Voltage of the sample at `obs.now`.
  double voltage(const UserObservation& obs);

  /// Selections that did not land in the wanted mode.
  int wrong_selections() const { return wrong_selections_; }
  int missed_highlights() const { return missed_highlights_; }

 private:
  struct Goal {
    ControlMode mode;
    double target = 0.0;
    double threshold = 0.0;
  };
  struct Pulse {
    Millis start;
    Millis end;
    Direction direction;
  };
  enum class Stage {
    kPlan,
    kWaitDetection,
    kWatchHighlight,
    kSelecting,
    kAwaitMode,
    kPreAct,
    kActing,
    kMomentary,
    kAwaitGoto,
  };

  std::optional<Goal> next_goal(const UserObservation& obs) const;
  bool revisited_later(std::size_t index) const;
  Millis reaction_start(Millis now);
  void schedule(Millis start, const std::vector<Code>& codes);
  double script_voltage(Millis now) const;
  double axis_value(const ArmState& arm, ControlMode mode) const;

  TaskSpec task_;
  InterfaceKind kind_;
  VirtualUserModel model_;
  EngineConfig config_;
  std::mt19937_64 rng_;
  double puff_v_;
  double sip_v_;
  double neutral_v_;

  Stage stage_ = Stage::kPlan;
  std::optional<Goal> goal_;
  std::vector<Pulse> script_;
  Millis script_end_ = 0;
  Millis await_since_ = 0;
  Millis act_at_ = 0;
  std::optional<Millis> considered_highlight_;
  int wrong_selections_ = 0;
  int missed_highlights_ = 0;
};

struct SimulationLimits {
  Millis max_session_ms = 20 * 60 * 1000;
};

/// Runs one seeded virtual-user session to task completion. Throws
/// SimulationError if the task is not done within `limits.max_session_ms`
/// of simulated time.
SessionMetrics simulate_session(const TaskSpec& task, InterfaceKind kind,
                                const VirtualUserModel& user, const EngineConfig& config,
                                std::uint64_t seed, const SimulationLimits& limits = {});

}  // namespace sipseq
