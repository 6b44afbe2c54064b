#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "sipseq/arm.hpp"
#include "sipseq/config.hpp"
#include "sipseq/controller.hpp"
#include "sipseq/metrics.hpp"
#include "sipseq/signal.hpp"
#include "sipseq/task.hpp"

namespace sipseq {

enum class InterfaceKind { kAsp, kBsp };

std::string_view interface_name(InterfaceKind kind);
std::optional<InterfaceKind> parse_interface(std::string_view name);

/// What happened during one pipeline step.
struct StepReport {
  Millis t = 0;
  std::optional<PeakEvent> event;
  LevelState level = LevelState::kNeutral;
  DeviceCommand command;
  std::vector<MatchOutcome> outcomes;  // ASP only
  std::optional<ControlMode> entered;
  bool exited = false;
  bool moving = false;
};

/// One live session: detector -> controller (ASP or BSP) -> arm -> task.
///
/// Each step covers the interval since the previous step; the command decided
/// at the step drives the arm over that interval. Metrics stop accumulating
/// once the task (if any) is done.
class SessionPipeline {
 public:
  SessionPipeline(const EngineConfig& config, InterfaceKind kind,
                  std::optional<TaskSpec> task = std::nullopt, Millis start_t = 0);

  /// Feeds a sample, then advances the controller and arm to `s.t`.
  /// Throws InputError (pipeline unchanged) if `s.t` is not after the last
  /// step.
  StepReport step(Sample s);

  /// Advances time without a new sample; the detector keeps its level.
  StepReport advance(Millis now);

  /// Closes any open peak at `now` and advances to it.
  StepReport finish(Millis now);

  InterfaceKind kind() const { return kind_; }
  Phase phase() const;
  std::optional<ControlMode> active_mode() const;
  /// Highlighted mode index while the baseline interface is scrolling.
  std::optional<std::size_t> highlight_index() const;
  std::optional<Millis> highlight_started_at() const;
  /// Current sequence, candidates and deadline (ASP only; empty for BSP).
  const SequenceMatcher* matcher() const;
  Millis idle_remaining() const;

  const PeakDetector& detector() const { return detector_; }
  const ArmState& arm() const { return arm_; }
  const TaskTracker* tracker() const { return tracker_ ? &*tracker_ : nullptr; }
  bool task_done() const { return tracker_ && tracker_->done(); }
  const EngineConfig& config() const { return config_; }
  Millis now() const { return now_; }
  Millis start_t() const { return start_t_; }

  /// `extra_resets` is added to the reset count (e.g. operator mistakes the
  /// engine cannot see).
  SessionMetrics metrics(int extra_resets = 0) const;

 private:
  StepReport run(Millis now, std::optional<PeakEvent> event);

  EngineConfig config_;
  InterfaceKind kind_;
  PeakDetector detector_;
  std::variant<AspController, BspController> controller_;
  ArmState arm_;
  std::optional<TaskTracker> tracker_;
  Millis start_t_;
  Millis now_;
  std::optional<Millis> done_t_;
  Millis moving_ms_ = 0;
  int selections_ = 0;
  int resets_ = 0;
};

}  // namespace sipseq
