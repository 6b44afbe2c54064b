#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sipseq/library.hpp"
#include "sipseq/matcher.hpp"
#include "sipseq/modes.hpp"
#include "sipseq/signal.hpp"
#include "sipseq/types.hpp"

namespace sipseq {

inline constexpr Millis kDefaultIdleTimeoutMs = 3000;
inline constexpr Millis kDefaultScrollPeriodMs = 2000;

struct DeviceCommand {
  std::optional<ControlMode> mode;
  int direction = 0;  // +1 puff, -1 sip, 0 still
  bool momentary_fire = false;

  bool operator==(const DeviceCommand&) const = default;
};

enum class Phase { kDetection, kCommand };

std::string_view phase_name(Phase phase);

struct ControllerState {
  Phase phase = Phase::kDetection;
  std::optional<ControlMode> active_mode;
  Millis last_activity_t = 0;
  Millis t_idle_ms = kDefaultIdleTimeoutMs;

  bool operator==(const ControllerState&) const = default;
};

/// Command-phase behaviour shared by both interfaces: the held level drives
/// the active axis, momentary modes fire once on the first puff peak, and
/// `t_idle_ms` without any input ends the phase.
class CommandDriver {
 public:
  explicit CommandDriver(Millis t_idle_ms = kDefaultIdleTimeoutMs);

  void enter(ControlMode mode, Millis now);

  struct Result {
    DeviceCommand command;
    bool idle_exit = false;
  };
  Result step(LevelState level, std::span<const PeakEvent> events, Millis now);

  bool active() const { return mode_.has_value(); }
  std::optional<ControlMode> mode() const { return mode_; }
  Millis last_activity_t() const { return last_activity_t_; }
  Millis t_idle_ms() const { return t_idle_ms_; }
  Millis idle_remaining(Millis now) const;

  bool operator==(const CommandDriver&) const = default;

 private:
  Millis t_idle_ms_;
  std::optional<ControlMode> mode_;
  Millis last_activity_t_ = 0;
  bool fired_ = false;
};

struct AspStep {
  DeviceCommand command;
  /// Every non-idle matcher outcome produced this step, in order.
  std::vector<MatchOutcome> outcomes;
  std::optional<ControlMode> entered;
  bool exited = false;
};

/// Sequence-matching interface: detection phase feeds peaks into the matcher,
/// a match switches to command phase for the bound mode, inactivity returns
/// to detection.
class AspController {
 public:
  explicit AspController(std::shared_ptr<const SequenceLibrary> library,
                         Millis t_idle_ms = kDefaultIdleTimeoutMs);

  /// `now` must be non-decreasing across calls and not earlier than any
  /// event offset already seen.
  AspStep step(LevelState level, std::span<const PeakEvent> events, Millis now);

  ControllerState state() const;
  Phase phase() const { return driver_.active() ? Phase::kCommand : Phase::kDetection; }
  std::optional<ControlMode> active_mode() const { return driver_.mode(); }
  const SequenceMatcher& matcher() const { return matcher_; }
  const CommandDriver& driver() const { return driver_; }

 private:
  SequenceMatcher matcher_;
  CommandDriver driver_;
};

struct BspStep {
  DeviceCommand command;
  std::optional<ControlMode> entered;
  bool exited = false;
};

/// Auto-scroll baseline: the highlight cycles through all nine modes every
/// `scroll_period_ms`; a puff peak enters the mode highlighted when the peak
/// completes. Scrolling restarts from the first mode after each idle exit.
class BspController {
 public:
  BspController(Millis scroll_period_ms = kDefaultScrollPeriodMs,
                Millis t_idle_ms = kDefaultIdleTimeoutMs, Millis start_t = 0);

  BspStep step(LevelState level, std::span<const PeakEvent> events, Millis now);

  Phase phase() const { return driver_.active() ? Phase::kCommand : Phase::kDetection; }
  std::optional<ControlMode> active_mode() const { return driver_.mode(); }
  std::size_t highlight_index(Millis now) const;
  /// Start time of the highlight window containing `now`.
  Millis highlight_started_at(Millis now) const;
  Millis scroll_period_ms() const { return scroll_period_ms_; }
  const CommandDriver& driver() const { return driver_; }

 private:
  Millis scroll_period_ms_;
  Millis scroll_origin_t_;
  CommandDriver driver_;
};

/// One `t,phase,active_mode,direction,momentary` record; `-` for no mode.
std::string format_step_record(Millis t, Phase phase, const DeviceCommand& command);

}  // namespace sipseq
