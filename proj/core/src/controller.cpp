#include "sipseq/controller.hpp"

#include <algorithm>

#include "sipseq/errors.hpp"

namespace sipseq {

std::string_view phase_name(Phase phase) {
  return phase == Phase::kDetection ? "detection" : "command";
}

// CommandDriver ---------------------------------------------------------------

CommandDriver::CommandDriver(Millis t_idle_ms) : t_idle_ms_(t_idle_ms) {
  if (t_idle_ms_ <= 0) throw ConfigError("t_idle_ms must be positive");
}

void CommandDriver::enter(ControlMode mode, Millis now) {
  mode_ = mode;
  last_activity_t_ = now;
  fired_ = false;
}

CommandDriver::Result CommandDriver::step(LevelState level, std::span<const PeakEvent> events,
                                          Millis now) {
  Result result;
  if (!mode_) return result;

  if (level != LevelState::kNeutral || !events.empty()) last_activity_t_ = now;
  if (now - last_activity_t_ >= t_idle_ms_) {
    mode_.reset();
    result.idle_exit = true;
    return result;
  }

  result.command.mode = mode_;
  if (is_momentary(*mode_)) {
    if (!fired_) {
      const bool puffed = std::any_of(events.begin(), events.end(), [](const PeakEvent& e) {
        return e.direction() == Direction::kPuff;
      });
      if (puffed) {
        fired_ = true;
        result.command.momentary_fire = true;
      }
    }
    return result;
  }

  switch (level) {
    case LevelState::kPuffActive: result.command.direction = +1; break;
    case LevelState::kSipActive: result.command.direction = -1; break;
    case LevelState::kNeutral: break;
  }
  return result;
}

Millis CommandDriver::idle_remaining(Millis now) const {
  if (!mode_) return 0;
  return std::max<Millis>(0, last_activity_t_ + t_idle_ms_ - now);
}

// AspController ---------------------------------------------------------------

AspController::AspController(std::shared_ptr<const SequenceLibrary> library, Millis t_idle_ms)
    : matcher_(std::move(library)), driver_(t_idle_ms) {}

ControllerState AspController::state() const {
  return {phase(), driver_.mode(), driver_.last_activity_t(), driver_.t_idle_ms()};
}

AspStep AspController::step(LevelState level, std::span<const PeakEvent> events, Millis now) {
  AspStep out;
  if (driver_.active()) {
    auto r = driver_.step(level, events, now);
    out.command = r.command;
    out.exited = r.idle_exit;
    return out;
  }

  auto record = [&](MatchOutcome outcome) {
    const bool matched = outcome.kind == OutcomeKind::kMatched;
    if (matched) {
      const auto* uds = matcher_.library().find(outcome.matched_id);
      out.entered = uds->mode;
    }
    if (outcome.kind != OutcomeKind::kIdle) out.outcomes.push_back(std::move(outcome));
    return matched;
  };

  for (const PeakEvent& e : events) {
    // A deadline that lapsed before this peak completed resolves first.
    auto timed = matcher_.tick(e.offset_t);
    if (timed.kind == OutcomeKind::kMatched || timed.kind == OutcomeKind::kReset) {
      if (record(std::move(timed))) break;
    }
    if (record(matcher_.push(e.code, e.offset_t))) break;
  }
  if (!out.entered) {
    auto timed = matcher_.tick(now);
    if (timed.kind == OutcomeKind::kMatched || timed.kind == OutcomeKind::kReset) {
      record(std::move(timed));
    }
  }
  if (out.entered) {
    matcher_.reset();
    driver_.enter(*out.entered, now);
  }
  return out;
}

// BspController ---------------------------------------------------------------

BspController::BspController(Millis scroll_period_ms, Millis t_idle_ms, Millis start_t)
    : scroll_period_ms_(scroll_period_ms), scroll_origin_t_(start_t), driver_(t_idle_ms) {
  if (scroll_period_ms_ <= 0) throw ConfigError("scroll_period_ms must be positive");
}

std::size_t BspController::highlight_index(Millis now) const {
  const Millis elapsed = std::max<Millis>(0, now - scroll_origin_t_);
  return static_cast<std::size_t>((elapsed / scroll_period_ms_) % kModeCount);
}

Millis BspController::highlight_started_at(Millis now) const {
  const Millis elapsed = std::max<Millis>(0, now - scroll_origin_t_);
  return scroll_origin_t_ + (elapsed / scroll_period_ms_) * scroll_period_ms_;
}

BspStep BspController::step(LevelState level, std::span<const PeakEvent> events, Millis now) {
  BspStep out;
  if (driver_.active()) {
    auto r = driver_.step(level, events, now);
    out.command = r.command;
    out.exited = r.idle_exit;
    if (r.idle_exit) scroll_origin_t_ = now;
    return out;
  }
  for (const PeakEvent& e : events) {
    if (e.direction() != Direction::kPuff) continue;
    out.entered = kAllModes[highlight_index(e.offset_t)];
    driver_.enter(*out.entered, now);
    break;
  }
  return out;
}

std::string format_step_record(Millis t, Phase phase, const DeviceCommand& command) {
  std::string out = std::to_string(t);
  out += ',';
  out += phase_name(phase);
  out += ',';
  out += command.mode ? std::string(mode_name(*command.mode)) : std::string("-");
  out += ',';
  out += std::to_string(command.direction);
  out += ',';
  out += command.momentary_fire ? '1' : '0';
  return out;
}

}  // namespace sipseq
