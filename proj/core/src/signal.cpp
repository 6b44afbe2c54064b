#include "sipseq/signal.hpp"

#include <algorithm>
#include <string>

#include "sipseq/errors.hpp"

namespace sipseq {

void DetectorConfig::validate() const {
  if (!(sip_on_v < sip_off_v && sip_off_v < neutral_v && neutral_v < puff_off_v &&
        puff_off_v < puff_on_v)) {
    throw ConfigError(
        "detector thresholds must satisfy sip_on_v < sip_off_v < neutral_v < puff_off_v < "
        "puff_on_v");
  }
  if (!(0 < debounce_ms && debounce_ms < long_threshold_ms && long_threshold_ms < max_peak_ms)) {
    throw ConfigError(
        "detector timings must satisfy 0 < debounce_ms < long_threshold_ms < max_peak_ms");
  }
}

std::string_view level_name(LevelState level) {
  switch (level) {
    case LevelState::kNeutral: return "neutral";
    case LevelState::kSipActive: return "sip_active";
    case LevelState::kPuffActive: return "puff_active";
  }
  return "?";
}

PeakDetector::PeakDetector(DetectorConfig config) : config_(config) { config_.validate(); }

bool PeakDetector::released(double v) const {
  return open_direction_ == Direction::kPuff ? v <= config_.puff_off_v : v >= config_.sip_off_v;
}

std::optional<PeakEvent> PeakDetector::close(Millis offset_t) {
  const Millis duration = offset_t - onset_t_;
  if (duration < config_.debounce_ms) return std::nullopt;
  const auto cls = duration >= config_.long_threshold_ms ? DurationClass::kLong
                                                          : DurationClass::kShort;
  return PeakEvent{make_code(open_direction_, cls), onset_t_, offset_t};
}

std::optional<PeakEvent> PeakDetector::feed(Sample s) {
  if (last_t_ && s.t <= *last_t_) {
    throw InputError("non-monotonic sample timestamp " + std::to_string(s.t) +
                     " (previous " + std::to_string(*last_t_) + ")");
  }
  last_t_ = s.t;
  const double v = std::clamp(s.v, kMinVolts, kMaxVolts);

  switch (phase_) {
    case Phase::kNeutral:
      if (v >= config_.puff_on_v) {
        phase_ = Phase::kOpen;
        open_direction_ = Direction::kPuff;
        onset_t_ = s.t;
      } else if (v <= config_.sip_on_v) {
        phase_ = Phase::kOpen;
        open_direction_ = Direction::kSip;
        onset_t_ = s.t;
      }
      return std::nullopt;

    case Phase::kOpen:
      if (released(v)) {
        phase_ = Phase::kNeutral;
        return close(s.t);
      }
      if (s.t - onset_t_ >= config_.max_peak_ms) {
        phase_ = Phase::kLatched;
        return close(s.t);
      }
      return std::nullopt;

    case Phase::kLatched:
      if (released(v)) phase_ = Phase::kNeutral;
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<PeakEvent> PeakDetector::flush(Millis now) {
  const Phase was = phase_;
  phase_ = Phase::kNeutral;
  if (!last_t_ || now > *last_t_) last_t_ = now;
  if (was != Phase::kOpen) return std::nullopt;
  return close(now);
}

LevelState PeakDetector::level() const {
  const auto active = open_direction_ == Direction::kPuff ? LevelState::kPuffActive
                                                          : LevelState::kSipActive;
  switch (phase_) {
    case Phase::kNeutral: return LevelState::kNeutral;
    case Phase::kLatched: return active;
    case Phase::kOpen:
      return (last_t_ && *last_t_ - onset_t_ >= config_.debounce_ms) ? active
                                                                       : LevelState::kNeutral;
  }
  return LevelState::kNeutral;
}

}  // namespace sipseq
