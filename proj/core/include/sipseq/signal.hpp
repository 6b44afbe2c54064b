#pragma once

#include <optional>

#include "sipseq/codes.hpp"
#include "sipseq/types.hpp"

namespace sipseq {

inline constexpr double kMinVolts = 0.0;
inline constexpr double kMaxVolts = 5.0;

struct Sample {
  Millis t = 0;
  double v = 0.0;

  bool operator==(const Sample&) const = default;
};

/// A classified excursion. Direction and duration class are derived from the
/// code so the two can never disagree.
struct PeakEvent {
  Code code = Code::kShortSip;
  Millis onset_t = 0;
  Millis offset_t = 0;

  Direction direction() const { return direction_of(code); }
  DurationClass duration_class() const { return duration_of(code); }
  Millis duration() const { return offset_t - onset_t; }

  bool operator==(const PeakEvent&) const = default;
};

/// Thresholds for a two-sided hysteresis comparator around a neutral level.
/// Puffs raise the voltage, sips lower it.
struct DetectorConfig {
  double neutral_v = 2.5;
  double puff_on_v = 3.2;
  double puff_off_v = 2.8;
  double sip_on_v = 1.8;
  double sip_off_v = 2.2;
  Millis debounce_ms = 50;
  Millis long_threshold_ms = 400;
  Millis max_peak_ms = 5000;

  /// Throws ConfigError unless
  /// sip_on < sip_off < neutral < puff_off < puff_on and
  /// 0 < debounce < long_threshold < max_peak.
  void validate() const;

  bool operator==(const DetectorConfig&) const = default;
};

enum class LevelState { kNeutral, kSipActive, kPuffActive };

std::string_view level_name(LevelState level);

/// Streaming peak detector.
///
/// A peak opens on the first sample past an activation threshold and closes on
/// the first sample back past the matching release threshold; the event is
/// emitted on that closing sample with the two sample times as onset/offset.
/// Peaks shorter than `debounce_ms` are dropped. A peak still open after
/// `max_peak_ms` is emitted as long and the detector then stays latched (level
/// still reported active, no new peaks) until the signal is released.
///
/// Value type: copy it to snapshot, compare traces by re-running.
class PeakDetector {
 public:
  explicit PeakDetector(DetectorConfig config = {});

  /// Ingests one sample. Voltages are clamped to [0, 5]. Throws InputError if
  /// `s.t` is not strictly after the previous sample; the detector is
  /// unchanged in that case.
  std::optional<PeakEvent> feed(Sample s);

  /// Closes an open peak at `now` using the usual classification rules and
  /// returns the detector to neutral.
  std::optional<PeakEvent> flush(Millis now);

  /// Held level as of the last sample. An open peak only counts as active
  /// once it has lasted `debounce_ms`.
  LevelState level() const;

  const DetectorConfig& config() const { return config_; }
  std::optional<Millis> last_t() const { return last_t_; }

  bool operator==(const PeakDetector&) const = default;

 private:
  enum class Phase { kNeutral, kOpen, kLatched };

  bool released(double v) const;
  std::optional<PeakEvent> close(Millis offset_t);

  DetectorConfig config_;
  Phase phase_ = Phase::kNeutral;
  Direction open_direction_ = Direction::kSip;
  Millis onset_t_ = 0;
  std::optional<Millis> last_t_;
};

}  // namespace sipseq
