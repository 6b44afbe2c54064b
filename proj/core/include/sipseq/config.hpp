#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "sipseq/arm.hpp"
#include "sipseq/controller.hpp"
#include "sipseq/library.hpp"
#include "sipseq/signal.hpp"
#include "sipseq/types.hpp"

namespace sipseq {

struct TimerConfig {
  Millis t_match_ms = SequenceLibrary::kDefaultMatchTimeoutMs;
  Millis t_idle_ms = kDefaultIdleTimeoutMs;
  Millis scroll_period_ms = kDefaultScrollPeriodMs;

  bool operator==(const TimerConfig&) const = default;
};

/// Scripted stand-in for a human operator in simulated sessions. These are
/// modelling assumptions, all exposed in the configuration document.
struct VirtualUserModel {
  double reaction_mean_ms = 250.0;
  double reaction_sd_ms = 50.0;  // normal, truncated at 0
  Millis short_peak_ms = 200;
  Millis long_peak_ms = 600;
  Millis inter_peak_gap_ms = 150;
  double miss_probability = 0.1;  // chance to let a wanted highlight pass
  std::uint64_t rng_seed = 1;

  /// Requires short_peak_ms < long_threshold_ms <= long_peak_ms so every
  /// intended pulse lands in the right duration class.
  void validate(const DetectorConfig& detector) const;

  bool operator==(const VirtualUserModel&) const = default;
};

/// Everything a session needs: the parsed configuration document.
struct EngineConfig {
  DetectorConfig detector;
  std::shared_ptr<const SequenceLibrary> library;
  TimerConfig timers;
  ArmConfig arm;
  VirtualUserModel user;
  Millis sample_period_ms = 10;

  void validate() const;
};

/// The shipped nine-mode library (one sequence per control mode, prefix-free).
std::shared_ptr<const SequenceLibrary> default_library(
    Millis t_match_ms = SequenceLibrary::kDefaultMatchTimeoutMs);

EngineConfig default_config();

/// Parses only the `sequences` list (and `timers.t_match_ms`) of a
/// configuration document. Codes may be integers or symbols ("1", "-2",
/// "short_sip", ...). Throws LibraryError for unknown modes or code symbols,
/// empty or duplicate code lists, and ConfigError for malformed JSON.
SequenceLibrary library_load(std::string_view json_text);

/// Parses a whole configuration document. Missing sections take their
/// defaults; a missing `sequences` list means the default library.
EngineConfig parse_config(std::string_view json_text);
EngineConfig load_config(const std::filesystem::path& path);

std::string config_to_json(const EngineConfig& config);

}  // namespace sipseq
