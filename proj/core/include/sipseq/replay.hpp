#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sipseq/config.hpp"
#include "sipseq/metrics.hpp"
#include "sipseq/signal.hpp"

namespace sipseq {

struct MatchRecord {
  Millis t = 0;
  MatchOutcome outcome;

  bool operator==(const MatchRecord&) const = default;
};

struct ReplayResult {
  std::vector<PeakEvent> events;
  std::vector<MatchRecord> matches;
  std::vector<std::string> steps;  // controller step records
  SessionMetrics metrics;
};

/// Runs a recording through the sequence-matching pipeline, one step per
/// sample, and closes any peak still open at the last sample.
ReplayResult replay(std::span<const Sample> samples, const EngineConfig& config);

/// Match trace: one `t,kind,detail` record per non-idle matcher outcome.
void write_match_trace(std::ostream& out, std::span<const MatchRecord> matches);
void write_step_trace(std::ostream& out, std::span<const std::string> steps);

}  // namespace sipseq
