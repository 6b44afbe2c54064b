#include "sipseq/replay.hpp"

#include <ostream>

#include "sipseq/pipeline.hpp"

namespace sipseq {

ReplayResult replay(std::span<const Sample> samples, const EngineConfig& config) {
  ReplayResult result;
  if (samples.empty()) return result;

  SessionPipeline pipeline(config, InterfaceKind::kAsp, std::nullopt, samples.front().t);
  auto collect = [&](StepReport&& r) {
    if (r.event) result.events.push_back(*r.event);
    for (auto& o : r.outcomes) result.matches.push_back({r.t, std::move(o)});
    result.steps.push_back(format_step_record(r.t, pipeline.phase(), r.command));
  };
  for (const Sample& s : samples) collect(pipeline.step(s));
  // A peak still open at end of stream is closed at the last sample.
  if (PeakDetector probe = pipeline.detector(); probe.flush(samples.back().t)) {
    auto r = pipeline.finish(samples.back().t);
    if (r.event) result.events.push_back(*r.event);
    for (auto& o : r.outcomes) result.matches.push_back({r.t, std::move(o)});
  }
  result.metrics = pipeline.metrics();
  return result;
}

void write_match_trace(std::ostream& out, std::span<const MatchRecord> matches) {
  for (const auto& m : matches) out << m.t << ',' << describe(m.outcome) << '\n';
}

void write_step_trace(std::ostream& out, std::span<const std::string> steps) {
  for (const auto& line : steps) out << line << '\n';
}

}  // namespace sipseq
