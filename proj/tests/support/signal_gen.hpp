#pragma once

// Synthetic waveforms for detector and replay tests.

#include <vector>

#include "sipseq/signal.hpp"

namespace sipseq::testing {

struct Segment {
  Millis until;  // exclusive end time of this level
  double v;
};

/// Samples every `period` ms from `start` up to (excluding) the last
/// segment's end. Each sample takes the level of the segment it falls in.
inline std::vector<Sample> piecewise(Millis start, Millis period, const std::vector<Segment>& segs) {
  std::vector<Sample> out;
  std::size_t seg = 0;
  for (Millis t = start; !segs.empty() && t < segs.back().until; t += period) {
    while (t >= segs[seg].until) ++seg;
    out.push_back({t, segs[seg].v});
  }
  return out;
}

inline constexpr double kPuffV = 4.0;
inline constexpr double kSipV = 1.0;
inline constexpr double kNeutralV = 2.5;

/// One rectangular pulse of `width` ms starting at `onset`, neutral around it,
/// sampled from 0 to `end`.
inline std::vector<Sample> pulse(Millis onset, Millis width, double level, Millis end,
                                 Millis period = 10) {
  return piecewise(0, period, {{onset, kNeutralV}, {onset + width, level}, {end, kNeutralV}});
}

inline std::vector<PeakEvent> run_detector(PeakDetector& det, const std::vector<Sample>& samples) {
  std::vector<PeakEvent> events;
  for (const auto& s : samples) {
    if (auto e = det.feed(s)) events.push_back(*e);
  }
  return events;
}

}  // namespace sipseq::testing
