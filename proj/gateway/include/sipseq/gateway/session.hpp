#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sipseq/gateway/protocol.hpp"
#include "sipseq/pipeline.hpp"

namespace sipseq::gateway {

inline constexpr Millis kDefaultTickMs = 50;

/// Deterministic engine behind one live session.
///
/// Engine time starts at 0 and advances by exactly `tick_ms` per tick,
/// independent of wall time. Inside a tick the signal is sampled every
/// `sample_period_ms` plus at the exact time of every sample message. Key
/// presses hold a synthetic puff or sip voltage from their t_ms until the
/// matching release; a sample message holds its voltage until the next
/// change. Messages are validated on receipt and take effect when the tick
/// reaches their t_ms.
class SessionEngine {
 public:
  SessionEngine(EngineConfig config, InterfaceKind kind, std::optional<TaskSpec> task,
                Millis tick_ms = kDefaultTickMs);

  /// Handles one raw client message and returns the reply (ack, rejection
  /// or error). Never throws on bad client input.
  json receive(std::string_view raw);

  /// Advances one tick and returns its state frame.
  json tick();

  std::uint64_t ticks() const { return ticks_; }
  /// Engine time covered so far (end of the last tick).
  Millis now() const { return static_cast<Millis>(ticks_) * tick_ms_; }
  Millis tick_ms() const { return tick_ms_; }
  InterfaceKind kind() const { return pipeline_.kind(); }
  const SessionPipeline& pipeline() const { return pipeline_; }
  const EngineConfig& config() const { return pipeline_.config(); }
  const std::optional<TaskSpec>& task() const { return task_; }

 private:
  struct Change {
    Millis t;
    double v;
    bool exact;  // sample message: also forces a sample at t
  };
  std::optional<std::string> validate(const InputMessage& m) const;
  double channel_volts(Direction d) const;

  SessionPipeline pipeline_;
  std::optional<TaskSpec> task_;
  Millis tick_ms_;
  std::uint64_t ticks_ = 0;
  std::uint64_t seq_ = 0;
  std::deque<Change> pending_;
  double held_v_;
  std::optional<Millis> fed_until_;
  std::optional<Millis> last_accepted_t_;
  std::optional<Direction> key_down_;
  std::vector<PeakEvent> tick_events_;
  std::vector<json> tick_outcomes_;
};

/// Inbound message log, one JSON record per line:
///   {"type":"session", "interface":..., "tick_ms":..., "config":{...}, "task":{...}|null}
///   {"type":"input", "tick":k, "raw":"<message text>"}   (k = ticks done on arrival)
///   {"type":"end", "ticks":K, "reason":...}
class InboundLog {
 public:
  explicit InboundLog(std::ostream& out) : out_(&out) {}
  void header(const SessionEngine& engine);
  void input(std::uint64_t tick, std::string_view raw);
  void end(std::uint64_t ticks, std::string_view reason);

 private:
  std::ostream* out_;
};

struct ReplayedSession {
  std::vector<json> frames;   // state frames, in tick order
  std::vector<json> replies;  // replies to inbound messages, in order
};

/// Rebuilds a session from its inbound log. Throws ConfigError on a
/// malformed log.
ReplayedSession replay_inbound_log(std::istream& in);

}  // namespace sipseq::gateway
