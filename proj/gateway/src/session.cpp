#include "sipseq/gateway/session.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace sipseq::gateway {
namespace {

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json pose_json(const Pose& p) {
  return {{"position", vec_json(p.position)}, {"orientation", vec_json(p.orientation)}};
}

json outcome_json(Millis t, const MatchOutcome& o) {
  json j = {{"t_ms", t}, {"kind", outcome_name(o.kind)}};
  switch (o.kind) {
    case OutcomeKind::kPending: j["candidates"] = o.candidates; break;
    case OutcomeKind::kMatched: j["matched_id"] = o.matched_id; break;
    case OutcomeKind::kReset: j["reset_reason"] = reset_reason_name(*o.reset_reason); break;
    case OutcomeKind::kIdle: break;
  }
  return j;
}

json metrics_json(const SessionMetrics& m) {
  return {{"completion_ms", m.completion_ms},
          {"moving_ms", m.moving_ms},
          {"wasted_ms", m.wasted_ms},
          {"mode_selection_count", m.mode_selection_count},
          {"reset_count", m.reset_count}};
}

}  // namespace

SessionEngine::SessionEngine(EngineConfig config, InterfaceKind kind,
                             std::optional<TaskSpec> task, Millis tick_ms)
    : pipeline_(config, kind, task, 0),
      task_(std::move(task)),
      tick_ms_(tick_ms),
      held_v_(config.detector.neutral_v) {
  if (tick_ms_ <= 0 || tick_ms_ % config.sample_period_ms != 0) {
    throw ConfigError("tick_ms must be a positive multiple of sample_period_ms");
  }
}

double SessionEngine::channel_volts(Direction d) const {
  const auto& det = config().detector;
  return d == Direction::kPuff ? std::min(kMaxVolts, det.puff_on_v + 0.8)
                               : std::max(kMinVolts, det.sip_on_v - 0.8);
}

std::optional<std::string> SessionEngine::validate(const InputMessage& m) const {
  if (fed_until_ && m.t_ms <= *fed_until_) return "stale: engine already at t_ms " +
                                                   std::to_string(*fed_until_);
  if (last_accepted_t_ && m.t_ms < *last_accepted_t_) {
    return "out of order: earlier than t_ms " + std::to_string(*last_accepted_t_);
  }
  switch (m.kind) {
    case MessageKind::kPress:
      if (key_down_) return std::string(direction_name(*key_down_)) + " is already pressed";
      break;
    case MessageKind::kRelease:
      if (key_down_ != m.channel) return "release without press";
      break;
    case MessageKind::kSample: break;
  }
  return std::nullopt;
}

json SessionEngine::receive(std::string_view raw) {
  InputMessage m;
  try {
    m = parse_input(raw);
  } catch (const ProtocolError& e) {
    return error_reply(e.what());
  }
  const auto seq = ++seq_;
  if (auto reason = validate(m)) return reject_reply(seq, m, *reason);

  last_accepted_t_ = m.t_ms;
  switch (m.kind) {
    case MessageKind::kPress:
      key_down_ = m.channel;
      pending_.push_back({m.t_ms, channel_volts(m.channel), false});
      break;
    case MessageKind::kRelease:
      key_down_.reset();
      pending_.push_back({m.t_ms, config().detector.neutral_v, false});
      break;
    case MessageKind::kSample: pending_.push_back({m.t_ms, m.v, true}); break;
  }
  return ack_reply(seq, m);
}

json SessionEngine::tick() {
  const Millis end = now() + tick_ms_;
  const Millis period = config().sample_period_ms;
  tick_events_.clear();
  tick_outcomes_.clear();

  auto feed = [&](Millis t) {
    while (!pending_.empty() && pending_.front().t <= t) {
      held_v_ = pending_.front().v;
      pending_.pop_front();
    }
    const auto r = pipeline_.step({t, held_v_});
    if (r.event) tick_events_.push_back(*r.event);
    for (const auto& o : r.outcomes) tick_outcomes_.push_back(outcome_json(r.t, o));
    fed_until_ = t;
  };

  // Grid points in (fed_until, end], merged with exact sample times.
  Millis grid = fed_until_ ? (*fed_until_ / period + 1) * period : 0;
  while (true) {
    std::optional<Millis> exact;
    for (const auto& c : pending_) {
      if (c.exact && (!fed_until_ || c.t > *fed_until_)) {
        exact = c.t;
        break;
      }
    }
    Millis next = grid;
    if (exact && *exact < next) next = *exact;
    if (next > end) break;
    feed(next);
    if (next == grid) grid += period;
  }
  ++ticks_;

  const auto& p = pipeline_;
  json frame;
  frame["type"] = "state";
  frame["seq"] = ticks_ - 1;
  frame["t_ms"] = end;
  frame["interface"] = interface_name(p.kind());
  frame["phase"] = phase_name(p.phase());
  frame["active_mode"] = p.active_mode() ? json(mode_name(*p.active_mode())) : json(nullptr);
  frame["level"] = level_name(p.detector().level());
  frame["key_down"] = key_down_ ? json(direction_name(*key_down_)) : json(nullptr);

  json cs = json::array();
  json candidates = json::array();
  json t_match_remaining = nullptr;
  if (const auto* m = p.matcher()) {
    for (Code c : m->current_sequence()) cs.push_back(to_int(c));
    for (const auto& id : m->candidates()) candidates.push_back(id);
    if (auto deadline = m->deadline()) t_match_remaining = std::max<Millis>(0, *deadline - end);
  }
  frame["cs"] = cs;
  frame["candidates"] = candidates;
  frame["t_match_remaining_ms"] = t_match_remaining;
  frame["t_idle_remaining_ms"] =
      p.phase() == Phase::kCommand ? json(p.idle_remaining()) : json(nullptr);
  if (auto h = p.highlight_index()) {
    frame["highlight"] = *h;
    frame["highlight_mode"] = mode_name(kAllModes[*h]);
  } else {
    frame["highlight"] = nullptr;
    frame["highlight_mode"] = nullptr;
  }

  json events = json::array();
  for (const auto& e : tick_events_) {
    events.push_back({{"code", to_int(e.code)}, {"onset_ms", e.onset_t}, {"offset_ms", e.offset_t}});
  }
  frame["events"] = events;
  frame["outcomes"] = tick_outcomes_;

  const auto& arm = p.arm();
  frame["arm"] = {{"pose", pose_json(arm.pose)},
                  {"gripper", arm.gripper},
                  {"goto_active", arm.goto_active},
                  {"saved_point", arm.saved_point ? pose_json(*arm.saved_point) : json(nullptr)},
                  {"goto_without_saved_point", arm.flags.size()}};

  if (const auto* tr = p.tracker()) {
    const auto progress = tr->progress();
    frame["task"] = {{"id", tr->task().id},
                     {"completed", tr->completed()},
                     {"total", tr->task().waypoints.size()},
                     {"fraction", progress.fraction},
                     {"done", progress.done}};
  } else {
    frame["task"] = nullptr;
  }
  frame["metrics"] = p.task_done() ? metrics_json(p.metrics()) : json(nullptr);

  if (ticks_ == 1) {
    frame["bindings"] = bindings_json(*config().library);
    frame["task_spec"] = task_ ? task_to_json(*task_) : json(nullptr);
  }
  return frame;
}

// InboundLog ------------------------------------------------------------------

void InboundLog::header(const SessionEngine& engine) {
  json j = {{"type", "session"},
            {"interface", interface_name(engine.kind())},
            {"tick_ms", engine.tick_ms()},
            {"config", json::parse(config_to_json(engine.config()))},
            {"task", engine.task() ? task_to_json(*engine.task()) : json(nullptr)}};
  *out_ << j.dump() << '\n';
}

void InboundLog::input(std::uint64_t tick, std::string_view raw) {
  *out_ << json{{"type", "input"}, {"tick", tick}, {"raw", raw}}.dump() << '\n';
}

void InboundLog::end(std::uint64_t ticks, std::string_view reason) {
  *out_ << json{{"type", "end"}, {"ticks", ticks}, {"reason", reason}}.dump() << '\n';
  out_->flush();
}

ReplayedSession replay_inbound_log(std::istream& in) {
  ReplayedSession out;
  std::optional<SessionEngine> engine;
  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json rec = json::parse(line);
      const auto type = rec.at("type").get<std::string>();
      if (type == "session") {
        std::optional<TaskSpec> task;
        if (!rec.at("task").is_null()) task = parse_task(rec.at("task").dump());
        const auto kind = parse_interface(rec.at("interface").get<std::string>());
        if (!kind) throw ConfigError("unknown interface");
        engine.emplace(parse_config(rec.at("config").dump()), *kind, std::move(task),
                       rec.at("tick_ms").get<Millis>());
        continue;
      }
      if (!engine) throw ConfigError("log does not start with a session record");
      const auto until = rec.at(type == "input" ? "tick" : "ticks").get<std::uint64_t>();
      while (engine->ticks() < until) out.frames.push_back(engine->tick());
      if (type == "input") {
        out.replies.push_back(engine->receive(rec.at("raw").get<std::string>()));
      } else if (type == "end") {
        break;
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("inbound log line " + std::to_string(line_no) + ": " + e.what());
  }
  return out;
}

}  // namespace sipseq::gateway
