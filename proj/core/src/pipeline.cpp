#include "sipseq/pipeline.hpp"

#include "sipseq/errors.hpp"

namespace sipseq {

std::string_view interface_name(InterfaceKind kind) {
  return kind == InterfaceKind::kAsp ? "asp" : "bsp";
}

std::optional<InterfaceKind> parse_interface(std::string_view name) {
  if (name == "asp") return InterfaceKind::kAsp;
  if (name == "bsp") return InterfaceKind::kBsp;
  return std::nullopt;
}

namespace {

std::variant<AspController, BspController> make_controller(const EngineConfig& config,
                                                            InterfaceKind kind, Millis start_t) {
  if (kind == InterfaceKind::kAsp) return AspController(config.library, config.timers.t_idle_ms);
  return BspController(config.timers.scroll_period_ms, config.timers.t_idle_ms, start_t);
}

}  // namespace

SessionPipeline::SessionPipeline(const EngineConfig& config, InterfaceKind kind,
                                 std::optional<TaskSpec> task, Millis start_t)
    : config_(config),
      kind_(kind),
      detector_(config.detector),
      controller_(make_controller(config, kind, start_t)),
      arm_(initial_arm_state(config.arm)),
      start_t_(start_t),
      now_(start_t) {
  if (task) {
    tracker_.emplace(std::move(*task));
    tracker_->update(arm_, start_t_);
    if (tracker_->done()) done_t_ = start_t_;
  }
}

StepReport SessionPipeline::step(Sample s) {
  if (s.t <= now_ && detector_.last_t()) {
    throw InputError("pipeline step at " + std::to_string(s.t) + " is not after " +
                     std::to_string(now_));
  }
  if (s.t < now_) throw InputError("pipeline step precedes session start");
  auto event = detector_.feed(s);
  return run(s.t, event);
}

StepReport SessionPipeline::advance(Millis now) {
  if (now < now_) throw InputError("pipeline time went backwards");
  return run(now, std::nullopt);
}

StepReport SessionPipeline::finish(Millis now) {
  if (now < now_) throw InputError("pipeline time went backwards");
  auto event = detector_.flush(now);
  return run(now, event);
}

StepReport SessionPipeline::run(Millis now, std::optional<PeakEvent> event) {
  StepReport report;
  report.t = now;
  report.event = event;
  report.level = detector_.level();

  std::span<const PeakEvent> events;
  if (event) events = std::span<const PeakEvent>(&*event, 1);

  if (auto* asp = std::get_if<AspController>(&controller_)) {
    auto r = asp->step(report.level, events, now);
    report.command = r.command;
    report.outcomes = std::move(r.outcomes);
    report.entered = r.entered;
    report.exited = r.exited;
  } else {
    auto r = std::get<BspController>(controller_).step(report.level, events, now);
    report.command = r.command;
    report.entered = r.entered;
    report.exited = r.exited;
  }

  const Millis dt = now - now_;
  const bool was_going = arm_.goto_active;
  if (dt > 0) arm_ = arm_apply(arm_, report.command, dt, config_.arm);
  report.moving = dt > 0 && (report.command.direction != 0 || was_going || arm_.goto_active);

  if (!done_t_) {
    if (report.moving) moving_ms_ += dt;
    if (report.entered) ++selections_;
    for (const auto& o : report.outcomes) {
      if (o.kind == OutcomeKind::kReset) ++resets_;
    }
    if (tracker_) {
      tracker_->update(arm_, now);
      if (tracker_->done()) done_t_ = now;
    }
  }
  now_ = now;
  return report;
}

Phase SessionPipeline::phase() const {
  return std::visit([](const auto& c) { return c.phase(); }, controller_);
}

std::optional<ControlMode> SessionPipeline::active_mode() const {
  return std::visit([](const auto& c) { return c.active_mode(); }, controller_);
}

std::optional<std::size_t> SessionPipeline::highlight_index() const {
  const auto* bsp = std::get_if<BspController>(&controller_);
  if (!bsp || bsp->phase() != Phase::kDetection) return std::nullopt;
  return bsp->highlight_index(now_);
}

std::optional<Millis> SessionPipeline::highlight_started_at() const {
  const auto* bsp = std::get_if<BspController>(&controller_);
  if (!bsp || bsp->phase() != Phase::kDetection) return std::nullopt;
  return bsp->highlight_started_at(now_);
}

const SequenceMatcher* SessionPipeline::matcher() const {
  const auto* asp = std::get_if<AspController>(&controller_);
  return asp ? &asp->matcher() : nullptr;
}

Millis SessionPipeline::idle_remaining() const {
  return std::visit([&](const auto& c) { return c.driver().idle_remaining(now_); }, controller_);
}

SessionMetrics SessionPipeline::metrics(int extra_resets) const {
  SessionMetrics m;
  m.completion_ms = (done_t_ ? *done_t_ : now_) - start_t_;
  m.moving_ms = moving_ms_;
  m.wasted_ms = m.completion_ms - m.moving_ms;
  m.mode_selection_count = selections_;
  m.reset_count = resets_ + extra_resets;
  return m;
}

}  // namespace sipseq
