#include "sipseq/virtual_user.hpp"

#include <algorithm>
#include <cmath>

#include "sipseq/errors.hpp"

namespace sipseq {
namespace {

constexpr ControlMode kAxisOrder[] = {
    ControlMode::kTranslateFb, ControlMode::kTranslateLr, ControlMode::kTranslateUd,
    ControlMode::kRotateX,     ControlMode::kRotateY,     ControlMode::kRotateZ,
};

bool is_angular(ControlMode mode) {
  return mode == ControlMode::kRotateX || mode == ControlMode::kRotateY ||
         mode == ControlMode::kRotateZ;
}

double pose_axis(const Pose& pose, ControlMode mode) {
  switch (mode) {
    case ControlMode::kTranslateFb: return pose.position.x;
    case ControlMode::kTranslateLr: return pose.position.y;
    case ControlMode::kTranslateUd: return pose.position.z;
    case ControlMode::kRotateX: return pose.orientation.x;
    case ControlMode::kRotateY: return pose.orientation.y;
    case ControlMode::kRotateZ: return pose.orientation.z;
    default: return 0.0;
  }
}

bool same_pose(const Pose& a, const Pose& b) {
  return distance(a.position, b.position) < 1e-9 && orientation_error(a.orientation, b.orientation) < 1e-9;
}

}  // namespace

VirtualUser::VirtualUser(TaskSpec task, InterfaceKind kind, const VirtualUserModel& model,
                         const EngineConfig& config, std::uint64_t seed)
    : task_(std::move(task)),
      kind_(kind),
      model_(model),
      config_(config),
      rng_(seed),
      puff_v_(std::min(kMaxVolts, config.detector.puff_on_v + 0.8)),
      sip_v_(std::max(kMinVolts, config.detector.sip_on_v - 0.8)),
      neutral_v_(config.detector.neutral_v) {
  model_.validate(config.detector);
}

double VirtualUser::axis_value(const ArmState& arm, ControlMode mode) const {
  if (mode == ControlMode::kFingers) return arm.gripper;
  return pose_axis(arm.pose, mode);
}

bool VirtualUser::revisited_later(std::size_t index) const {
  for (std::size_t j = index + 1; j < task_.waypoints.size(); ++j) {
    if (same_pose(task_.waypoints[j].pose, task_.waypoints[index].pose)) return true;
  }
  return false;
}

std::optional<VirtualUser::Goal> VirtualUser::next_goal(const UserObservation& obs) const {
  const ArmState& arm = *obs.arm;
  const std::size_t index = obs.completed_waypoints;

  if (index > 0 && revisited_later(index - 1)) {
    const Waypoint& left = task_.waypoints[index - 1];
    if (!arm.saved_point || !pose_within(*arm.saved_point, left)) {
      if (pose_within(arm.pose, left)) return Goal{ControlMode::kSavePoint};
    }
  }
  if (index >= task_.waypoints.size()) return std::nullopt;
  const Waypoint& wp = task_.waypoints[index];

  if (arm.saved_point && pose_within(*arm.saved_point, wp) && !pose_within(arm.pose, wp)) {
    return Goal{ControlMode::kGotoPoint};
  }
  for (ControlMode mode : kAxisOrder) {
    const double threshold = is_angular(mode) ? wp.tol_rad / 4.0 : wp.tol_m / 4.0;
    const double target = pose_axis(wp.pose, mode);
    const double current = pose_axis(arm.pose, mode);
    const double delta = is_angular(mode) ? angle_diff(target, current) : target - current;
    if (std::abs(delta) > threshold) return Goal{mode, target, threshold};
  }
  constexpr double kGripThreshold = kGripClosedMax / 2.0;
  if (wp.grip == GripAction::kClose && arm.gripper > kGripThreshold) {
    return Goal{ControlMode::kFingers, 0.0, kGripThreshold};
  }
  if (wp.grip == GripAction::kOpen && arm.gripper < 1.0 - kGripThreshold) {
    return Goal{ControlMode::kFingers, 1.0, kGripThreshold};
  }
  return std::nullopt;
}

Millis VirtualUser::reaction_start(Millis now) {
  std::normal_distribution<double> reaction(model_.reaction_mean_ms, model_.reaction_sd_ms);
  const double delay = std::max(0.0, reaction(rng_));
  const Millis period = config_.sample_period_ms;
  const auto steps = static_cast<Millis>(std::ceil(delay / static_cast<double>(period)));
  return now + steps * period;
}

void VirtualUser::schedule(Millis start, const std::vector<Code>& codes) {
  script_.clear();
  Millis t = start;
  for (Code code : codes) {
    const Millis width =
        duration_of(code) == DurationClass::kShort ? model_.short_peak_ms : model_.long_peak_ms;
    script_.push_back({t, t + width, direction_of(code)});
    script_end_ = t + width;
    t += width + model_.inter_peak_gap_ms;
  }
}

double VirtualUser::script_voltage(Millis now) const {
  for (const Pulse& p : script_) {
    if (now >= p.start && now < p.end) return p.direction == Direction::kPuff ? puff_v_ : sip_v_;
  }
  return neutral_v_;
}

double VirtualUser::voltage(const UserObservation& obs) {
  const Millis now = obs.now;
  const bool selecting_phase = obs.phase == Phase::kDetection;

  // Every stage change either returns or moves strictly forward, so a handful
  // of passes is enough.
  for (int pass = 0; pass < 8; ++pass) {
    switch (stage_) {
      case Stage::kPlan: {
        goal_ = next_goal(obs);
        if (!goal_) return neutral_v_;
        if (!selecting_phase) {
          if (obs.active_mode == goal_->mode && !is_momentary(goal_->mode)) {
            stage_ = Stage::kActing;
          } else {
            stage_ = Stage::kWaitDetection;
          }
          continue;
        }
        if (kind_ == InterfaceKind::kAsp) {
          const UserDefinedSequence* bound = nullptr;
          for (const auto& uds : config_.library->sequences()) {
            if (uds.mode == goal_->mode) {
              bound = &uds;
              break;
            }
          }
          if (!bound) {
            throw SimulationError(std::string("no sequence bound to mode ") +
                                  std::string(mode_name(goal_->mode)));
          }
          schedule(reaction_start(now), bound->codes);
          stage_ = Stage::kSelecting;
        } else {
          stage_ = Stage::kWatchHighlight;
        }
        continue;
      }

      case Stage::kWaitDetection:
        if (!selecting_phase) return neutral_v_;
        stage_ = Stage::kPlan;
        continue;

      case Stage::kWatchHighlight: {
        if (!selecting_phase) {
          stage_ = Stage::kAwaitMode;
          await_since_ = now;
          continue;
        }
        const auto wanted = mode_index(goal_->mode);
        if (obs.highlight && *obs.highlight == wanted && obs.highlight_started_at &&
            considered_highlight_ != obs.highlight_started_at) {
          considered_highlight_ = obs.highlight_started_at;
          std::bernoulli_distribution miss(model_.miss_probability);
          if (miss(rng_)) {
            ++missed_highlights_;
            return neutral_v_;
          }
          schedule(reaction_start(now), {Code::kShortPuff});
          stage_ = Stage::kSelecting;
          continue;
        }
        return neutral_v_;
      }

      case Stage::kSelecting:
        if (now < script_end_) return script_voltage(now);
        stage_ = Stage::kAwaitMode;
        await_since_ = now;
        return neutral_v_;

      case Stage::kAwaitMode:
        if (!selecting_phase) {
          if (obs.active_mode == goal_->mode) {
            act_at_ = reaction_start(now);
            stage_ = Stage::kPreAct;
          } else {
            ++wrong_selections_;
            stage_ = Stage::kWaitDetection;
          }
          continue;
        }
        if (now - await_since_ > config_.timers.t_match_ms + 10 * config_.sample_period_ms) {
          ++wrong_selections_;
          stage_ = Stage::kPlan;
          continue;
        }
        return neutral_v_;

      case Stage::kPreAct:
        if (selecting_phase) {
          stage_ = Stage::kPlan;
          continue;
        }
        if (now < act_at_) return neutral_v_;
        if (is_momentary(goal_->mode)) {
          schedule(now, {Code::kShortPuff});
          stage_ = Stage::kMomentary;
        } else {
          stage_ = Stage::kActing;
        }
        continue;

      case Stage::kActing: {
        if (selecting_phase || obs.active_mode != goal_->mode) {
          stage_ = Stage::kPlan;
          continue;
        }
        const double current = axis_value(*obs.arm, goal_->mode);
        const double remaining = is_angular(goal_->mode) ? angle_diff(goal_->target, current)
                                                         : goal_->target - current;
        if (std::abs(remaining) <= goal_->threshold) {
          stage_ = Stage::kPlan;
          return neutral_v_;
        }
        return remaining > 0 ? puff_v_ : sip_v_;
      }

      case Stage::kMomentary:
        if (now < script_end_) return script_voltage(now);
        stage_ = goal_->mode == ControlMode::kGotoPoint ? Stage::kAwaitGoto : Stage::kPlan;
        return neutral_v_;

      case Stage::kAwaitGoto:
        if (obs.arm->goto_active) return neutral_v_;
        stage_ = Stage::kPlan;
        continue;
    }
  }
  return neutral_v_;
}

SessionMetrics simulate_session(const TaskSpec& task, InterfaceKind kind,
                                const VirtualUserModel& user, const EngineConfig& config,
                                std::uint64_t seed, const SimulationLimits& limits) {
  config.validate();
  task.validate();
  SessionPipeline pipeline(config, kind, task, 0);
  VirtualUser operator_(task, kind, user, config, seed);

  const Millis dt = config.sample_period_ms;
  Millis t = 0;
  while (!pipeline.task_done()) {
    t += dt;
    if (t > limits.max_session_ms) {
      throw SimulationError("session for task '" + task.id + "' (" +
                            std::string(interface_name(kind)) + ", seed " +
                            std::to_string(seed) + ") did not finish within " +
                            std::to_string(limits.max_session_ms) + " ms");
    }
    UserObservation obs;
    obs.now = t;
    obs.phase = pipeline.phase();
    obs.active_mode = pipeline.active_mode();
    obs.highlight = pipeline.highlight_index();
    obs.highlight_started_at = pipeline.highlight_started_at();
    obs.arm = &pipeline.arm();
    obs.completed_waypoints = pipeline.tracker()->completed();
    pipeline.step({t, operator_.voltage(obs)});
  }
  return pipeline.metrics(operator_.wrong_selections());
}

}  // namespace sipseq
