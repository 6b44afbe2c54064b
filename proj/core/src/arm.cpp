#include "sipseq/arm.hpp"

#include <algorithm>
#include <numbers>

#include "sipseq/errors.hpp"

namespace sipseq {
namespace {

double* axis_of(Pose& pose, ControlMode mode) {
  switch (mode) {
    case ControlMode::kTranslateFb: return &pose.position.x;
    case ControlMode::kTranslateLr: return &pose.position.y;
    case ControlMode::kTranslateUd: return &pose.position.z;
    case ControlMode::kRotateX: return &pose.orientation.x;
    case ControlMode::kRotateY: return &pose.orientation.y;
    case ControlMode::kRotateZ: return &pose.orientation.z;
    default: return nullptr;
  }
}

bool is_rotation(ControlMode mode) {
  return mode == ControlMode::kRotateX || mode == ControlMode::kRotateY ||
         mode == ControlMode::kRotateZ;
}

void clamp_to_workspace(Vec3& p, const ArmConfig& config) {
  p.x = std::clamp(p.x, config.workspace_min.x, config.workspace_max.x);
  p.y = std::clamp(p.y, config.workspace_min.y, config.workspace_max.y);
  p.z = std::clamp(p.z, config.workspace_min.z, config.workspace_max.z);
}

void advance_goto(ArmState& arm, double seconds, const ArmConfig& config) {
  const Pose& target = *arm.saved_point;
  Vec3& p = arm.pose.position;
  const double dist = distance(p, target.position);
  const double reach = config.linear_rate * seconds;
  if (dist <= reach) {
    p = target.position;
  } else {
    const double k = reach / dist;
    p.x += (target.position.x - p.x) * k;
    p.y += (target.position.y - p.y) * k;
    p.z += (target.position.z - p.z) * k;
  }

  const double turn = config.angular_rate * seconds;
  Vec3& o = arm.pose.orientation;
  o.x = wrap_angle(o.x + std::clamp(angle_diff(target.orientation.x, o.x), -turn, turn));
  o.y = wrap_angle(o.y + std::clamp(angle_diff(target.orientation.y, o.y), -turn, turn));
  o.z = wrap_angle(o.z + std::clamp(angle_diff(target.orientation.z, o.z), -turn, turn));

  if (distance(p, target.position) <= config.snap_m &&
      orientation_error(o, target.orientation) <= config.snap_rad) {
    arm.pose = target;
    arm.goto_active = false;
  }
}

}  // namespace

double wrap_angle(double a) {
  constexpr double kPi = std::numbers::pi;
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

double angle_diff(double to, double from) { return wrap_angle(to - from); }

double orientation_error(const Vec3& a, const Vec3& b) {
  return std::max({std::abs(angle_diff(a.x, b.x)), std::abs(angle_diff(a.y, b.y)),
                   std::abs(angle_diff(a.z, b.z))});
}

void ArmConfig::validate() const {
  if (!(workspace_min.x < workspace_max.x && workspace_min.y < workspace_max.y &&
        workspace_min.z < workspace_max.z)) {
    throw ConfigError("arm workspace box is empty");
  }
  if (!(linear_rate > 0 && angular_rate > 0 && gripper_rate > 0 && snap_m > 0 && snap_rad > 0)) {
    throw ConfigError("arm rates and snap tolerances must be positive");
  }
  Vec3 h = home.position;
  clamp_to_workspace(h, *this);
  if (!(h == home.position)) throw ConfigError("arm home pose lies outside the workspace");
  if (!(home_gripper >= 0.0 && home_gripper <= 1.0)) {
    throw ConfigError("arm home_gripper must be in [0, 1]");
  }
}

ArmState initial_arm_state(const ArmConfig& config) {
  ArmState arm;
  arm.pose = config.home;
  arm.gripper = config.home_gripper;
  return arm;
}

ArmState arm_apply(const ArmState& arm, const DeviceCommand& command, Millis dt,
                   const ArmConfig& config) {
  if (dt <= 0) throw InputError("arm_apply requires dt > 0");
  ArmState next = arm;
  const double seconds = static_cast<double>(dt) / 1000.0;

  if (command.mode) {
    const ControlMode mode = *command.mode;
    if (mode == ControlMode::kSavePoint) {
      if (command.momentary_fire) next.saved_point = next.pose;
    } else if (mode == ControlMode::kGotoPoint) {
      if (command.momentary_fire) {
        if (next.saved_point) {
          next.goto_active = true;
        } else {
          next.flags.push_back(ArmFlag::kGotoWithoutSavedPoint);
        }
      }
    } else if (command.direction != 0) {
      next.goto_active = false;
      const double dir = command.direction > 0 ? 1.0 : -1.0;
      if (mode == ControlMode::kFingers) {
        next.gripper = std::clamp(next.gripper + dir * config.gripper_rate * seconds, 0.0, 1.0);
      } else if (double* axis = axis_of(next.pose, mode)) {
        const double rate = is_rotation(mode) ? config.angular_rate : config.linear_rate;
        *axis += dir * rate * seconds;
        if (is_rotation(mode)) *axis = wrap_angle(*axis);
      }
    }
  }

  if (next.goto_active) advance_goto(next, seconds, config);
  clamp_to_workspace(next.pose.position, config);
  return next;
}

}  // namespace sipseq
