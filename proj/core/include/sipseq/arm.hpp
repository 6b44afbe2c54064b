#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "sipseq/controller.hpp"
#include "sipseq/types.hpp"

namespace sipseq {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
};

inline double distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

/// Position in meters, orientation as roll/pitch/yaw radians in (-pi, pi].
struct Pose {
  Vec3 position;
  Vec3 orientation;

  bool operator==(const Pose&) const = default;
};

/// Signed shortest angular difference `to - from`, in (-pi, pi].
double angle_diff(double to, double from);
double wrap_angle(double a);
/// Largest absolute per-axis angular difference.
double orientation_error(const Vec3& a, const Vec3& b);

struct ArmConfig {
  Vec3 workspace_min{-0.8, -0.8, 0.0};
  Vec3 workspace_max{0.8, 0.8, 1.2};
  double linear_rate = 0.08;   // m/s
  double angular_rate = 0.5;   // rad/s
  double gripper_rate = 0.5;   // aperture/s
  double snap_m = 0.001;
  double snap_rad = 0.001;
  Pose home{{0.0, 0.3, 0.5}, {0.0, 0.0, 0.0}};
  double home_gripper = 1.0;

  /// Throws ConfigError on an empty workspace, non-positive rates, or a home
  /// pose outside the workspace.
  void validate() const;

  bool operator==(const ArmConfig&) const = default;
};

enum class ArmFlag { kGotoWithoutSavedPoint };

struct ArmState {
  Pose pose;
  double gripper = 1.0;  // 0 closed, 1 open
  std::optional<Pose> saved_point;
  bool goto_active = false;
  std::vector<ArmFlag> flags;

  bool operator==(const ArmState&) const = default;
};

ArmState initial_arm_state(const ArmConfig& config = {});

/// Integrates one command over `dt` milliseconds.
///
/// Axis modes move at a constant rate times the command direction: puff
/// (+1) moves forward/left/up, rotates positively, or opens the fingers.
/// Any axis motion cancels a running goto. save_point stores the current pose;
/// goto_point starts a straight-line return to it that snaps and stops once
/// within `snap_m`. Position is clamped to the workspace box and the gripper
/// to [0, 1]. Throws InputError for `dt <= 0`.
ArmState arm_apply(const ArmState& arm, const DeviceCommand& command, Millis dt,
                   const ArmConfig& config = {});

}  // namespace sipseq
