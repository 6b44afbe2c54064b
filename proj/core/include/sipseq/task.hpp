#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sipseq/arm.hpp"

namespace sipseq {

enum class GripAction { kNone, kOpen, kClose };

std::string_view grip_name(GripAction grip);

/// Gripper apertures that count as "closed on the object" and "released".
inline constexpr double kGripClosedMax = 0.05;
inline constexpr double kGripOpenMin = 0.95;

struct Waypoint {
  Pose pose;
  GripAction grip = GripAction::kNone;
  double tol_m = 0.03;
  double tol_rad = 0.1;

  bool operator==(const Waypoint&) const = default;
};

struct TaskSpec {
  std::string id;
  std::string description;
  std::vector<Waypoint> waypoints;

  /// Throws ConfigError on an empty id, no waypoints, or non-positive tolerances.
  void validate() const;
};

/// Parses a task document:
///   {"id": ..., "description": ..., "waypoints": [
///     {"x":..,"y":..,"z":..,"roll":..,"pitch":..,"yaw":..,
///      "grip":"open|close|none","tol_m":..,"tol_rad":..}, ...]}
/// Orientation fields and tolerances are optional (0 rad, 0.03 m, 0.1 rad).
TaskSpec parse_task(std::string_view json_text);
TaskSpec load_task(const std::filesystem::path& path);

/// Resolves `id` to `<dir>/<id>.json`.
TaskSpec load_task_by_id(const std::filesystem::path& dir, std::string_view id);

bool pose_within(const Pose& pose, const Waypoint& wp);
bool grip_satisfied(double gripper, GripAction grip);
bool waypoint_satisfied(const ArmState& arm, const Waypoint& wp);

struct TaskProgress {
  double fraction = 0.0;
  bool done = false;

  bool operator==(const TaskProgress&) const = default;
};

TaskProgress task_progress(std::size_t completed_waypoints, const TaskSpec& task);

/// Walks a task's waypoints in order. The current waypoint is ticked off on
/// the first update where the arm pose and gripper both satisfy it; the log
/// of those moments is the task history.
class TaskTracker {
 public:
  explicit TaskTracker(TaskSpec task);

  TaskProgress update(const ArmState& arm, Millis now);

  TaskProgress progress() const { return task_progress(log_.size(), task_); }
  std::size_t completed() const { return log_.size(); }
  bool done() const { return log_.size() == task_.waypoints.size(); }
  /// Completion time of each satisfied waypoint.
  const std::vector<Millis>& log() const { return log_; }
  const Waypoint* current() const;
  const TaskSpec& task() const { return task_; }

 private:
  TaskSpec task_;
  std::vector<Millis> log_;
};

}  // namespace sipseq
