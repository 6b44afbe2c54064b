#include "sipseq/task.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sipseq/errors.hpp"

namespace sipseq {

std::string_view grip_name(GripAction grip) {
  switch (grip) {
    case GripAction::kNone: return "none";
    case GripAction::kOpen: return "open";
    case GripAction::kClose: return "close";
  }
  return "?";
}

void TaskSpec::validate() const {
  if (id.empty()) throw ConfigError("task id is empty");
  if (waypoints.empty()) throw ConfigError("task '" + id + "' has no waypoints");
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    if (!(waypoints[i].tol_m > 0.0) || !(waypoints[i].tol_rad > 0.0)) {
      throw ConfigError("task '" + id + "' waypoint " + std::to_string(i) +
                        " needs positive tolerances");
    }
  }
}

TaskSpec parse_task(std::string_view json_text) {
  TaskSpec task;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    task.id = doc.at("id").get<std::string>();
    task.description = doc.value("description", "");
    for (const auto& w : doc.at("waypoints")) {
      Waypoint wp;
      wp.pose.position = {w.at("x").get<double>(), w.at("y").get<double>(),
                          w.at("z").get<double>()};
      wp.pose.orientation = {w.value("roll", 0.0), w.value("pitch", 0.0), w.value("yaw", 0.0)};
      const auto grip = w.value("grip", std::string("none"));
      if (grip == "open") {
        wp.grip = GripAction::kOpen;
      } else if (grip == "close") {
        wp.grip = GripAction::kClose;
      } else if (grip == "none") {
        wp.grip = GripAction::kNone;
      } else {
        throw ConfigError("unknown grip action '" + grip + "'");
      }
      wp.tol_m = w.value("tol_m", 0.03);
      wp.tol_rad = w.value("tol_rad", 0.1);
      task.waypoints.push_back(wp);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad task document: ") + e.what());
  }
  task.validate();
  return task;
}

TaskSpec load_task(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open task file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_task(buf.str());
}

TaskSpec load_task_by_id(const std::filesystem::path& dir, std::string_view id) {
  return load_task(dir / (std::string(id) + ".json"));
}

bool pose_within(const Pose& pose, const Waypoint& wp) {
  return distance(pose.position, wp.pose.position) <= wp.tol_m &&
         orientation_error(pose.orientation, wp.pose.orientation) <= wp.tol_rad;
}

bool grip_satisfied(double gripper, GripAction grip) {
  switch (grip) {
    case GripAction::kNone: return true;
    case GripAction::kOpen: return gripper >= kGripOpenMin;
    case GripAction::kClose: return gripper <= kGripClosedMax;
  }
  return false;
}

bool waypoint_satisfied(const ArmState& arm, const Waypoint& wp) {
  return pose_within(arm.pose, wp) && grip_satisfied(arm.gripper, wp.grip);
}

TaskProgress task_progress(std::size_t completed_waypoints, const TaskSpec& task) {
  const std::size_t total = task.waypoints.size();
  if (total == 0) return {1.0, true};
  const std::size_t n = std::min(completed_waypoints, total);
  return {static_cast<double>(n) / static_cast<double>(total), n == total};
}

TaskTracker::TaskTracker(TaskSpec task) : task_(std::move(task)) {}

const Waypoint* TaskTracker::current() const {
  return done() ? nullptr : &task_.waypoints[log_.size()];
}

TaskProgress TaskTracker::update(const ArmState& arm, Millis now) {
  if (const Waypoint* wp = current(); wp && waypoint_satisfied(arm, *wp)) log_.push_back(now);
  return progress();
}

}  // namespace sipseq
