#include "sipseq/modes.hpp"

namespace sipseq {

std::string_view mode_name(ControlMode mode) {
  switch (mode) {
    case ControlMode::kTranslateFb: return "translate_fb";
    case ControlMode::kTranslateLr: return "translate_lr";
    case ControlMode::kTranslateUd: return "translate_ud";
    case ControlMode::kRotateX: return "rotate_x";
    case ControlMode::kRotateY: return "rotate_y";
    case ControlMode::kRotateZ: return "rotate_z";
    case ControlMode::kFingers: return "fingers";
    case ControlMode::kSavePoint: return "save_point";
    case ControlMode::kGotoPoint: return "goto_point";
  }
  return "?";
}

std::optional<ControlMode> parse_mode(std::string_view name) {
  for (ControlMode mode : kAllModes) {
    if (mode_name(mode) == name) return mode;
  }
  return std::nullopt;
}

}  // namespace sipseq
