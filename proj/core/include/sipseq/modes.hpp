#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace sipseq {

/// Device control modes, declared in the order the auto-scroll baseline
/// cycles through them.
enum class ControlMode : std::uint8_t {
  kTranslateFb,
  kTranslateLr,
  kTranslateUd,
  kRotateX,
  kRotateY,
  kRotateZ,
  kFingers,
  kSavePoint,
  kGotoPoint,
};

inline constexpr std::size_t kModeCount = 9;

inline constexpr std::array<ControlMode, kModeCount> kAllModes = {
    ControlMode::kTranslateFb, ControlMode::kTranslateLr, ControlMode::kTranslateUd,
    ControlMode::kRotateX,     ControlMode::kRotateY,     ControlMode::kRotateZ,
    ControlMode::kFingers,     ControlMode::kSavePoint,   ControlMode::kGotoPoint,
};

/// save_point and goto_point fire once per entry; the rest drive an axis.
constexpr bool is_momentary(ControlMode mode) {
  return mode == ControlMode::kSavePoint || mode == ControlMode::kGotoPoint;
}

constexpr std::size_t mode_index(ControlMode mode) { return static_cast<std::size_t>(mode); }

std::string_view mode_name(ControlMode mode);
std::optional<ControlMode> parse_mode(std::string_view name);

}  // namespace sipseq
