#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace sipseq {

enum class Direction : std::uint8_t { kSip, kPuff };
enum class DurationClass : std::uint8_t { kShort, kLong };

/// The four-letter input alphabet. Sips are positive, puffs negative; the
/// magnitude encodes the duration class.
enum class Code : std::int8_t {
  kShortSip = 1,
  kLongSip = 2,
  kShortPuff = -1,
  kLongPuff = -2,
};

inline constexpr std::array<Code, 4> kAllCodes = {
    Code::kShortSip, Code::kLongSip, Code::kShortPuff, Code::kLongPuff};

constexpr Code make_code(Direction direction, DurationClass duration) {
  if (direction == Direction::kSip) {
    return duration == DurationClass::kShort ? Code::kShortSip : Code::kLongSip;
  }
  return duration == DurationClass::kShort ? Code::kShortPuff : Code::kLongPuff;
}

constexpr Direction direction_of(Code code) {
  return static_cast<int>(code) > 0 ? Direction::kSip : Direction::kPuff;
}

constexpr DurationClass duration_of(Code code) {
  return (code == Code::kShortSip || code == Code::kShortPuff) ? DurationClass::kShort
                                                               : DurationClass::kLong;
}

constexpr int to_int(Code code) { return static_cast<int>(code); }

/// Dense index in [0, 4) used by trie children.
constexpr std::size_t code_index(Code code) {
  switch (code) {
    case Code::kShortSip: return 0;
    case Code::kLongSip: return 1;
    case Code::kShortPuff: return 2;
    case Code::kLongPuff: return 3;
  }
  return 0;
}

std::optional<Code> code_from_int(int value);

/// Accepts "1", "2", "-1", "-2" and the names short_sip, long_sip,
/// short_puff, long_puff.
std::optional<Code> parse_code(std::string_view symbol);

/// Throws InputError for values outside the alphabet.
Code to_code(int value);

std::string_view code_name(Code code);
std::string_view direction_name(Direction direction);
std::string_view duration_name(DurationClass duration);

}  // namespace sipseq
