#include "sipseq/codes.hpp"

#include <charconv>
#include <string>

#include "sipseq/errors.hpp"

namespace sipseq {

std::optional<Code> code_from_int(int value) {
  switch (value) {
    case 1: return Code::kShortSip;
    case 2: return Code::kLongSip;
    case -1: return Code::kShortPuff;
    case -2: return Code::kLongPuff;
    default: return std::nullopt;
  }
}

std::optional<Code> parse_code(std::string_view symbol) {
  for (Code code : kAllCodes) {
    if (symbol == code_name(code)) return code;
  }
  int value = 0;
  const char* first = symbol.data();
  const char* last = symbol.data() + symbol.size();
  if (!symbol.empty() && symbol.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return code_from_int(value);
}

Code to_code(int value) {
  auto code = code_from_int(value);
  if (!code) {
    throw InputError("invalid event code " + std::to_string(value) +
                     " (expected one of 1, 2, -1, -2)");
  }
  return *code;
}

std::string_view code_name(Code code) {
  switch (code) {
    case Code::kShortSip: return "short_sip";
    case Code::kLongSip: return "long_sip";
    case Code::kShortPuff: return "short_puff";
    case Code::kLongPuff: return "long_puff";
  }
  return "?";
}

std::string_view direction_name(Direction direction) {
  return direction == Direction::kSip ? "sip" : "puff";
}

std::string_view duration_name(DurationClass duration) {
  return duration == DurationClass::kShort ? "short" : "long";
}

}  // namespace sipseq
