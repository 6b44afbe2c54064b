#include <doctest.h>

#include "sipseq/codes.hpp"
#include "sipseq/errors.hpp"
#include "sipseq/modes.hpp"

using namespace sipseq;

TEST_CASE("code table binds sign to direction and magnitude to duration") {
  CHECK(make_code(Direction::kSip, DurationClass::kShort) == Code::kShortSip);
  CHECK(make_code(Direction::kSip, DurationClass::kLong) == Code::kLongSip);
  CHECK(make_code(Direction::kPuff, DurationClass::kShort) == Code::kShortPuff);
  CHECK(make_code(Direction::kPuff, DurationClass::kLong) == Code::kLongPuff);
  CHECK(to_int(Code::kShortSip) == 1);
  CHECK(to_int(Code::kLongSip) == 2);
  CHECK(to_int(Code::kShortPuff) == -1);
  CHECK(to_int(Code::kLongPuff) == -2);
  for (Code c : kAllCodes) {
    CHECK(make_code(direction_of(c), duration_of(c)) == c);
    CHECK(code_from_int(to_int(c)) == c);
    CHECK(parse_code(code_name(c)) == c);
  }
}

TEST_CASE("code parsing rejects symbols outside the alphabet") {
  CHECK_FALSE(code_from_int(0));
  CHECK_FALSE(code_from_int(3));
  CHECK_FALSE(parse_code("3"));
  CHECK_FALSE(parse_code("sip"));
  CHECK(parse_code("-2") == Code::kLongPuff);
  CHECK(parse_code("+1") == Code::kShortSip);
  CHECK_THROWS_AS(to_code(3), InputError);
}

TEST_CASE("nine control modes in scroll order") {
  REQUIRE(kAllModes.size() == 9);
  CHECK(mode_name(kAllModes[0]) == "translate_fb");
  CHECK(mode_name(kAllModes[8]) == "goto_point");
  int momentary = 0;
  for (ControlMode m : kAllModes) {
    CHECK(parse_mode(mode_name(m)) == m);
    momentary += is_momentary(m) ? 1 : 0;
  }
  CHECK(momentary == 2);
  CHECK_FALSE(parse_mode("teleport"));
}
