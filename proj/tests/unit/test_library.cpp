#include <doctest.h>

#include "sipseq/errors.hpp"
#include "sipseq/library.hpp"

using namespace sipseq;

namespace {

std::string library_error(std::vector<UserDefinedSequence> uds, Millis t_match = 1500) {
  try {
    SequenceLibrary lib(std::move(uds), t_match);
  } catch (const LibraryError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("trie nodes expose terminal flags and sorted candidates") {
  const SequenceLibrary lib({{"S2", {Code::kShortSip, Code::kLongSip}, ControlMode::kTranslateLr},
                             {"S1", {Code::kShortSip, Code::kLongSip, Code::kShortPuff},
                              ControlMode::kTranslateFb},
                             {"S3", {Code::kLongSip, Code::kShortSip}, ControlMode::kTranslateUd}});
  const auto& root = lib.node(SequenceLibrary::root());
  CHECK_FALSE(root.is_terminal());
  CHECK(root.candidates.empty());

  const auto n1 = lib.child(SequenceLibrary::root(), Code::kShortSip);
  REQUIRE(n1 != SequenceLibrary::kNoNode);
  CHECK(lib.node(n1).candidates == std::vector<std::string>{"S1", "S2"});
  CHECK_FALSE(lib.node(n1).is_terminal());

  const auto n12 = lib.child(n1, Code::kLongSip);
  REQUIRE(n12 != SequenceLibrary::kNoNode);
  CHECK(lib.node(n12).is_terminal());
  CHECK(lib.node(n12).has_descendants());
  CHECK(lib.sequences()[static_cast<std::size_t>(lib.node(n12).terminal)].id == "S2");

  const auto n121 = lib.child(n12, Code::kShortPuff);
  REQUIRE(n121 != SequenceLibrary::kNoNode);
  CHECK(lib.node(n121).is_terminal());
  CHECK_FALSE(lib.node(n121).has_descendants());

  CHECK(lib.child(SequenceLibrary::root(), Code::kLongPuff) == SequenceLibrary::kNoNode);
  CHECK(lib.find("S3")->mode == ControlMode::kTranslateUd);
  CHECK(lib.find("S9") == nullptr);
}

TEST_CASE("library validation") {
  const std::vector<Code> a{Code::kShortSip, Code::kShortSip};
  CHECK(library_error({{"A", a, ControlMode::kRotateX}}).empty());

  const auto dup = library_error({{"A", a, ControlMode::kRotateX}, {"B", a, ControlMode::kRotateY}});
  CHECK(dup.find("A") != std::string::npos);
  CHECK(dup.find("B") != std::string::npos);

  CHECK_FALSE(library_error({{"A", a, ControlMode::kRotateX},
                             {"A", {Code::kLongSip}, ControlMode::kRotateY}})
                  .empty());
  CHECK_FALSE(library_error({{"A", {}, ControlMode::kRotateX}}).empty());
  CHECK_FALSE(library_error({{"", a, ControlMode::kRotateX}}).empty());
  CHECK_FALSE(library_error({{"A", a, ControlMode::kRotateX}}, 0).empty());
  CHECK_THROWS_AS(SequenceLibrary({{"A", {}, ControlMode::kRotateX}}), ConfigError);
}

TEST_CASE("empty library has only a root") {
  const SequenceLibrary lib;
  CHECK(lib.empty());
  for (Code c : kAllCodes) CHECK(lib.child(SequenceLibrary::root(), c) == SequenceLibrary::kNoNode);
}

TEST_CASE("binding table keeps library order") {
  const SequenceLibrary lib({{"B", {Code::kLongPuff}, ControlMode::kFingers},
                             {"A", {Code::kShortSip, Code::kShortPuff}, ControlMode::kSavePoint}});
  const auto rows = binding_table(lib);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].id == "B");
  CHECK(rows[1].mode == ControlMode::kSavePoint);
  CHECK(format_codes(rows[1].codes) == "1,-1");
  CHECK(format_codes(std::vector<Code>{}) == "");
}
