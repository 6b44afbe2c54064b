#include <doctest.h>

#include <filesystem>

#include "sipseq/config.hpp"
#include "sipseq/errors.hpp"

using namespace sipseq;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(SIPSEQ_DATA_DIR) / "configs";

void check_same(const EngineConfig& a, const EngineConfig& b) {
  CHECK(a.detector == b.detector);
  CHECK(a.timers == b.timers);
  CHECK(a.arm == b.arm);
  CHECK(a.user == b.user);
  CHECK(a.sample_period_ms == b.sample_period_ms);
  REQUIRE(a.library);
  REQUIRE(b.library);
  CHECK(a.library->t_match_ms() == b.library->t_match_ms());
  CHECK(binding_table(*a.library) == binding_table(*b.library));
}

}  // namespace

TEST_CASE("shipped default document equals the built-in defaults") {
  check_same(load_config(kConfigs / "default.json"), default_config());
}

TEST_CASE("default library binds all nine modes without prefixes") {
  const auto lib = default_library();
  REQUIRE(lib->size() == 9);
  const auto rows = binding_table(*lib);
  for (std::size_t i = 0; i < 9; ++i) CHECK(rows[i].mode == kAllModes[i]);
  for (const auto& a : lib->sequences()) {
    for (const auto& b : lib->sequences()) {
      if (&a == &b) continue;
      const bool prefix = a.codes.size() < b.codes.size() &&
                          std::equal(a.codes.begin(), a.codes.end(), b.codes.begin());
      CHECK_FALSE(prefix);
    }
  }
}

TEST_CASE("serialization round-trips") {
  check_same(parse_config(config_to_json(default_config())), default_config());
  const auto walk = load_config(kConfigs / "walkthrough.json");
  check_same(parse_config(config_to_json(walk)), walk);
  CHECK(walk.library->size() == 3);
}

TEST_CASE("missing sections fall back to defaults") {
  const auto c = parse_config(R"({"timers": {"t_idle_ms": 4000}})");
  CHECK(c.timers.t_idle_ms == 4000);
  CHECK(c.timers.t_match_ms == 1500);
  CHECK(c.library->size() == 9);
  CHECK(c.detector == DetectorConfig{});
}

TEST_CASE("library_load accepts symbolic codes") {
  const auto lib = library_load(
      R"({"sequences": [{"id": "A", "codes": ["short_sip", "-2"], "mode": "fingers"},
                        {"id": "B", "codes": [2], "mode": "rotate_y"}],
          "timers": {"t_match_ms": 900}})");
  CHECK(lib.size() == 2);
  CHECK(lib.t_match_ms() == 900);
  CHECK(lib.find("A")->codes == std::vector<Code>{Code::kShortSip, Code::kLongPuff});
}

TEST_CASE("bad configuration documents are rejected") {
  CHECK_THROWS_AS(library_load(R"({"sequences": [{"id": "A", "codes": [3], "mode": "fingers"}]})"),
                  LibraryError);
  CHECK_THROWS_AS(library_load(R"({"sequences": [{"id": "A", "codes": [1], "mode": "fly"}]})"),
                  LibraryError);
  CHECK_THROWS_AS(library_load(R"({"sequences": [{"id": "A", "codes": [1], "mode": "fingers"},
                                                {"id": "B", "codes": [1], "mode": "rotate_x"}]})"),
                  LibraryError);
  CHECK_THROWS_AS(library_load("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"detector": {"puff_on_v": 2.0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"timers": {"t_idle_ms": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"timers": {"t_idle_ms": "soon"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"user": {"short_peak_ms": 450}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"sample_period_ms": 0})"), ConfigError);
  CHECK_THROWS_AS(load_config(kConfigs / "missing.json"), ConfigError);
}
