#include "sipseq/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sipseq/errors.hpp"

namespace sipseq {
namespace {

using nlohmann::json;

Code parse_code_value(const json& value, const std::string& id) {
  std::optional<Code> code;
  if (value.is_number_integer()) {
    code = code_from_int(value.get<int>());
  } else if (value.is_string()) {
    code = parse_code(value.get<std::string>());
  }
  if (!code) throw LibraryError("sequence '" + id + "' has unknown code symbol " + value.dump());
  return *code;
}

std::vector<UserDefinedSequence> parse_sequences(const json& list) {
  if (!list.is_array()) throw LibraryError("'sequences' must be a list");
  std::vector<UserDefinedSequence> out;
  for (const auto& item : list) {
    UserDefinedSequence uds;
    uds.id = item.at("id").get<std::string>();
    const auto mode_text = item.at("mode").get<std::string>();
    const auto mode = parse_mode(mode_text);
    if (!mode) throw LibraryError("sequence '" + uds.id + "' has unknown mode '" + mode_text + "'");
    uds.mode = *mode;
    const auto& codes = item.at("codes");
    if (!codes.is_array()) throw LibraryError("sequence '" + uds.id + "' codes must be a list");
    for (const auto& c : codes) uds.codes.push_back(parse_code_value(c, uds.id));
    out.push_back(std::move(uds));
  }
  return out;
}

template <typename T>
void read_opt(const json& obj, const char* key, T& field) {
  if (obj.contains(key)) field = obj.at(key).get<T>();
}

Vec3 read_vec3(const json& v) {
  return {v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration document: ") + e.what());
  }
}

}  // namespace

void VirtualUserModel::validate(const DetectorConfig& detector) const {
  if (!(short_peak_ms < detector.long_threshold_ms && detector.long_threshold_ms <= long_peak_ms)) {
    throw ConfigError("virtual user needs short_peak_ms < long_threshold_ms <= long_peak_ms");
  }
  if (short_peak_ms < detector.debounce_ms) {
    throw ConfigError("virtual user short_peak_ms is below the detector debounce");
  }
  if (long_peak_ms >= detector.max_peak_ms) {
    throw ConfigError("virtual user long_peak_ms must stay below max_peak_ms");
  }
  if (inter_peak_gap_ms <= 0 || reaction_mean_ms < 0 || reaction_sd_ms < 0) {
    throw ConfigError("virtual user timings must be non-negative (gap positive)");
  }
  if (!(miss_probability >= 0.0 && miss_probability < 1.0)) {
    throw ConfigError("virtual user miss_probability must be in [0, 1)");
  }
}

void EngineConfig::validate() const {
  detector.validate();
  arm.validate();
  user.validate(detector);
  if (!library) throw ConfigError("configuration has no sequence library");
  if (timers.t_idle_ms <= 0 || timers.scroll_period_ms <= 0 || timers.t_match_ms <= 0) {
    throw ConfigError("timers must be positive");
  }
  if (library->t_match_ms() != timers.t_match_ms) {
    throw ConfigError("library t_match_ms disagrees with timers.t_match_ms");
  }
  if (sample_period_ms <= 0) throw ConfigError("sample_period_ms must be positive");
}

std::shared_ptr<const SequenceLibrary> default_library(Millis t_match_ms) {
  using C = Code;
  using M = ControlMode;
  return std::make_shared<const SequenceLibrary>(
      std::vector<UserDefinedSequence>{
          {"fb", {C::kShortSip, C::kShortSip, C::kShortSip}, M::kTranslateFb},
          {"lr", {C::kShortSip, C::kShortSip, C::kShortPuff}, M::kTranslateLr},
          {"ud", {C::kShortSip, C::kShortPuff}, M::kTranslateUd},
          {"rx", {C::kShortPuff, C::kShortPuff}, M::kRotateX},
          {"ry", {C::kShortPuff, C::kShortSip}, M::kRotateY},
          {"rz", {C::kShortPuff, C::kLongSip}, M::kRotateZ},
          {"fingers", {C::kLongSip}, M::kFingers},
          {"save", {C::kLongPuff, C::kShortSip}, M::kSavePoint},
          {"goto", {C::kLongPuff, C::kShortPuff}, M::kGotoPoint},
      },
      t_match_ms);
}

EngineConfig default_config() {
  EngineConfig config;
  config.library = default_library(config.timers.t_match_ms);
  return config;
}

SequenceLibrary library_load(std::string_view json_text) {
  const json doc = parse_document(json_text);
  Millis t_match = SequenceLibrary::kDefaultMatchTimeoutMs;
  try {
    if (doc.contains("timers")) read_opt(doc.at("timers"), "t_match_ms", t_match);
    return SequenceLibrary(parse_sequences(doc.value("sequences", json::array())), t_match);
  } catch (const json::exception& e) {
    throw LibraryError(std::string("bad sequence library: ") + e.what());
  }
}

EngineConfig parse_config(std::string_view json_text) {
  const json doc = parse_document(json_text);
  EngineConfig config;
  try {
    if (doc.contains("timers")) {
      const auto& t = doc.at("timers");
      read_opt(t, "t_match_ms", config.timers.t_match_ms);
      read_opt(t, "t_idle_ms", config.timers.t_idle_ms);
      read_opt(t, "scroll_period_ms", config.timers.scroll_period_ms);
    }
    if (doc.contains("detector")) {
      const auto& d = doc.at("detector");
      auto& c = config.detector;
      read_opt(d, "neutral_v", c.neutral_v);
      read_opt(d, "puff_on_v", c.puff_on_v);
      read_opt(d, "puff_off_v", c.puff_off_v);
      read_opt(d, "sip_on_v", c.sip_on_v);
      read_opt(d, "sip_off_v", c.sip_off_v);
      read_opt(d, "debounce_ms", c.debounce_ms);
      read_opt(d, "long_threshold_ms", c.long_threshold_ms);
      read_opt(d, "max_peak_ms", c.max_peak_ms);
    }
    if (doc.contains("arm")) {
      const auto& a = doc.at("arm");
      auto& c = config.arm;
      if (a.contains("workspace_min")) c.workspace_min = read_vec3(a.at("workspace_min"));
      if (a.contains("workspace_max")) c.workspace_max = read_vec3(a.at("workspace_max"));
      read_opt(a, "linear_rate", c.linear_rate);
      read_opt(a, "angular_rate", c.angular_rate);
      read_opt(a, "gripper_rate", c.gripper_rate);
      if (a.contains("home_position")) c.home.position = read_vec3(a.at("home_position"));
      if (a.contains("home_orientation")) c.home.orientation = read_vec3(a.at("home_orientation"));
      read_opt(a, "home_gripper", c.home_gripper);
    }
    if (doc.contains("user")) {
      const auto& u = doc.at("user");
      auto& c = config.user;
      read_opt(u, "reaction_mean_ms", c.reaction_mean_ms);
      read_opt(u, "reaction_sd_ms", c.reaction_sd_ms);
      read_opt(u, "short_peak_ms", c.short_peak_ms);
      read_opt(u, "long_peak_ms", c.long_peak_ms);
      read_opt(u, "inter_peak_gap_ms", c.inter_peak_gap_ms);
      read_opt(u, "miss_probability", c.miss_probability);
      read_opt(u, "rng_seed", c.rng_seed);
    }
    read_opt(doc, "sample_period_ms", config.sample_period_ms);
    if (doc.contains("sequences")) {
      config.library = std::make_shared<const SequenceLibrary>(
          parse_sequences(doc.at("sequences")), config.timers.t_match_ms);
    } else {
      config.library = default_library(config.timers.t_match_ms);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration document: ") + e.what());
  }
  config.validate();
  return config;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const EngineConfig& config) {
  json doc;
  json seqs = json::array();
  for (const auto& uds : config.library->sequences()) {
    json codes = json::array();
    for (Code c : uds.codes) codes.push_back(to_int(c));
    seqs.push_back({{"id", uds.id}, {"codes", codes}, {"mode", mode_name(uds.mode)}});
  }
  doc["sequences"] = seqs;
  doc["timers"] = {{"t_match_ms", config.timers.t_match_ms},
                   {"t_idle_ms", config.timers.t_idle_ms},
                   {"scroll_period_ms", config.timers.scroll_period_ms}};
  const auto& d = config.detector;
  doc["detector"] = {{"neutral_v", d.neutral_v},     {"puff_on_v", d.puff_on_v},
                     {"puff_off_v", d.puff_off_v},   {"sip_on_v", d.sip_on_v},
                     {"sip_off_v", d.sip_off_v},     {"debounce_ms", d.debounce_ms},
                     {"long_threshold_ms", d.long_threshold_ms},
                     {"max_peak_ms", d.max_peak_ms}};
  const auto& a = config.arm;
  doc["arm"] = {{"workspace_min", vec3_json(a.workspace_min)},
                {"workspace_max", vec3_json(a.workspace_max)},
                {"linear_rate", a.linear_rate},
                {"angular_rate", a.angular_rate},
                {"gripper_rate", a.gripper_rate},
                {"home_position", vec3_json(a.home.position)},
                {"home_orientation", vec3_json(a.home.orientation)},
                {"home_gripper", a.home_gripper}};
  const auto& u = config.user;
  doc["user"] = {{"reaction_mean_ms", u.reaction_mean_ms},
                 {"reaction_sd_ms", u.reaction_sd_ms},
                 {"short_peak_ms", u.short_peak_ms},
                 {"long_peak_ms", u.long_peak_ms},
                 {"inter_peak_gap_ms", u.inter_peak_gap_ms},
                 {"miss_probability", u.miss_probability},
                 {"rng_seed", u.rng_seed}};
  doc["sample_period_ms"] = config.sample_period_ms;
  return doc.dump(2);
}

}  // namespace sipseq
