#include "sipseq/gateway/config_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sipseq/errors.hpp"

namespace sipseq::gateway {
namespace fs = std::filesystem;

namespace {

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ConfigStore::ConfigStore(fs::path dir, fs::path fallback)
    : dir_(std::move(dir)), fallback_(std::move(fallback)) {
  fs::create_directories(dir_);
}

bool ConfigStore::valid_name(std::string_view name) {
  if (name.empty() || name.size() > 64) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '_';
  });
}

fs::path ConfigStore::path_of(std::string_view name) const {
  if (!valid_name(name)) throw ConfigError("invalid config name '" + std::string(name) + "'");
  return dir_ / (std::string(name) + ".json");
}

std::vector<std::string> ConfigStore::names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.path().extension() != ".json") continue;
    const auto stem = entry.path().stem().string();
    if (valid_name(stem)) out.push_back(stem);
  }
  if (!fallback_.empty() && std::find(out.begin(), out.end(), "default") == out.end()) {
    out.push_back("default");
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> ConfigStore::get(std::string_view name) const {
  const auto path = path_of(name);
  std::lock_guard lock(mu_);
  if (auto text = read_file(path)) return text;
  if (name == "default" && !fallback_.empty()) return read_file(fallback_);
  return std::nullopt;
}

void ConfigStore::put(std::string_view name, std::string_view text) {
  const auto path = path_of(name);
  parse_config(text);
  std::lock_guard lock(mu_);
  const auto tmp = fs::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw ConfigError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

EngineConfig ConfigStore::load(std::string_view name) const {
  auto text = get(name);
  if (!text) throw ConfigError("no config named '" + std::string(name) + "'");
  return parse_config(*text);
}

}  // namespace sipseq::gateway
