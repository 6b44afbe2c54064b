#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sipseq/config.hpp"

namespace sipseq::gateway {

/// Directory of named configuration documents (`<dir>/<name>.json`).
/// Names are limited to letters, digits, '-' and '_'.
class ConfigStore {
 public:
  /// `fallback` is served as "default" when the directory has none.
  ConfigStore(std::filesystem::path dir, std::filesystem::path fallback = {});

  static bool valid_name(std::string_view name);

  std::vector<std::string> names() const;
  /// Raw document text, or nullopt if absent. Throws ConfigError for an
  /// invalid name.
  std::optional<std::string> get(std::string_view name) const;
  /// Validates the document with parse_config before writing it. Throws
  /// ConfigError (or LibraryError) without touching the store on failure.
  void put(std::string_view name, std::string_view text);
  /// Parsed configuration; throws ConfigError if absent or invalid.
  EngineConfig load(std::string_view name) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_of(std::string_view name) const;

  std::filesystem::path dir_;
  std::filesystem::path fallback_;
  mutable std::mutex mu_;
};

}  // namespace sipseq::gateway
