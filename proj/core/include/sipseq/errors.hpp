#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sipseq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an ordering or domain precondition. The object that threw
/// is left exactly as it was before the call.
class InputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-defined sequence library (duplicates, bad symbols, unknown modes).
class LibraryError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Malformed line in a text input file. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SimulationError : public Error {
 public:
  using Error::Error;
};

class StatsError : public Error {
 public:
  using Error::Error;
};

}  // namespace sipseq
