#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "sipseq/errors.hpp"
#include "sipseq/gateway/session.hpp"

namespace sipseq::gateway {

class ServerError : public Error {
 public:
  using Error::Error;
};

struct ServerOptions {
  unsigned short port = 8080;  // 0 picks a free port
  std::string host = "127.0.0.1";
  /// Holds `configs/` (the config store) and `logs/` (per-session logs).
  std::filesystem::path store_dir = "sipseq-store";
  std::filesystem::path tasks_dir;
  /// Served as config "default" when the store has none.
  std::filesystem::path default_config;
  std::optional<std::filesystem::path> static_dir;
  /// Wall-clock spacing of engine ticks; each tick advances engine time by
  /// `tick_ms` regardless.
  std::chrono::milliseconds tick_interval{kDefaultTickMs};
  Millis tick_ms = kDefaultTickMs;
  unsigned threads = 1;
  std::size_t frame_queue_capacity = 64;
};

/// HTTP + WebSocket session service.
///
///   GET    /health                 {"status":"ok","sessions":n}
///   GET    /sessions               list of session descriptors
///   POST   /sessions               {"interface":"asp|bsp","config":name?,"task":id?}
///   DELETE /sessions/{id}          closes the session and flushes its logs
///   GET    /configs                list of stored config names
///   GET    /configs/{name}         stored configuration document
///   PUT    /configs/{name}         validates and stores a document
///   WS     /sessions/{id}/ws       input messages in, replies and frames out
///   GET    /*                      files under `static_dir`, if set
class Server {
 public:
  /// Binds and listens; throws ServerError if the address is unavailable.
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;
  /// Runs the service on `options.threads` background threads.
  void start();
  /// Stops accepting, joins the workers and closes every session (flushing
  /// its logs). Idempotent.
  void stop();
  /// Directory this run writes session logs to.
  const std::filesystem::path& log_dir() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

/// Serves until SIGINT or SIGTERM, then shuts down cleanly. Returns the
/// process exit code.
int run_until_signal(const ServerOptions& options);

}  // namespace sipseq::gateway
