#include "sipseq/gateway/server.hpp"

#include <atomic>
#include <csignal>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "sipseq/gateway/config_store.hpp"
#include "sipseq/gateway/registry.hpp"

namespace sipseq::gateway {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
namespace fs = std::filesystem;
using tcp = net::ip::tcp;
using Response = http::response<http::string_body>;
using Request = http::request<http::string_body>;

namespace {

std::int64_t wall_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::vector<std::string> split_path(std::string_view target) {
  const auto q = target.find('?');
  if (q != std::string_view::npos) target = target.substr(0, q);
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < target.size()) {
    while (i < target.size() && target[i] == '/') ++i;
    const auto j = target.find('/', i);
    const auto end = j == std::string_view::npos ? target.size() : j;
    if (end > i) parts.emplace_back(target.substr(i, end - i));
    i = end;
  }
  return parts;
}

std::string_view target_of(const Request& req) {
  return {req.target().data(), req.target().size()};
}

Response make_response(const Request& req, http::status status, std::string body,
                       std::string_view type = "application/json") {
  Response res{status, req.version()};
  res.set(http::field::server, "sipseq");
  res.set(http::field::content_type, std::string(type));
  res.keep_alive(req.keep_alive());
  res.body() = std::move(body);
  res.prepare_payload();
  return res;
}

Response json_response(const Request& req, http::status status, const json& body) {
  return make_response(req, status, body.dump());
}

Response error_response(const Request& req, http::status status, std::string_view message) {
  return json_response(req, status, json{{"error", message}});
}

std::string_view mime_type(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".map") return "application/json";
  return "application/octet-stream";
}

class WsConn;

// One live session: engine, tick timer and subscribers, all confined to the
// session strand.
class LiveSession : public std::enable_shared_from_this<LiveSession> {
 public:
  LiveSession(net::io_context& ioc, SessionDescriptor descriptor, SessionEngine engine,
              const fs::path& log_dir, std::chrono::milliseconds interval)
      : strand_(net::make_strand(ioc)),
        timer_(strand_),
        descriptor_(std::move(descriptor)),
        engine_(std::move(engine)),
        interval_(interval),
        inbound_path_(log_dir / (descriptor_.session_id + ".inbound.jsonl")),
        frames_path_(log_dir / (descriptor_.session_id + ".frames.jsonl")),
        inbound_file_(inbound_path_, std::ios::trunc),
        frames_file_(frames_path_, std::ios::trunc),
        log_(inbound_file_) {
    if (!inbound_file_ || !frames_file_) throw ServerError("cannot open session logs in " +
                                                           log_dir.string());
    log_.header(engine_);
  }

  void start() {
    net::dispatch(strand_, [self = shared_from_this()] {
      self->started_ = std::chrono::steady_clock::now();
      self->schedule();
    });
  }

  void input(std::string raw, std::weak_ptr<WsConn> from);
  void subscribe(std::shared_ptr<WsConn> conn);
  void unsubscribe(const WsConn* conn) {
    net::dispatch(strand_, [self = shared_from_this(), conn] {
      std::erase_if(self->subscribers_, [conn](const std::weak_ptr<WsConn>& w) {
        auto p = w.lock();
        return !p || p.get() == conn;
      });
    });
  }

  /// Closes on the strand, then hands the summary to `done`.
  void close(std::string reason, std::function<void(json)> done) {
    net::dispatch(strand_, [self = shared_from_this(), reason = std::move(reason),
                            done = std::move(done)] { done(self->finish(reason)); });
  }

  /// Only valid while no worker thread runs.
  json close_now(std::string_view reason) { return finish(reason); }

  const SessionDescriptor& descriptor() const { return descriptor_; }

 private:
  void schedule() {
    timer_.expires_at(started_ + interval_ * static_cast<long>(engine_.ticks() + 1));
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_) return;
      self->on_tick();
    });
  }

  void on_tick() {
    json frame = engine_.tick();
    frame[std::string(kWallClockKey)] = wall_ms();
    const auto text = frame.dump();
    frames_file_ << text << '\n';
    broadcast(text, true);
    schedule();
  }

  void broadcast(const std::string& text, bool droppable);
  json finish(std::string_view reason);

  net::strand<net::io_context::executor_type> strand_;
  net::steady_timer timer_;
  SessionDescriptor descriptor_;
  SessionEngine engine_;
  std::chrono::milliseconds interval_;
  std::chrono::steady_clock::time_point started_;
  fs::path inbound_path_;
  fs::path frames_path_;
  std::ofstream inbound_file_;
  std::ofstream frames_file_;
  InboundLog log_;
  std::vector<std::weak_ptr<WsConn>> subscribers_;
  bool closed_ = false;
};

// One WebSocket client. Outbound text goes through a FrameQueue and is
// written one message at a time on the connection's strand.
class WsConn : public std::enable_shared_from_this<WsConn> {
 public:
  WsConn(tcp::socket&& socket, std::size_t capacity)
      : ws_(std::move(socket)), queue_(capacity) {}

  void run(Request req, std::shared_ptr<LiveSession> session) {
    session_ = std::move(session);
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      if (!self->session_) {
        self->close_with(error_reply("unknown session").dump());
        return;
      }
      self->session_->subscribe(self);
      self->do_read();
    });
  }

  /// Thread-safe.
  void send(std::string text, bool droppable) {
    queue_.push(std::move(text), droppable);
    net::post(ws_.get_executor(), [self = shared_from_this()] { self->kick(); });
  }

  /// Thread-safe: sends `text` as the last message, then closes.
  void close_with(std::string text) {
    queue_.push(std::move(text), false);
    net::post(ws_.get_executor(), [self = shared_from_this()] {
      self->closing_ = true;
      self->kick();
    });
  }

 private:
  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        if (self->session_) self->session_->unsubscribe(self.get());
        return;
      }
      std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->session_->input(std::move(text), self);
      self->do_read();
    });
  }

  void kick() {
    if (writing_ || closed_) return;
    auto next = queue_.pop();
    if (!next) {
      if (closing_) {
        closed_ = true;
        ws_.async_close(websocket::close_code::normal,
                        [self = shared_from_this()](beast::error_code) {});
      }
      return;
    }
    writing_ = true;
    current_ = std::move(*next);
    ws_.text(true);
    ws_.async_write(net::buffer(current_),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->writing_ = false;
                      if (ec) {
                        self->closed_ = true;
                        return;
                      }
                      self->kick();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  FrameQueue queue_;
  std::shared_ptr<LiveSession> session_;
  std::string current_;
  bool writing_ = false;
  bool closing_ = false;
  bool closed_ = false;
};

void LiveSession::input(std::string raw, std::weak_ptr<WsConn> from) {
  net::dispatch(strand_, [self = shared_from_this(), raw = std::move(raw),
                          from = std::move(from)] {
    json reply;
    if (self->closed_) {
      reply = error_reply("session closed");
    } else {
      self->log_.input(self->engine_.ticks(), raw);
      reply = self->engine_.receive(raw);
    }
    if (auto conn = from.lock()) conn->send(reply.dump(), false);
  });
}

void LiveSession::subscribe(std::shared_ptr<WsConn> conn) {
  net::dispatch(strand_, [self = shared_from_this(), conn = std::move(conn)] {
    if (self->closed_) {
      conn->close_with(end_frame("session closed").dump());
      return;
    }
    const auto& engine = self->engine_;
    json hello = {{"type", "hello"},
                  {"session", descriptor_json(self->descriptor_)},
                  {"tick_ms", engine.tick_ms()},
                  {"t_ms", engine.now()},
                  {"bindings", bindings_json(*engine.config().library)},
                  {"task_spec", engine.task() ? task_to_json(*engine.task()) : json(nullptr)}};
    conn->send(hello.dump(), false);
    self->subscribers_.push_back(conn);
  });
}

void LiveSession::broadcast(const std::string& text, bool droppable) {
  std::erase_if(subscribers_, [](const std::weak_ptr<WsConn>& w) { return w.expired(); });
  for (const auto& w : subscribers_) {
    if (auto conn = w.lock()) conn->send(text, droppable);
  }
}

json LiveSession::finish(std::string_view reason) {
  json summary = {{"session_id", descriptor_.session_id},
                  {"ticks", engine_.ticks()},
                  {"t_ms", engine_.now()},
                  {"inbound_log", inbound_path_.string()},
                  {"frames_log", frames_path_.string()}};
  if (closed_) return summary;
  closed_ = true;
  timer_.cancel();
  log_.end(engine_.ticks(), reason);
  inbound_file_.close();
  frames_file_.close();
  const auto end = end_frame(reason).dump();
  for (const auto& w : subscribers_) {
    if (auto conn = w.lock()) conn->close_with(end);
  }
  subscribers_.clear();
  return summary;
}

}  // namespace

// Server ----------------------------------------------------------------------

struct Server::Impl {
  explicit Impl(ServerOptions opts)
      : options(std::move(opts)),
        acceptor(ioc),
        store(options.store_dir / "configs", options.default_config),
        log_dir(options.store_dir / "logs" / std::to_string(wall_ms())) {
    fs::create_directories(log_dir);
    beast::error_code ec;
    const auto address = net::ip::make_address(options.host, ec);
    if (ec) throw ServerError("bad host address '" + options.host + "'");
    const tcp::endpoint endpoint{address, options.port};
    acceptor.open(endpoint.protocol(), ec);
    if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor.bind(endpoint, ec);
    if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec) {
      throw ServerError("cannot listen on " + options.host + ":" + std::to_string(options.port) +
                        ": " + ec.message());
    }
  }

  void do_accept();
  void handle(Request req, std::function<void(Response)> send);
  void upgrade(tcp::socket socket, Request req);
  Response serve_static(const Request& req);
  Response create_session(const Request& req);

  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor;
  ConfigStore store;
  fs::path log_dir;
  SessionRegistry<LiveSession> registry;
  std::vector<std::thread> workers;
  bool stopped = false;
};

namespace {

class HttpConn : public std::enable_shared_from_this<HttpConn> {
 public:
  HttpConn(tcp::socket&& socket, Server::Impl& server)
      : stream_(std::move(socket)), server_(server) {}

  void run() {
    net::dispatch(stream_.get_executor(), [self = shared_from_this()] { self->do_read(); });
  }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       self->on_read(ec);
                     });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      beast::error_code ignored;
      stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
      return;
    }
    if (websocket::is_upgrade(req_)) {
      stream_.expires_never();
      server_.upgrade(stream_.release_socket(), std::move(req_));
      return;
    }
    server_.handle(std::move(req_), [self = shared_from_this()](Response res) {
      net::post(self->stream_.get_executor(),
                [self, res = std::move(res)]() mutable { self->write(std::move(res)); });
    });
  }

  void write(Response res) {
    res_ = std::make_shared<Response>(std::move(res));
    http::async_write(stream_, *res_,
                      [self = shared_from_this()](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (!self->res_->keep_alive()) {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                          return;
                        }
                        self->do_read();
                      });
  }

  beast::tcp_stream stream_;
  Server::Impl& server_;
  beast::flat_buffer buffer_;
  Request req_;
  std::shared_ptr<Response> res_;
};

}  // namespace

void Server::Impl::do_accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (ec == net::error::operation_aborted || !acceptor.is_open()) return;
    } else {
      std::make_shared<HttpConn>(std::move(socket), *this)->run();
    }
    do_accept();
  });
}

void Server::Impl::upgrade(tcp::socket socket, Request req) {
  const auto parts = split_path(target_of(req));
  std::shared_ptr<LiveSession> session;
  if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "ws") {
    if (auto entry = registry.find(parts[1])) session = entry->session;
  }
  std::make_shared<WsConn>(std::move(socket), options.frame_queue_capacity)
      ->run(std::move(req), std::move(session));
}

Response Server::Impl::create_session(const Request& req) {
  json body = json::object();
  if (!req.body().empty()) {
    body = json::parse(req.body(), nullptr, false);
    if (body.is_discarded() || !body.is_object()) {
      return error_response(req, http::status::bad_request, "body must be a JSON object");
    }
  }
  SessionDescriptor descriptor;
  try {
    const auto kind = parse_interface(body.value("interface", std::string("asp")));
    if (!kind) return error_response(req, http::status::bad_request, "interface must be asp or bsp");
    descriptor.kind = *kind;
    descriptor.config_name = body.value("config", std::string("default"));
    if (body.contains("task") && !body.at("task").is_null()) {
      descriptor.task_id = body.at("task").get<std::string>();
    }
  } catch (const json::exception& e) {
    return error_response(req, http::status::bad_request, e.what());
  }

  std::optional<EngineConfig> config;
  std::optional<TaskSpec> task;
  try {
    config = store.load(descriptor.config_name);
    if (descriptor.task_id) {
      if (!ConfigStore::valid_name(*descriptor.task_id)) {
        throw ConfigError("invalid task id '" + *descriptor.task_id + "'");
      }
      task = load_task_by_id(options.tasks_dir, *descriptor.task_id);
    }
  } catch (const ConfigError& e) {
    return error_response(req, http::status::bad_request, e.what());
  }

  descriptor.created_at_ms = wall_ms();
  auto entry = registry.create(descriptor, [&](const SessionDescriptor& d) {
    return std::make_shared<LiveSession>(
        ioc, d, SessionEngine(*config, d.kind, task, options.tick_ms), log_dir,
        options.tick_interval);
  });
  entry.session->start();
  return json_response(req, http::status::created, descriptor_json(entry.descriptor));
}

Response Server::Impl::serve_static(const Request& req) {
  if (!options.static_dir) return error_response(req, http::status::not_found, "not found");
  const auto parts = split_path(target_of(req));
  fs::path path = *options.static_dir;
  for (const auto& p : parts) {
    if (p == ".." || p == "." || p.find('\\') != std::string::npos) {
      return error_response(req, http::status::bad_request, "bad path");
    }
    path /= p;
  }
  if (parts.empty() || fs::is_directory(path)) path /= "index.html";
  std::ifstream in(path, std::ios::binary);
  if (!in) return error_response(req, http::status::not_found, "not found");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto res = make_response(req, http::status::ok, buf.str(), mime_type(path));
  if (req.method() == http::verb::head) res.body().clear();
  return res;
}

void Server::Impl::handle(Request req, std::function<void(Response)> send) {
  const auto parts = split_path(target_of(req));
  const auto method = req.method();
  try {
    if (parts.size() == 1 && parts[0] == "health") {
      if (method != http::verb::get) {
        return send(error_response(req, http::status::method_not_allowed, "use GET"));
      }
      return send(json_response(req, http::status::ok,
                                json{{"status", "ok"}, {"sessions", registry.size()}}));
    }

    if (!parts.empty() && parts[0] == "sessions") {
      if (parts.size() == 1) {
        if (method == http::verb::get) {
          json list = json::array();
          for (const auto& d : registry.list()) list.push_back(descriptor_json(d));
          return send(json_response(req, http::status::ok, list));
        }
        if (method == http::verb::post) return send(create_session(req));
        return send(error_response(req, http::status::method_not_allowed, "use GET or POST"));
      }
      if (parts.size() == 2) {
        if (method == http::verb::get) {
          auto entry = registry.find(parts[1]);
          if (!entry) return send(error_response(req, http::status::not_found, "unknown session"));
          return send(json_response(req, http::status::ok, descriptor_json(entry->descriptor)));
        }
        if (method == http::verb::delete_) {
          auto entry = registry.remove(parts[1]);
          if (!entry) return send(error_response(req, http::status::not_found, "unknown session"));
          auto shared_req = std::make_shared<Request>(std::move(req));
          entry->session->close("deleted", [shared_req, send](json summary) {
            send(json_response(*shared_req, http::status::ok, summary));
          });
          return;
        }
        return send(error_response(req, http::status::method_not_allowed, "use GET or DELETE"));
      }
    }

    if (!parts.empty() && parts[0] == "configs") {
      if (parts.size() == 1 && method == http::verb::get) {
        return send(json_response(req, http::status::ok, store.names()));
      }
      if (parts.size() == 2) {
        if (!ConfigStore::valid_name(parts[1])) {
          return send(error_response(req, http::status::bad_request, "invalid config name"));
        }
        if (method == http::verb::get) {
          auto text = store.get(parts[1]);
          if (!text) return send(error_response(req, http::status::not_found, "unknown config"));
          return send(make_response(req, http::status::ok, *text));
        }
        if (method == http::verb::put) {
          try {
            store.put(parts[1], req.body());
          } catch (const ConfigError& e) {
            return send(error_response(req, http::status::bad_request, e.what()));
          }
          return send(json_response(req, http::status::ok, json{{"name", parts[1]}}));
        }
      }
      return send(error_response(req, http::status::method_not_allowed, "unsupported method"));
    }

    if (method == http::verb::get || method == http::verb::head) return send(serve_static(req));
    return send(error_response(req, http::status::not_found, "not found"));
  } catch (const std::exception& e) {
    return send(error_response(req, http::status::internal_server_error, e.what()));
  }
}

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

const fs::path& Server::log_dir() const { return impl_->log_dir; }

void Server::start() {
  impl_->do_accept();
  const unsigned n = std::max(1u, impl_->options.threads);
  for (unsigned i = 0; i < n; ++i) {
    impl_->workers.emplace_back([this] { impl_->ioc.run(); });
  }
}

void Server::stop() {
  if (impl_->stopped) return;
  impl_->stopped = true;
  net::post(impl_->ioc, [this] {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
  });
  impl_->ioc.stop();
  for (auto& t : impl_->workers) t.join();
  impl_->workers.clear();
  for (auto& entry : impl_->registry.take_all()) entry.session->close_now("shutdown");
}

int run_until_signal(const ServerOptions& options) {
  Server server(options);
  server.start();
  std::cout << "sipseq gateway listening on " << options.host << ":" << server.port()
            << " (logs in " << server.log_dir().string() << ")" << std::endl;
  net::io_context signals_ioc;
  net::signal_set signals(signals_ioc, SIGINT, SIGTERM);
  signals.async_wait([](beast::error_code, int) {});
  signals_ioc.run();
  server.stop();
  std::cout << "sipseq gateway stopped" << std::endl;
  return 0;
}

}  // namespace sipseq::gateway
