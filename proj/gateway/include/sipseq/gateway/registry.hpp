#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sipseq/gateway/protocol.hpp"
#include "sipseq/pipeline.hpp"

namespace sipseq::gateway {

struct SessionDescriptor {
  std::string session_id;
  InterfaceKind kind = InterfaceKind::kAsp;
  std::string config_name;
  std::optional<std::string> task_id;
  std::int64_t created_at_ms = 0;  // wall clock, ms since epoch
};

json descriptor_json(const SessionDescriptor& d);

/// Owns the live sessions. Creation, lookup, listing and removal are
/// serialized here; the sessions themselves are never touched under the lock.
template <typename Session>
class SessionRegistry {
 public:
  struct Entry {
    SessionDescriptor descriptor;
    std::shared_ptr<Session> session;
  };

  /// Assigns the next id ("s1", "s2", ...), then calls `make(descriptor)`
  /// outside the lock and registers the result.
  template <typename Make>
  Entry create(SessionDescriptor descriptor, Make&& make) {
    {
      std::lock_guard lock(mu_);
      descriptor.session_id = "s" + std::to_string(++next_id_);
    }
    Entry entry{descriptor, make(descriptor)};
    std::lock_guard lock(mu_);
    sessions_.emplace(descriptor.session_id, entry);
    return entry;
  }

  std::optional<Entry> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<Entry> remove(const std::string& id) {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    Entry e = std::move(it->second);
    sessions_.erase(it);
    return e;
  }

  /// Sorted by creation order.
  std::vector<SessionDescriptor> list() const {
    std::lock_guard lock(mu_);
    std::vector<SessionDescriptor> out;
    for (const auto& [id, e] : sessions_) out.push_back(e.descriptor);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return std::stoull(a.session_id.substr(1)) < std::stoull(b.session_id.substr(1));
    });
    return out;
  }

  std::vector<Entry> take_all() {
    std::lock_guard lock(mu_);
    std::vector<Entry> out;
    for (auto& [id, e] : sessions_) out.push_back(std::move(e));
    sessions_.clear();
    return out;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
  }

 private:
  mutable std::mutex mu_;
  std::uint64_t next_id_ = 0;
  std::map<std::string, Entry> sessions_;
};

/// Outbound buffer for one stream. State frames may be dropped (oldest
/// first) when the consumer falls behind; replies and terminal frames are
/// always kept. Order is preserved.
class FrameQueue {
 public:
  explicit FrameQueue(std::size_t capacity = 64) : capacity_(capacity) {}

  void push(std::string text, bool droppable = true);
  std::optional<std::string> pop();
  bool empty() const;
  std::size_t size() const;
  std::uint64_t dropped() const;

 private:
  struct Item {
    std::string text;
    bool droppable;
  };
  mutable std::mutex mu_;
  std::size_t capacity_;
  std::deque<Item> items_;
  std::uint64_t dropped_ = 0;
};

}  // namespace sipseq::gateway
