#include "sipseq/gateway/registry.hpp"

#include <algorithm>

namespace sipseq::gateway {

json descriptor_json(const SessionDescriptor& d) {
  return {{"session_id", d.session_id},
          {"interface", interface_name(d.kind)},
          {"config", d.config_name},
          {"task", d.task_id ? json(*d.task_id) : json(nullptr)},
          {"created_at_ms", d.created_at_ms},
          {"ws", "/sessions/" + d.session_id + "/ws"}};
}

void FrameQueue::push(std::string text, bool droppable) {
  std::lock_guard lock(mu_);
  items_.push_back({std::move(text), droppable});
  while (items_.size() > capacity_) {
    auto it = std::find_if(items_.begin(), items_.end(), [](const Item& i) { return i.droppable; });
    if (it == items_.end()) break;
    items_.erase(it);
    ++dropped_;
  }
}

std::optional<std::string> FrameQueue::pop() {
  std::lock_guard lock(mu_);
  if (items_.empty()) return std::nullopt;
  std::string text = std::move(items_.front().text);
  items_.pop_front();
  return text;
}

bool FrameQueue::empty() const {
  std::lock_guard lock(mu_);
  return items_.empty();
}

std::size_t FrameQueue::size() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

std::uint64_t FrameQueue::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

}  // namespace sipseq::gateway
