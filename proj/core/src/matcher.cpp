#include "sipseq/matcher.hpp"

#include "sipseq/errors.hpp"

namespace sipseq {

std::string_view outcome_name(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kIdle: return "idle";
    case OutcomeKind::kPending: return "pending";
    case OutcomeKind::kMatched: return "matched";
    case OutcomeKind::kReset: return "reset";
  }
  return "?";
}

std::string_view reset_reason_name(ResetReason reason) {
  return reason == ResetReason::kTimeout ? "timeout" : "no_candidate";
}

std::string describe(const MatchOutcome& outcome) {
  std::string out(outcome_name(outcome.kind));
  out += ',';
  switch (outcome.kind) {
    case OutcomeKind::kIdle: break;
    case OutcomeKind::kPending:
      for (std::size_t i = 0; i < outcome.candidates.size(); ++i) {
        if (i) out += '|';
        out += outcome.candidates[i];
      }
      break;
    case OutcomeKind::kMatched: out += outcome.matched_id; break;
    case OutcomeKind::kReset:
      if (outcome.reset_reason) out += reset_reason_name(*outcome.reset_reason);
      break;
  }
  return out;
}

SequenceMatcher::SequenceMatcher(std::shared_ptr<const SequenceLibrary> library)
    : library_(std::move(library)) {
  if (!library_) library_ = std::make_shared<const SequenceLibrary>();
}

void SequenceMatcher::check_time(Millis t) const {
  if (last_seen_t_ && t < *last_seen_t_) {
    throw InputError("matcher time went backwards: " + std::to_string(t) + " < " +
                     std::to_string(*last_seen_t_));
  }
}

MatchOutcome SequenceMatcher::take_match() {
  const auto& node = library_->node(node_);
  std::string id = library_->sequences()[static_cast<std::size_t>(node.terminal)].id;
  reset();
  return MatchOutcome::matched(std::move(id));
}

MatchOutcome SequenceMatcher::push(Code code, Millis t) {
  check_time(t);
  last_seen_t_ = t;
  last_event_t_ = t;

  const auto next = library_->child(node_, code);
  if (next == SequenceLibrary::kNoNode) {
    reset();
    return MatchOutcome::reset(ResetReason::kNoCandidate);
  }
  node_ = next;
  cs_.push_back(code);

  const auto& node = library_->node(node_);
  if (node.is_terminal() && !node.has_descendants()) return take_match();
  return MatchOutcome::pending(node.candidates);
}

MatchOutcome SequenceMatcher::tick(Millis now) {
  check_time(now);
  last_seen_t_ = now;
  if (cs_.empty()) return MatchOutcome::idle();
  const auto& node = library_->node(node_);
  if (now - last_event_t_ < library_->t_match_ms()) return MatchOutcome::pending(node.candidates);
  if (node.is_terminal()) return take_match();
  reset();
  return MatchOutcome::reset(ResetReason::kTimeout);
}

void SequenceMatcher::reset() {
  node_ = SequenceLibrary::root();
  cs_.clear();
}

std::span<const std::string> SequenceMatcher::candidates() const {
  if (cs_.empty()) return {};
  return library_->node(node_).candidates;
}

std::optional<Millis> SequenceMatcher::deadline() const {
  if (cs_.empty()) return std::nullopt;
  return last_event_t_ + library_->t_match_ms();
}

}  // namespace sipseq
