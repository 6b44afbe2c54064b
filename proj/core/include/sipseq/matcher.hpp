#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sipseq/codes.hpp"
#include "sipseq/library.hpp"
#include "sipseq/types.hpp"

namespace sipseq {

enum class OutcomeKind { kIdle, kPending, kMatched, kReset };
enum class ResetReason { kTimeout, kNoCandidate };

struct MatchOutcome {
  OutcomeKind kind = OutcomeKind::kIdle;
  std::vector<std::string> candidates;  // pending only, sorted by id
  std::string matched_id;               // matched only
  std::optional<ResetReason> reset_reason;  // reset only

  static MatchOutcome idle() { return {}; }
  static MatchOutcome pending(std::vector<std::string> candidates) {
    return {OutcomeKind::kPending, std::move(candidates), {}, std::nullopt};
  }
  static MatchOutcome matched(std::string id) {
    return {OutcomeKind::kMatched, {}, std::move(id), std::nullopt};
  }
  static MatchOutcome reset(ResetReason reason) {
    return {OutcomeKind::kReset, {}, {}, reason};
  }

  bool operator==(const MatchOutcome&) const = default;
};

std::string_view outcome_name(OutcomeKind kind);
std::string_view reset_reason_name(ResetReason reason);

/// `kind` plus its detail: candidate ids joined by '|', the matched id, or the
/// reset reason. Idle has an empty detail.
std::string describe(const MatchOutcome& outcome);

/// Online matcher of event codes against a SequenceLibrary.
///
/// The current sequence (CS) accumulates codes since the last match or reset.
/// A push that lands on a terminal trie node with no descendants matches at
/// once. Landing on a node that still has descendants leaves the outcome
/// pending; ticking past `t_match_ms` after the last push then either matches
/// the exact sequence (terminal node) or resets with a timeout. A push that
/// falls off the trie resets the CS and the offending code is discarded.
class SequenceMatcher {
 public:
  explicit SequenceMatcher(std::shared_ptr<const SequenceLibrary> library);

  /// `t` is the time the event completed (the peak's offset). Throws
  /// InputError if `t` precedes the last push or tick.
  MatchOutcome push(Code code, Millis t);

  /// Throws InputError if `now` precedes the last push or tick.
  MatchOutcome tick(Millis now);

  void reset();

  std::span<const Code> current_sequence() const { return cs_; }
  /// Candidates for the current CS; empty when the CS is empty.
  std::span<const std::string> candidates() const;
  /// When a pending CS will time out; nullopt for an empty CS.
  std::optional<Millis> deadline() const;

  const SequenceLibrary& library() const { return *library_; }
  std::shared_ptr<const SequenceLibrary> library_ptr() const { return library_; }

 private:
  void check_time(Millis t) const;
  MatchOutcome take_match();

  std::shared_ptr<const SequenceLibrary> library_;
  std::int32_t node_ = SequenceLibrary::root();
  std::vector<Code> cs_;
  Millis last_event_t_ = 0;
  std::optional<Millis> last_seen_t_;
};

}  // namespace sipseq
