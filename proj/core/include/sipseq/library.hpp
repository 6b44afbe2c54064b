#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sipseq/codes.hpp"
#include "sipseq/modes.hpp"
#include "sipseq/types.hpp"

namespace sipseq {

struct UserDefinedSequence {
  std::string id;
  std::vector<Code> codes;
  ControlMode mode = ControlMode::kTranslateFb;

  bool operator==(const UserDefinedSequence&) const = default;
};

/// A validated set of user-defined sequences compiled into a trie over the
/// four-letter alphabet.
///
/// Each trie node knows whether it terminates a sequence and which sequences
/// pass through it, so the matcher reads every decision directly off the
/// node it lands on. A sequence may be a proper prefix of another; identical
/// code lists and identical ids are rejected.
class SequenceLibrary {
 public:
  static constexpr Millis kDefaultMatchTimeoutMs = 1500;
  static constexpr std::int32_t kNoNode = -1;

  struct Node {
    std::array<std::int32_t, 4> children{kNoNode, kNoNode, kNoNode, kNoNode};
    /// Index into sequences() of the sequence ending here, or -1.
    std::int32_t terminal = -1;
    /// Ids of every sequence having this node's path as a prefix, sorted.
    std::vector<std::string> candidates;

    bool is_terminal() const { return terminal >= 0; }
    bool has_descendants() const {
      for (auto c : children) {
        if (c != kNoNode) return true;
      }
      return false;
    }
  };

  /// Empty library: nothing ever matches.
  SequenceLibrary();

  /// Throws LibraryError on empty code lists, duplicate code lists (naming
  /// both ids), duplicate ids, or a non-positive timeout.
  explicit SequenceLibrary(std::vector<UserDefinedSequence> sequences,
                           Millis t_match_ms = kDefaultMatchTimeoutMs);

  std::span<const UserDefinedSequence> sequences() const { return sequences_; }
  std::size_t size() const { return sequences_.size(); }
  bool empty() const { return sequences_.empty(); }
  Millis t_match_ms() const { return t_match_ms_; }

  const UserDefinedSequence* find(std::string_view id) const;

  static constexpr std::int32_t root() { return 0; }
  const Node& node(std::int32_t index) const { return nodes_[static_cast<std::size_t>(index)]; }
  std::int32_t child(std::int32_t index, Code code) const {
    return node(index).children[code_index(code)];
  }

 private:
  std::vector<UserDefinedSequence> sequences_;
  Millis t_match_ms_ = kDefaultMatchTimeoutMs;
  std::vector<Node> nodes_;
};

/// Display row: one per sequence, in library order.
struct BindingRow {
  std::string id;
  std::vector<Code> codes;
  ControlMode mode;

  bool operator==(const BindingRow&) const = default;
};

std::vector<BindingRow> binding_table(const SequenceLibrary& library);

/// "1,2,-1" style rendering.
std::string format_codes(std::span<const Code> codes);

}  // namespace sipseq
