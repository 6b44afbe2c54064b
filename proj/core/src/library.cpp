#include "sipseq/library.hpp"

#include <algorithm>
#include <map>

#include "sipseq/errors.hpp"

namespace sipseq {

SequenceLibrary::SequenceLibrary() : nodes_(1) {}

SequenceLibrary::SequenceLibrary(std::vector<UserDefinedSequence> sequences, Millis t_match_ms)
    : sequences_(std::move(sequences)), t_match_ms_(t_match_ms), nodes_(1) {
  if (t_match_ms_ <= 0) throw LibraryError("t_match_ms must be positive");

  std::map<std::string, std::size_t> ids;
  for (std::size_t i = 0; i < sequences_.size(); ++i) {
    const auto& uds = sequences_[i];
    if (uds.id.empty()) throw LibraryError("sequence #" + std::to_string(i) + " has an empty id");
    if (uds.codes.empty()) throw LibraryError("sequence '" + uds.id + "' has no codes");
    if (!ids.emplace(uds.id, i).second) throw LibraryError("duplicate sequence id '" + uds.id + "'");

    std::int32_t at = root();
    for (Code code : uds.codes) {
      const auto slot = code_index(code);
      if (nodes_[static_cast<std::size_t>(at)].children[slot] == kNoNode) {
        nodes_[static_cast<std::size_t>(at)].children[slot] =
            static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
      }
      at = nodes_[static_cast<std::size_t>(at)].children[slot];
      nodes_[static_cast<std::size_t>(at)].candidates.push_back(uds.id);
    }
    auto& end = nodes_[static_cast<std::size_t>(at)];
    if (end.is_terminal()) {
      throw LibraryError("sequences '" + sequences_[static_cast<std::size_t>(end.terminal)].id +
                         "' and '" + uds.id + "' have identical codes " +
                         format_codes(uds.codes));
    }
    end.terminal = static_cast<std::int32_t>(i);
  }
  for (auto& node : nodes_) std::sort(node.candidates.begin(), node.candidates.end());
}

const UserDefinedSequence* SequenceLibrary::find(std::string_view id) const {
  for (const auto& uds : sequences_) {
    if (uds.id == id) return &uds;
  }
  return nullptr;
}

std::vector<BindingRow> binding_table(const SequenceLibrary& library) {
  std::vector<BindingRow> rows;
  rows.reserve(library.size());
  for (const auto& uds : library.sequences()) rows.push_back({uds.id, uds.codes, uds.mode});
  return rows;
}

std::string format_codes(std::span<const Code> codes) {
  std::string out;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(to_int(codes[i]));
  }
  return out;
}

}  // namespace sipseq
