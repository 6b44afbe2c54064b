#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sipseq/codes.hpp"
#include "sipseq/config.hpp"
#include "sipseq/errors.hpp"
#include "sipseq/task.hpp"
#include "sipseq/types.hpp"

namespace sipseq::gateway {

using nlohmann::json;

/// Malformed client message (bad JSON, unknown type, missing field).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

enum class MessageKind { kPress, kRelease, kSample };
std::string_view message_kind_name(MessageKind kind);

/// One inbound client message.
///   {"type": "press" | "release", "channel": "sip" | "puff", "t_ms": int}
///   {"type": "sample", "t_ms": int, "v": number}
struct InputMessage {
  MessageKind kind = MessageKind::kSample;
  Direction channel = Direction::kSip;  // press/release only
  Millis t_ms = 0;
  double v = 0.0;  // sample only
  bool operator==(const InputMessage&) const = default;
};

/// Throws ProtocolError.
InputMessage parse_input(std::string_view text);
std::string to_text(const InputMessage& message);

json ack_reply(std::uint64_t seq, const InputMessage& message);
json reject_reply(std::uint64_t seq, const InputMessage& message, std::string_view reason);
json error_reply(std::string_view reason);
json end_frame(std::string_view reason);

json task_to_json(const TaskSpec& task);
json bindings_json(const SequenceLibrary& library);

/// Key added by the server to every outbound frame; not part of the
/// deterministic content.
inline constexpr std::string_view kWallClockKey = "wall_ms";
json without_wall_clock(json frame);

}  // namespace sipseq::gateway
