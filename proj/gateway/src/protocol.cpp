#include "sipseq/gateway/protocol.hpp"

namespace sipseq::gateway {

std::string_view message_kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::kPress: return "press";
    case MessageKind::kRelease: return "release";
    case MessageKind::kSample: return "sample";
  }
  return "?";
}

InputMessage parse_input(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ProtocolError("message is not valid JSON");
  if (!doc.is_object()) throw ProtocolError("message must be a JSON object");
  const auto type = doc.find("type");
  if (type == doc.end() || !type->is_string()) throw ProtocolError("message has no type");

  InputMessage m;
  const auto& name = type->get_ref<const std::string&>();
  if (name == "press") {
    m.kind = MessageKind::kPress;
  } else if (name == "release") {
    m.kind = MessageKind::kRelease;
  } else if (name == "sample") {
    m.kind = MessageKind::kSample;
  } else {
    throw ProtocolError("unknown message type '" + name + "'");
  }

  const auto t = doc.find("t_ms");
  if (t == doc.end() || !t->is_number_integer()) throw ProtocolError("t_ms must be an integer");
  m.t_ms = t->get<Millis>();
  if (m.t_ms < 0) throw ProtocolError("t_ms must be non-negative");

  if (m.kind == MessageKind::kSample) {
    const auto v = doc.find("v");
    if (v == doc.end() || !v->is_number()) throw ProtocolError("sample needs a numeric v");
    m.v = v->get<double>();
  } else {
    const auto ch = doc.find("channel");
    if (ch == doc.end() || !ch->is_string()) throw ProtocolError("channel must be sip or puff");
    if (*ch == "sip") {
      m.channel = Direction::kSip;
    } else if (*ch == "puff") {
      m.channel = Direction::kPuff;
    } else {
      throw ProtocolError("channel must be sip or puff");
    }
  }
  return m;
}

std::string to_text(const InputMessage& message) {
  json j = {{"type", message_kind_name(message.kind)}, {"t_ms", message.t_ms}};
  if (message.kind == MessageKind::kSample) {
    j["v"] = message.v;
  } else {
    j["channel"] = direction_name(message.channel);
  }
  return j.dump();
}

json ack_reply(std::uint64_t seq, const InputMessage& message) {
  return {{"type", "ack"},
          {"seq", seq},
          {"accepted", true},
          {"message", message_kind_name(message.kind)},
          {"t_ms", message.t_ms}};
}

json reject_reply(std::uint64_t seq, const InputMessage& message, std::string_view reason) {
  json j = ack_reply(seq, message);
  j["accepted"] = false;
  j["reason"] = reason;
  return j;
}

json error_reply(std::string_view reason) { return {{"type", "error"}, {"reason", reason}}; }

json end_frame(std::string_view reason) { return {{"type", "end"}, {"reason", reason}}; }

json task_to_json(const TaskSpec& task) {
  json wps = json::array();
  for (const auto& wp : task.waypoints) {
    wps.push_back({{"x", wp.pose.position.x},
                   {"y", wp.pose.position.y},
                   {"z", wp.pose.position.z},
                   {"roll", wp.pose.orientation.x},
                   {"pitch", wp.pose.orientation.y},
                   {"yaw", wp.pose.orientation.z},
                   {"grip", grip_name(wp.grip)},
                   {"tol_m", wp.tol_m},
                   {"tol_rad", wp.tol_rad}});
  }
  return {{"id", task.id}, {"description", task.description}, {"waypoints", wps}};
}

json bindings_json(const SequenceLibrary& library) {
  json rows = json::array();
  for (const auto& row : binding_table(library)) {
    json codes = json::array();
    for (Code c : row.codes) codes.push_back(to_int(c));
    rows.push_back({{"id", row.id}, {"codes", codes}, {"mode", mode_name(row.mode)}});
  }
  return rows;
}

json without_wall_clock(json frame) {
  if (frame.is_object()) frame.erase(std::string(kWallClockKey));
  return frame;
}

}  // namespace sipseq::gateway
