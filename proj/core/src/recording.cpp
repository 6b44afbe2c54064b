#include "sipseq/recording.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "sipseq/errors.hpp"

namespace sipseq {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::vector<Sample> read_recording(std::istream& in) {
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != "t_ms,v") throw ParseError(line_no, "expected header 't_ms,v'");
      header_seen = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError(line_no, "expected two comma-separated fields");
    }
    Sample s;
    if (!parse_number(text.substr(0, comma), s.t) || s.t < 0) {
      throw ParseError(line_no, "bad timestamp");
    }
    if (!parse_number(text.substr(comma + 1), s.v)) {
      throw ParseError(line_no, "bad voltage");
    }
    if (!samples.empty() && s.t <= samples.back().t) {
      throw ParseError(line_no, "timestamps must be strictly increasing");
    }
    samples.push_back(s);
  }
  return samples;
}

std::vector<Sample> read_recording(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open recording " + path.string());
  return read_recording(in);
}

void write_recording(std::ostream& out, std::span<const Sample> samples) {
  out << "t_ms,v\n";
  for (const Sample& s : samples) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), s.v);
    out << s.t << ',' << std::string_view(buf, ptr - buf) << '\n';
  }
}

void write_event_trace(std::ostream& out, std::span<const PeakEvent> events) {
  for (const PeakEvent& e : events) {
    out << e.onset_t << ',' << e.offset_t << ',' << to_int(e.code) << '\n';
  }
}

}  // namespace sipseq
