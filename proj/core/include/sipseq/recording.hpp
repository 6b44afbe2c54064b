#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "sipseq/signal.hpp"

namespace sipseq {

/// Reads a `t_ms,v` recording: header line `t_ms,v`, then one sample per line.
/// Blank lines are skipped. Throws ParseError naming the offending line for
/// a bad header, a malformed record, or a non-increasing timestamp.
std::vector<Sample> read_recording(std::istream& in);
std::vector<Sample> read_recording(const std::filesystem::path& path);

void write_recording(std::ostream& out, std::span<const Sample> samples);

/// Event trace: one `onset_t,offset_t,code` record per line, no header.
void write_event_trace(std::ostream& out, std::span<const PeakEvent> events);

}  // namespace sipseq
