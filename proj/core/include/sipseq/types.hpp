#pragma once

#include <cstdint>

namespace sipseq {

/// Milliseconds since session start. All engine clocks are injected by the caller.
using Millis = std::int64_t;

}  // namespace sipseq
