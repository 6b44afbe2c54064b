#pragma once

#include "sipseq/types.hpp"

namespace sipseq {

struct SessionMetrics {
  Millis completion_ms = 0;
  Millis moving_ms = 0;  // time with a non-zero command direction or a running goto
  Millis wasted_ms = 0;  // completion_ms - moving_ms
  int mode_selection_count = 0;
  int reset_count = 0;

  bool operator==(const SessionMetrics&) const = default;
};

}  // namespace sipseq
