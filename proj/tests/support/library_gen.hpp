#pragma once
// Library and schedule generators shared by the matcher property tests and
// the acceptance run.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "reference_matcher.hpp"
#include "sipseq/library.hpp"
#include "sipseq/matcher.hpp"

namespace sipseq::testing {

/// Every distinct code list of length 1..max_len, shortest first.
inline std::vector<std::vector<Code>> all_code_lists(std::size_t max_len) {
  std::vector<std::vector<Code>> out;
  std::vector<std::vector<Code>> layer{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<Code>> next;
    for (const auto& prefix : layer) {
      for (Code c : kAllCodes) {
        auto seq = prefix;
        seq.push_back(c);
        next.push_back(seq);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline std::vector<UserDefinedSequence> make_library(const std::vector<std::vector<Code>>& lists) {
  std::vector<UserDefinedSequence> uds;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    uds.push_back({"S" + std::to_string(i + 1), lists[i], kAllModes[i % kAllModes.size()]});
  }
  return uds;
}

/// All libraries with up to `max_uds` distinct sequences drawn from `pool`,
/// including the empty one.
inline std::vector<std::vector<UserDefinedSequence>> all_libraries(
    const std::vector<std::vector<Code>>& pool, std::size_t max_uds) {
  std::vector<std::vector<UserDefinedSequence>> out;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    std::vector<std::vector<Code>> lists;
    for (auto i : pick) lists.push_back(pool[i]);
    out.push_back(make_library(lists));
    if (pick.size() == max_uds) return;
    for (std::size_t i = from; i < pool.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline std::vector<UserDefinedSequence> random_library(std::mt19937_64& rng, std::size_t max_uds,
                                                       std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> count(1, max_uds);
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::size_t> sym(0, 3);
  std::set<std::vector<Code>> seen;
  const std::size_t want = count(rng);
  while (seen.size() < want) {
    std::vector<Code> seq(len(rng));
    for (auto& c : seq) c = kAllCodes[sym(rng)];
    seen.insert(seq);
  }
  std::vector<std::vector<Code>> lists(seen.begin(), seen.end());
  std::shuffle(lists.begin(), lists.end(), rng);
  return make_library(lists);
}

struct Step {
  bool is_push = true;
  Code code = Code::kShortSip;
  Millis dt = 0;  // time since the previous step
};

/// Gaps straddle the default 1500 ms timeout, including the boundary itself.
inline constexpr Millis kStepGaps[] = {100, 1499, 1500, 2500};

inline std::vector<Step> random_schedule(std::mt19937_64& rng, std::size_t max_steps) {
  std::uniform_int_distribution<std::size_t> steps(1, max_steps);
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_int_distribution<std::size_t> gap(0, std::size(kStepGaps) - 1);
  std::vector<Step> out(steps(rng));
  for (auto& s : out) {
    const int k = kind(rng);
    s.is_push = k < 4;
    s.code = kAllCodes[static_cast<std::size_t>(k % 4)];
    s.dt = kStepGaps[gap(rng)];
  }
  return out;
}

/// Every schedule of exactly `n` steps over a reduced step alphabet: a push
/// of any code after a short or timed-out gap, or a tick at either gap.
inline std::vector<std::vector<Step>> all_schedules(std::size_t n) {
  std::vector<Step> alphabet;
  for (Millis dt : {Millis{100}, Millis{1500}}) {
    for (Code c : kAllCodes) alphabet.push_back({true, c, dt});
    alphabet.push_back({false, Code::kShortSip, dt});
  }
  std::vector<std::vector<Step>> out{{}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<Step>> next;
    for (const auto& prefix : out) {
      for (const auto& s : alphabet) {
        auto sched = prefix;
        sched.push_back(s);
        next.push_back(std::move(sched));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Runs one schedule through both matchers. Before each push both are ticked
/// at the push time, the way the controller drives them. Returns the index of
/// the first diverging outcome, or -1.
inline int first_divergence(const std::vector<UserDefinedSequence>& uds, Millis t_match,
                            const std::vector<Step>& schedule) {
  const auto lib = uds.empty() ? std::make_shared<const SequenceLibrary>()
                               : std::make_shared<const SequenceLibrary>(uds, t_match);
  SequenceMatcher fast(lib);
  ReferenceMatcher slow(uds, t_match);
  Millis t = 0;
  int index = 0;
  for (const auto& s : schedule) {
    t += s.dt;
    if (fast.tick(t) != slow.tick(t)) return index;
    if (s.is_push && fast.push(s.code, t) != slow.push(s.code, t)) return index;
    const auto cs = fast.current_sequence();
    if (!std::equal(cs.begin(), cs.end(), slow.current().begin(), slow.current().end())) {
      return index;
    }
    ++index;
  }
  return -1;
}

}  // namespace sipseq::testing
