#include <doctest.h>

#include <algorithm>
#include <random>

#include "library_gen.hpp"
#include "sipseq/errors.hpp"
#include "sipseq/matcher.hpp"

using namespace sipseq;
using namespace sipseq::testing;

namespace {

std::shared_ptr<const SequenceLibrary> walkthrough_library() {
  return std::make_shared<const SequenceLibrary>(std::vector<UserDefinedSequence>{
      {"S1", {Code::kShortSip, Code::kLongSip, Code::kShortPuff}, ControlMode::kTranslateFb},
      {"S2", {Code::kShortSip, Code::kLongSip}, ControlMode::kTranslateLr},
      {"S3", {Code::kLongSip, Code::kShortSip}, ControlMode::kTranslateUd}});
}

using Ids = std::vector<std::string>;

}  // namespace

TEST_CASE("walkthrough: full sequence matches eagerly") {
  SequenceMatcher m(walkthrough_library());
  CHECK(m.push(Code::kShortSip, 100) == MatchOutcome::pending(Ids{"S1", "S2"}));
  CHECK(m.push(Code::kLongSip, 900) == MatchOutcome::pending(Ids{"S1", "S2"}));
  CHECK(m.push(Code::kShortPuff, 1300) == MatchOutcome::matched("S1"));
  CHECK(m.current_sequence().empty());
}

TEST_CASE("walkthrough: prefix sequence matches on timeout") {
  SequenceMatcher m(walkthrough_library());
  m.push(Code::kShortSip, 100);
  m.push(Code::kLongSip, 900);
  CHECK(m.deadline() == 2400);
  CHECK(m.tick(2399).kind == OutcomeKind::kPending);
  CHECK(m.tick(2400) == MatchOutcome::matched("S2"));
  CHECK(m.tick(2500) == MatchOutcome::idle());
}

TEST_CASE("walkthrough: unknown continuation resets and drops the code") {
  SequenceMatcher m(walkthrough_library());
  m.push(Code::kShortSip, 100);
  CHECK(m.push(Code::kShortPuff, 300) == MatchOutcome::reset(ResetReason::kNoCandidate));
  CHECK(m.current_sequence().empty());
  CHECK(m.push(Code::kLongPuff, 400) == MatchOutcome::reset(ResetReason::kNoCandidate));
}

TEST_CASE("non-terminal prefix times out into a reset") {
  SequenceMatcher m(walkthrough_library());
  m.push(Code::kLongSip, 0);
  CHECK(m.tick(1500) == MatchOutcome::reset(ResetReason::kTimeout));
  CHECK_FALSE(m.deadline());
}

TEST_CASE("matcher rejects time going backwards without changing state") {
  SequenceMatcher m(walkthrough_library());
  m.push(Code::kShortSip, 500);
  CHECK_THROWS_AS(m.push(Code::kLongSip, 400), InputError);
  CHECK_THROWS_AS(m.tick(499), InputError);
  CHECK(m.current_sequence().size() == 1);
  CHECK(m.push(Code::kLongSip, 500).kind == OutcomeKind::kPending);
}

TEST_CASE("outcome rendering") {
  CHECK(describe(MatchOutcome::pending({"S1", "S2"})) == "pending,S1|S2");
  CHECK(describe(MatchOutcome::matched("S2")) == "matched,S2");
  CHECK(describe(MatchOutcome::reset(ResetReason::kTimeout)) == "reset,timeout");
  CHECK(describe(MatchOutcome::idle()) == "idle,");
}

// Properties ------------------------------------------------------------------

TEST_CASE("property: agrees with the brute-force reference on random libraries") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto uds = random_library(rng, 4, 3);
    for (int k = 0; k < 20; ++k) {
      const auto schedule = random_schedule(rng, 6);
      CHECK(first_divergence(uds, 1500, schedule) == -1);
    }
  }
}

TEST_CASE("property: soundness and eagerness") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto uds = random_library(rng, 4, 3);
    const auto lib = std::make_shared<const SequenceLibrary>(uds);
    for (const auto& s : uds) {
      SequenceMatcher m(lib);
      bool longer = false;
      for (const auto& other : uds) {
        if (other.codes.size() > s.codes.size() &&
            std::equal(s.codes.begin(), s.codes.end(), other.codes.begin())) {
          longer = true;
        }
      }
      Millis t = 0;
      MatchOutcome last;
      for (std::size_t i = 0; i < s.codes.size(); ++i) {
        last = m.push(s.codes[i], t += 100);
        // Nothing fires before the final symbol.
        if (i + 1 < s.codes.size()) CHECK(last.kind == OutcomeKind::kPending);
      }
      if (longer) {
        CHECK(last.kind == OutcomeKind::kPending);
        CHECK(m.tick(t + 1500) == MatchOutcome::matched(s.id));
      } else {
        CHECK(last == MatchOutcome::matched(s.id));
      }
    }
  }
}

TEST_CASE("property: current sequence is always a prefix of some library entry") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto uds = random_library(rng, 4, 3);
    SequenceMatcher m(std::make_shared<const SequenceLibrary>(uds));
    Millis t = 0;
    for (const auto& step : random_schedule(rng, 12)) {
      t += step.dt;
      m.tick(t);
      if (step.is_push) m.push(step.code, t);
      const auto cs = m.current_sequence();
      if (cs.empty()) continue;
      const bool prefix = std::any_of(uds.begin(), uds.end(), [&](const auto& s) {
        return s.codes.size() >= cs.size() && std::equal(cs.begin(), cs.end(), s.codes.begin());
      });
      CHECK(prefix);
      CHECK(m.candidates().size() >= 1);
    }
  }
}

TEST_CASE("property: a timed-out tick either matches or resets") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const auto uds = random_library(rng, 4, 3);
    SequenceMatcher m(std::make_shared<const SequenceLibrary>(uds));
    Millis t = 0;
    for (const auto& step : random_schedule(rng, 6)) {
      t += 100;
      m.tick(t);
      if (step.is_push) m.push(step.code, t);
    }
    const bool had_cs = !m.current_sequence().empty();
    const auto out = m.tick(t + 1500);
    if (had_cs) {
      CHECK((out.kind == OutcomeKind::kMatched ||
             (out.kind == OutcomeKind::kReset && out.reset_reason == ResetReason::kTimeout)));
    } else {
      CHECK(out.kind == OutcomeKind::kIdle);
    }
    CHECK(m.current_sequence().empty());
  }
}

TEST_CASE("property: library insertion order does not change outcomes") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto uds = random_library(rng, 4, 3);
    auto shuffled = uds;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    SequenceMatcher a(std::make_shared<const SequenceLibrary>(uds));
    SequenceMatcher b(std::make_shared<const SequenceLibrary>(shuffled));
    Millis t = 0;
    for (const auto& step : random_schedule(rng, 8)) {
      t += step.dt;
      CHECK(a.tick(t) == b.tick(t));
      if (step.is_push) CHECK(a.push(step.code, t) == b.push(step.code, t));
    }
  }
}
