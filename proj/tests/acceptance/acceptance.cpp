// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "library_gen.hpp"
#include "signal_gen.hpp"
#include "sipseq/bench.hpp"
#include "sipseq/config.hpp"
#include "sipseq/matcher.hpp"
#include "sipseq/recording.hpp"
#include "sipseq/replay.hpp"
#include "sipseq/task.hpp"
#include "sipseq/wilcoxon.hpp"
#include "wilcoxon_oracle.hpp"

#ifdef SIPSEQ_WITH_GATEWAY
#include "gateway_client.hpp"
#include "sipseq/gateway/server.hpp"
#include "sipseq/gateway/session.hpp"
#endif

using namespace sipseq;
using namespace sipseq::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData(SIPSEQ_DATA_DIR);

struct Verdict {
  bool ok = false;
  std::string detail;
};

Verdict fail(std::string why) { return {false, std::move(why)}; }

struct Criterion {
  std::string name;
  double budget_s;
  std::function<Verdict()> run;
};

// --- walkthrough -----------------------------------------------------------

Verdict walkthrough() {
  const auto lib = load_config(kData / "configs" / "walkthrough.json").library;
  using Ids = std::vector<std::string>;
  int passed = 0;
  auto expect = [&](bool cond) { passed += cond ? 1 : 0; };

  {
    SequenceMatcher m(lib);
    expect(m.push(Code::kLongSip, 100) == MatchOutcome::pending(Ids{"S3"}));
  }
  {
    SequenceMatcher m(lib);
    m.push(Code::kShortSip, 100);
    expect(m.push(Code::kLongSip, 800) == MatchOutcome::pending(Ids{"S1", "S2"}));
  }
  {
    SequenceMatcher m(lib);
    m.push(Code::kShortSip, 100);
    m.push(Code::kLongSip, 800);
    expect(m.push(Code::kShortPuff, 1200) == MatchOutcome::matched("S1"));
  }
  {
    SequenceMatcher m(lib);
    m.push(Code::kShortSip, 100);
    m.push(Code::kLongSip, 800);
    expect(m.tick(2299).kind == OutcomeKind::kPending &&
           m.tick(2300) == MatchOutcome::matched("S2"));
  }
  {
    bool all = true;
    for (Code c : {Code::kShortSip, Code::kLongSip, Code::kLongPuff}) {
      SequenceMatcher m(lib);
      m.push(Code::kShortSip, 100);
      m.push(Code::kLongSip, 800);
      all = all && m.push(c, 1200) == MatchOutcome::reset(ResetReason::kNoCandidate) &&
            m.current_sequence().empty();
    }
    expect(all);
  }
  return {passed == 5, std::to_string(passed) + "/5 cases"};
}

// --- matcher oracle ----------------------------------------------------------

Verdict matcher_oracle() {
  constexpr Millis kMatch = 1500;
  std::size_t runs = 0;
  std::size_t mismatches = 0;

  const auto libraries = all_libraries(all_code_lists(2), 3);
  const auto schedules = all_schedules(3);
  for (const auto& uds : libraries) {
    for (const auto& s : schedules) {
      mismatches += first_divergence(uds, kMatch, s) >= 0 ? 1 : 0;
      ++runs;
    }
  }

  std::mt19937_64 rng(20240501);
  constexpr int kRandomLibraries = 2000;
  for (int i = 0; i < kRandomLibraries; ++i) {
    const auto uds = random_library(rng, 4, 3);
    for (int k = 0; k < 20; ++k) {
      mismatches += first_divergence(uds, kMatch, random_schedule(rng, 6)) >= 0 ? 1 : 0;
      ++runs;
    }
  }

  std::ostringstream d;
  d << libraries.size() << " exhaustive + " << kRandomLibraries << " random libraries, " << runs
    << " schedules, " << mismatches << " mismatches";
  return {mismatches == 0, d.str()};
}

// --- detector boundary -------------------------------------------------------

Verdict detector_boundary() {
  const DetectorConfig cfg;
  const Millis period = default_config().sample_period_ms;
  int wrong = 0;
  int cases = 0;
  for (double level : {kPuffV, kSipV}) {
    for (Millis width : {cfg.long_threshold_ms - period, cfg.long_threshold_ms,
                         cfg.long_threshold_ms + period}) {
      PeakDetector det(cfg);
      const auto events = run_detector(det, pulse(100, width, level, width + 500, period));
      const bool want_long = width >= cfg.long_threshold_ms;
      ++cases;
      if (events.size() != 1 ||
          (events[0].duration_class() == DurationClass::kLong) != want_long ||
          direction_of(events[0].code) != (level > kNeutralV ? Direction::kPuff : Direction::kSip)) {
        ++wrong;
      }
    }
    for (Millis width = period; width < cfg.debounce_ms; width += period) {
      PeakDetector det(cfg);
      ++cases;
      if (!run_detector(det, pulse(100, width, level, width + 500, period)).empty()) ++wrong;
    }
  }

  // Oscillation across the activation threshold but never below release.
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> puff_band(cfg.puff_off_v + 1e-6, 4.5);
  std::uniform_real_distribution<double> sip_band(0.5, cfg.sip_off_v - 1e-6);
  std::uniform_real_distribution<double> neutral_band(cfg.sip_off_v + 1e-6,
                                                      cfg.puff_off_v - 1e-6);
  int spurious = 0;
  for (int trial = 0; trial < 50; ++trial) {
    PeakDetector det(cfg);
    std::vector<Sample> s;
    Millis t = 0;
    const bool puff = trial % 2 == 0;
    for (int i = 0; i < 20; ++i, t += period) s.push_back({t, kNeutralV});
    for (int i = 0; i < 100; ++i, t += period) s.push_back({t, puff ? puff_band(rng) : sip_band(rng)});
    for (int i = 0; i < 300; ++i, t += period) s.push_back({t, neutral_band(rng)});
    const auto events = run_detector(det, s);
    if (events.size() != 1) spurious += std::abs(static_cast<int>(events.size()) - 1) + 1;
  }
  ++cases;
  if (spurious != 0) ++wrong;

  std::ostringstream d;
  d << cases << " cases, " << wrong << " wrong, " << spurious << " spurious events";
  return {wrong == 0, d.str()};
}

// --- determinism ---------------------------------------------------------------

std::string trace_bytes(const ReplayResult& r) {
  std::ostringstream out;
  write_event_trace(out, r.events);
  write_match_trace(out, r.matches);
  write_step_trace(out, r.steps);
  return out.str();
}

Verdict determinism() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(kData / "recordings")) files.push_back(e.path());

  const auto dir = fs::temp_directory_path() / ("sipseq-accept-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> hold(2, 120);
  std::uniform_int_distribution<int> level(0, 2);
  for (int k = 0; k < 5; ++k) {
    std::vector<Sample> samples;
    Millis t = 0;
    while (t < 120000) {
      const double v = std::array{kSipV, kNeutralV, kPuffV}[static_cast<std::size_t>(level(rng))];
      for (int n = hold(rng); n > 0; --n, t += 10) samples.push_back({t, v});
    }
    const auto path = dir / ("random" + std::to_string(k) + ".csv");
    std::ofstream out(path);
    write_recording(out, samples);
    files.push_back(path);
  }

  int differing = 0;
  for (const auto& config : {default_config(), load_config(kData / "configs" / "walkthrough.json")}) {
    for (const auto& f : files) {
      const auto a = trace_bytes(replay(read_recording(f), config));
      const auto b = trace_bytes(replay(read_recording(f), config));
      if (a != b || a.empty()) ++differing;
    }
  }
  fs::remove_all(dir);
  std::ostringstream d;
  d << files.size() << " recordings x 2 configs, " << differing << " differing";
  return {differing == 0, d.str()};
}

// --- wilcoxon --------------------------------------------------------------------

Verdict wilcoxon_exactness() {
  std::vector<std::pair<double, double>> eight;
  for (int i = 1; i <= 8; ++i) eight.push_back({0.0, static_cast<double>(i)});
  const double p8 = wilcoxon_signed_rank(eight, Alternative::kLess).p_value;
  const double oracle8 = enumerate_signed_rank(eight).p_less;
  bool ok = p8 == 0.00390625 && oracle8 == 0.00390625;

  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(1, 10);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::uniform_int_distribution<int> coarse(-3, 3);
  int checked = 0;
  int disagree = 0;
  while (checked < 500) {
    std::vector<std::pair<double, double>> p(static_cast<std::size_t>(size(rng)));
    const bool ties = checked % 2 == 0;
    bool any = false;
    for (auto& [a, b] : p) {
      a = ties ? coarse(rng) : val(rng);
      b = ties ? coarse(rng) : val(rng);
      any = any || a != b;
    }
    if (!any) continue;
    const auto o = enumerate_signed_rank(p);
    const double less = wilcoxon_signed_rank(p, Alternative::kLess).p_value;
    const double greater = wilcoxon_signed_rank(p, Alternative::kGreater).p_value;
    if (std::abs(less - o.p_less) > 1e-12 || std::abs(greater - o.p_greater) > 1e-12) ++disagree;
    ++checked;
  }
  ok = ok && disagree == 0;
  std::ostringstream d;
  d << "n=8 p=" << p8 << ", " << checked << " datasets, " << disagree << " disagreements";
  return {ok, d.str()};
}

// --- benchmark-based criteria ----------------------------------------------------

const BenchReport& bench() {
  static const BenchReport report = [] {
    const auto config = load_config(kData / "configs" / "default.json");
    std::vector<TaskSpec> tasks;
    for (const char* id : {"task1_jar", "task2_spoon", "task3_bottle"}) {
      tasks.push_back(load_task_by_id(kData / "tasks", id));
    }
    const std::vector<InterfaceKind> kinds{InterfaceKind::kAsp, InterfaceKind::kBsp};
    return bench_report(tasks, kinds, config.user, config, 30);
  }();
  return report;
}

Verdict direction_of_effect() {
  const auto& report = bench();
  bool ok = report.comparisons.size() == 3;
  std::ostringstream d;
  for (const auto& c : report.comparisons) {
    double asp = 0, bsp = 0, moving = 0;
    for (const auto& row : report.rows) {
      if (row.task_id != c.task_id) continue;
      (row.kind == InterfaceKind::kAsp ? asp : bsp) = row.completion.mean;
      moving += row.moving.mean / 2.0;
    }
    const bool faster = asp < bsp;
    const bool significant = c.p_completion_less < 0.05;
    const bool same_moving = std::abs(c.mean_moving_diff_ms) < 0.1 * moving;
    ok = ok && faster && significant && same_moving;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s -%.0f%% p=%.2g dmove=%.1f%%", d.tellp() ? "; " : "",
                  c.task_id.c_str(), 100.0 * c.completion_reduction, c.p_completion_less,
                  100.0 * c.mean_moving_diff_ms / moving);
    d << buf;
  }
  return {ok, d.str()};
}

Verdict metrics_identity() {
  const auto& report = bench();
  int broken = 0;
  for (const auto& s : report.sessions) {
    if (s.metrics.wasted_ms + s.metrics.moving_ms != s.metrics.completion_ms) ++broken;
  }
  return {broken == 0 && !report.sessions.empty(),
          std::to_string(report.sessions.size()) + " sessions, " + std::to_string(broken) +
              " violations"};
}

// --- gateway -----------------------------------------------------------------------

#ifdef SIPSEQ_WITH_GATEWAY
Verdict gateway_replay() {
  using boost::beast::http::verb;
  using nlohmann::json;
  const auto store = fs::temp_directory_path() / ("sipseq-accept-gw-" + std::to_string(::getpid()));
  fs::remove_all(store);
  gateway::ServerOptions opts;
  opts.port = 0;
  opts.store_dir = store;
  opts.tasks_dir = kData / "tasks";
  opts.default_config = kData / "configs" / "default.json";
  opts.tick_interval = std::chrono::milliseconds(2);
  gateway::Server server(opts);
  server.start();

  int sessions = 0;
  int differing = 0;
  for (const char* body : {R"({"interface":"asp","task":"task1_jar"})", R"({"interface":"bsp"})"}) {
    const auto created = http_request(server.port(), verb::post, "/sessions", body);
    if (created.status != 201) return fail("session create returned " + std::to_string(created.status));
    const auto id = created.json()["session_id"].get<std::string>();
    WsClient ws(server.port(), "/sessions/" + id + "/ws");
    auto ignore = [](const json&) {};
    const auto first = ws.receive_type("state", ignore);
    if (!first) return fail("no state frame");
    Millis t = (*first)["t_ms"].get<Millis>() + 100;

    // Typed selections, a hold, raw samples, and some rejected input.
    const std::vector<std::tuple<const char*, const char*, Millis>> script{
        {"press", "puff", 0},    {"release", "puff", 200}, {"press", "puff", 200},
        {"release", "puff", 200}, {"release", "sip", 50},  {"press", "puff", 2000},
        {"release", "puff", 1500}, {"press", "sip", 600},  {"release", "sip", 900}};
    for (const auto& [type, ch, dt] : script) {
      t += dt;
      ws.send(json{{"type", type}, {"channel", ch}, {"t_ms", t}});
    }
    for (double v : {4.2, 4.4, 2.5, 0.7, 0.6, 2.5}) {
      t += 120;
      ws.send(json{{"type", "sample"}, {"t_ms", t}, {"v", v}});
    }
    ws.send(std::string("not json"));
    ws.send(json{{"type", "press"}, {"channel", "sip"}, {"t_ms", 0}});
    // Let the engine run past the last input before closing.
    while (true) {
      const auto f = ws.receive_type("state", ignore);
      if (!f) return fail("socket closed early");
      if ((*f)["t_ms"].get<Millis>() > t + 4000) break;
    }
    const auto closed = http_request(server.port(), verb::delete_, "/sessions/" + id);
    if (closed.status != 200) return fail("delete returned " + std::to_string(closed.status));

    std::ifstream inbound(closed.json()["inbound_log"].get<std::string>());
    const auto replayed = gateway::replay_inbound_log(inbound);
    std::ifstream frames(closed.json()["frames_log"].get<std::string>());
    std::vector<json> recorded;
    std::size_t events = 0;
    for (std::string line; std::getline(frames, line);) {
      recorded.push_back(gateway::without_wall_clock(json::parse(line)));
      events += recorded.back()["events"].size();
    }
    ++sessions;
    if (events < 4 || replayed.frames != recorded) ++differing;
  }
  server.stop();
  fs::remove_all(store);
  return {differing == 0, std::to_string(sessions) + " live sessions, " +
                              std::to_string(differing) + " differing frame sequences"};
}
#endif

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"walkthrough", 1.0, walkthrough},
      {"matcher-oracle-equivalence", 60.0, matcher_oracle},
      {"detector-boundary", 5.0, detector_boundary},
      {"replay-determinism", 0.0, determinism},
      {"wilcoxon-exactness", 0.0, wilcoxon_exactness},
      {"direction-of-effect", 300.0, direction_of_effect},
      {"metrics-identity", 0.0, metrics_identity},
#ifdef SIPSEQ_WITH_GATEWAY
      {"gateway-replay", 0.0, gateway_replay},
#else
      {"gateway-replay", 0.0, [] { return fail("built without the gateway"); }},
#endif
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      v.ok = false;
      v.detail += ", over the time budget";
    }
    failures += v.ok ? 0 : 1;
    std::printf("%s %s: %s (%.2f s)\n", v.ok ? "PASS" : "FAIL", c.name.c_str(), v.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
