#include "sipseq/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "sipseq/errors.hpp"
#include "sipseq/virtual_user.hpp"
#include "sipseq/wilcoxon.hpp"

namespace sipseq {

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

double paired_p(std::span<const std::pair<double, double>> pairs, Alternative alt) {
  try {
    return wilcoxon_signed_rank(pairs, alt).p_value;
  } catch (const StatsError&) {
    // Every difference zero: nothing distinguishes the two interfaces.
    return 1.0;
  }
}

}  // namespace

BenchReport bench_report(std::span<const TaskSpec> tasks,
                         std::span<const InterfaceKind> interfaces,
                         const VirtualUserModel& user, const EngineConfig& config,
                         std::size_t seeds, std::uint64_t first_seed, unsigned threads) {
  if (seeds < 2) throw ConfigError("bench needs at least 2 seeds");
  if (interfaces.empty()) throw ConfigError("bench needs at least one interface");

  BenchReport report;
  for (const auto& task : tasks) {
    for (InterfaceKind kind : interfaces) {
      for (std::size_t s = 0; s < seeds; ++s) {
        report.sessions.push_back({task.id, kind, first_seed + s, {}});
      }
    }
  }

  // Job i belongs to task i / (interfaces * seeds).
  const std::size_t per_task = interfaces.size() * seeds;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < report.sessions.size(); i = next++) {
      auto& rec = report.sessions[i];
      try {
        rec.metrics = simulate_session(tasks[i / per_task], rec.kind, user, config, rec.seed);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, report.sessions.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    for (std::size_t ii = 0; ii < interfaces.size(); ++ii) {
      const auto first = report.sessions.begin() + static_cast<std::ptrdiff_t>(ti * per_task + ii * seeds);
      std::vector<double> completion, moving, wasted;
      for (auto it = first; it != first + static_cast<std::ptrdiff_t>(seeds); ++it) {
        completion.push_back(static_cast<double>(it->metrics.completion_ms));
        moving.push_back(static_cast<double>(it->metrics.moving_ms));
        wasted.push_back(static_cast<double>(it->metrics.wasted_ms));
      }
      report.rows.push_back({tasks[ti].id, interfaces[ii], seeds, summarize(completion),
                             summarize(moving), summarize(wasted)});
    }
    if (interfaces.size() < 2) continue;

    const auto a = report.sessions.begin() + static_cast<std::ptrdiff_t>(ti * per_task);
    const auto b = a + static_cast<std::ptrdiff_t>(seeds);
    std::vector<std::pair<double, double>> completion, moving, wasted;
    double moving_diff = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const auto& ma = a[static_cast<std::ptrdiff_t>(s)].metrics;
      const auto& mb = b[static_cast<std::ptrdiff_t>(s)].metrics;
      completion.emplace_back(ma.completion_ms, mb.completion_ms);
      moving.emplace_back(ma.moving_ms, mb.moving_ms);
      wasted.emplace_back(ma.wasted_ms, mb.wasted_ms);
      moving_diff += static_cast<double>(ma.moving_ms - mb.moving_ms);
    }
    BenchComparison cmp;
    cmp.task_id = tasks[ti].id;
    cmp.first = interfaces[0];
    cmp.second = interfaces[1];
    cmp.p_completion_less = paired_p(completion, Alternative::kLess);
    cmp.p_wasted_less = paired_p(wasted, Alternative::kLess);
    cmp.p_moving_two_sided = paired_p(moving, Alternative::kTwoSided);
    cmp.mean_moving_diff_ms = moving_diff / static_cast<double>(seeds);
    const auto& row_a = report.rows[report.rows.size() - interfaces.size()];
    const auto& row_b = report.rows[report.rows.size() - interfaces.size() + 1];
    cmp.completion_reduction =
        row_b.completion.mean > 0 ? 1.0 - row_a.completion.mean / row_b.completion.mean : 0.0;
    report.comparisons.push_back(cmp);
  }
  return report;
}

void write_bench_text(std::ostream& out, const BenchReport& report) {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(14) << "task" << std::setw(6) << "iface" << std::right
      << std::setw(4) << "n" << std::setw(22) << "completion s (sd)" << std::setw(20)
      << "moving s (sd)" << std::setw(20) << "wasted s (sd)" << "\n";
  auto cell = [&](const Summary& s) {
    std::ostringstream c;
    c << std::fixed << std::setprecision(2) << s.mean / 1000.0 << " (" << s.sd / 1000.0 << ")";
    return c.str();
  };
  for (const auto& row : report.rows) {
    out << std::left << std::setw(14) << row.task_id << std::setw(6) << interface_name(row.kind)
        << std::right << std::setw(4) << row.sessions << std::setw(22) << cell(row.completion)
        << std::setw(20) << cell(row.moving) << std::setw(20) << cell(row.wasted) << "\n";
  }
  for (const auto& c : report.comparisons) {
    out << c.task_id << ": " << interface_name(c.first) << " vs " << interface_name(c.second)
        << "  completion " << std::setprecision(1) << c.completion_reduction * 100.0
        << "% lower, p_less=" << std::scientific << std::setprecision(3) << c.p_completion_less
        << "  moving p_two_sided=" << c.p_moving_two_sided << std::fixed << std::setprecision(1)
        << "  mean moving diff=" << c.mean_moving_diff_ms << " ms\n";
  }
  out.flags(flags);
}

std::string metrics_record(const SessionRecord& rec) {
  nlohmann::json j = {{"type", "session"},
                      {"task", rec.task_id},
                      {"interface", interface_name(rec.kind)},
                      {"seed", rec.seed},
                      {"completion_ms", rec.metrics.completion_ms},
                      {"moving_ms", rec.metrics.moving_ms},
                      {"wasted_ms", rec.metrics.wasted_ms},
                      {"mode_selection_count", rec.metrics.mode_selection_count},
                      {"reset_count", rec.metrics.reset_count}};
  return j.dump();
}

void write_bench_records(std::ostream& out, const BenchReport& report) {
  auto summary = [](const Summary& s) {
    return nlohmann::json{{"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}};
  };
  for (const auto& rec : report.sessions) out << metrics_record(rec) << '\n';
  for (const auto& row : report.rows) {
    nlohmann::json j = {{"type", "row"},
                        {"task", row.task_id},
                        {"interface", interface_name(row.kind)},
                        {"sessions", row.sessions},
                        {"completion_ms", summary(row.completion)},
                        {"moving_ms", summary(row.moving)},
                        {"wasted_ms", summary(row.wasted)}};
    out << j.dump() << '\n';
  }
  for (const auto& c : report.comparisons) {
    nlohmann::json j = {{"type", "comparison"},
                        {"task", c.task_id},
                        {"first", interface_name(c.first)},
                        {"second", interface_name(c.second)},
                        {"p_completion_less", c.p_completion_less},
                        {"p_wasted_less", c.p_wasted_less},
                        {"p_moving_two_sided", c.p_moving_two_sided},
                        {"mean_moving_diff_ms", c.mean_moving_diff_ms},
                        {"completion_reduction", c.completion_reduction}};
    out << j.dump() << '\n';
  }
}

}  // namespace sipseq
