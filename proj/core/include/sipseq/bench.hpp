#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sipseq/config.hpp"
#include "sipseq/metrics.hpp"
#include "sipseq/pipeline.hpp"
#include "sipseq/task.hpp"

namespace sipseq {

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
  double min = 0.0;
  double max = 0.0;
};

Summary summarize(std::span<const double> values);

struct SessionRecord {
  std::string task_id;
  InterfaceKind kind = InterfaceKind::kAsp;
  std::uint64_t seed = 0;
  SessionMetrics metrics;
};

struct BenchRow {
  std::string task_id;
  InterfaceKind kind = InterfaceKind::kAsp;
  std::size_t sessions = 0;
  Summary completion;
  Summary moving;
  Summary wasted;
};

/// Paired comparison of the first two interfaces on one task, matched by seed.
struct BenchComparison {
  std::string task_id;
  InterfaceKind first = InterfaceKind::kAsp;
  InterfaceKind second = InterfaceKind::kBsp;
  double p_completion_less = 1.0;  // H1: first completes faster
  double p_wasted_less = 1.0;
  double p_moving_two_sided = 1.0;
  double mean_moving_diff_ms = 0.0;  // mean over seeds of first - second
  double completion_reduction = 0.0;  // 1 - mean(first) / mean(second)
};

struct BenchReport {
  std::vector<SessionRecord> sessions;  // task order, interface order, seed
  std::vector<BenchRow> rows;
  std::vector<BenchComparison> comparisons;
};

/// Simulates every (task, interface, seed) session with seeds
/// first_seed .. first_seed + seeds - 1 and aggregates them. Sessions run on
/// up to `threads` workers (0 = hardware concurrency); the report does not
/// depend on scheduling. A comparison whose differences are all zero reports
/// p = 1. Throws ConfigError if `seeds < 2` or no interfaces are given.
BenchReport bench_report(std::span<const TaskSpec> tasks,
                         std::span<const InterfaceKind> interfaces,
                         const VirtualUserModel& user, const EngineConfig& config,
                         std::size_t seeds, std::uint64_t first_seed = 1, unsigned threads = 0);

void write_bench_text(std::ostream& out, const BenchReport& report);

/// Line-delimited JSON: one `session` record per run, one `row` per task x
/// interface, one `comparison` per task.
void write_bench_records(std::ostream& out, const BenchReport& report);

std::string metrics_record(const SessionRecord& record);

}  // namespace sipseq
