// sipseq: command-line front end for the sequence-matching control engine.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sipseq/bench.hpp"
#include "sipseq/config.hpp"
#include "sipseq/errors.hpp"
#include "sipseq/recording.hpp"
#include "sipseq/replay.hpp"
#include "sipseq/virtual_user.hpp"
#include "sipseq/wilcoxon.hpp"

#ifdef SIPSEQ_WITH_GATEWAY
#include "sipseq/gateway/server.hpp"
#endif

namespace fs = std::filesystem;
using namespace sipseq;

namespace {

const fs::path kDataDir = SIPSEQ_DATA_DIR;

EngineConfig config_or_default(const std::string& path) {
  return path.empty() ? load_config(kDataDir / "configs" / "default.json") : load_config(path);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const auto piece = item.substr(start, comma == std::string::npos ? std::string::npos
                                                                       : comma - start);
      if (!piece.empty()) out.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

InterfaceKind interface_or_throw(const std::string& name) {
  auto kind = parse_interface(name);
  if (!kind) throw ConfigError("unknown interface '" + name + "' (asp|bsp)");
  return *kind;
}

int validate_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const EngineConfig config = parse_config(buf.str());
  std::cout << "ok: " << config.library->size() << " sequences, t_match_ms="
            << config.library->t_match_ms() << "\n";
  for (const auto& row : binding_table(*config.library)) {
    std::cout << "  " << row.id << "  [" << format_codes(row.codes) << "]  -> "
              << mode_name(row.mode) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sip-and-puff sequence matching engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::string tasks_dir = (kDataDir / "tasks").string();

  auto* validate = app.add_subcommand("validate-library", "Load and check a configuration document");
  std::string validate_path;
  validate->add_option("config", validate_path, "Configuration document")->required();

  auto* replay_cmd = app.add_subcommand("replay", "Replay a t_ms,v recording through the engine");
  std::string recording_path;
  std::string out_dir;
  replay_cmd->add_option("recording", recording_path, "Recording file")->required();
  replay_cmd->add_option("--config", config_path, "Configuration document");
  replay_cmd->add_option("--out-dir", out_dir,
                         "Write events.csv, matches.csv, steps.csv here instead of stdout");

  auto* simulate = app.add_subcommand("simulate", "Run one seeded virtual-user session");
  std::string task_id;
  std::string interface = "asp";
  std::uint64_t seed = 1;
  simulate->add_option("--task", task_id, "Task id (file stem in the tasks directory)")->required();
  simulate->add_option("--interface", interface, "asp|bsp")->check(CLI::IsMember({"asp", "bsp"}));
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--config", config_path, "Configuration document");
  simulate->add_option("--tasks-dir", tasks_dir, "Directory of task files");

  auto* bench = app.add_subcommand("bench", "Paired ASP/BSP benchmark over seeds");
  std::vector<std::string> bench_tasks{"task1_jar", "task2_spoon", "task3_bottle"};
  std::vector<std::string> bench_interfaces{"asp", "bsp"};
  std::size_t seeds = 30;
  std::uint64_t first_seed = 1;
  unsigned threads = 0;
  std::string bench_out;
  bench->add_option("--tasks", bench_tasks, "Task ids (space or comma separated)");
  bench->add_option("--interfaces", bench_interfaces, "Interfaces to compare, first vs second");
  bench->add_option("--seeds", seeds, "Sessions per task and interface")->check(CLI::Range(2, 1000000));
  bench->add_option("--first-seed", first_seed, "First seed");
  bench->add_option("--threads", threads, "Worker threads (0 = all cores)");
  bench->add_option("--out", bench_out, "Write line-delimited JSON records here");
  bench->add_option("--config", config_path, "Configuration document");
  bench->add_option("--tasks-dir", tasks_dir, "Directory of task files");

  auto* stats = app.add_subcommand("stats", "Exact Wilcoxon signed-rank test on a pairs file");
  std::string pairs_path;
  std::string alt = "two_sided";
  stats->add_option("--pairs", pairs_path, "File of a,b lines")->required();
  stats->add_option("--alt", alt, "less|greater|two_sided")
      ->check(CLI::IsMember({"less", "greater", "two_sided"}));

#ifdef SIPSEQ_WITH_GATEWAY
  auto* serve = app.add_subcommand("serve", "Run the live session gateway");
  gateway::ServerOptions serve_opts;
  std::string store_dir = "sipseq-store";
  std::string static_dir;
  serve->add_option("--port", serve_opts.port, "TCP port (0 picks a free one)");
  serve->add_option("--host", serve_opts.host, "Bind address");
  serve->add_option("--store", store_dir, "Config store and session log directory");
  serve->add_option("--static", static_dir, "Directory served at / (cockpit bundle)");
  serve->add_option("--tasks-dir", tasks_dir, "Directory of task files");
#endif

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return validate_library(validate_path);

    if (replay_cmd->parsed()) {
      const EngineConfig config = config_or_default(config_path);
      const auto samples = read_recording(fs::path(recording_path));
      const ReplayResult result = replay(samples, config);
      if (out_dir.empty()) {
        std::cout << "# events\n";
        write_event_trace(std::cout, result.events);
        std::cout << "# matches\n";
        write_match_trace(std::cout, result.matches);
      } else {
        auto events = open_out(fs::path(out_dir) / "events.csv");
        write_event_trace(events, result.events);
        auto matches = open_out(fs::path(out_dir) / "matches.csv");
        write_match_trace(matches, result.matches);
        auto steps = open_out(fs::path(out_dir) / "steps.csv");
        write_step_trace(steps, result.steps);
      }
      SessionRecord rec{"replay", InterfaceKind::kAsp, 0, result.metrics};
      std::cerr << metrics_record(rec) << "\n";
      return 0;
    }

    if (simulate->parsed()) {
      const EngineConfig config = config_or_default(config_path);
      const TaskSpec task = load_task_by_id(tasks_dir, task_id);
      const InterfaceKind kind = interface_or_throw(interface);
      const auto metrics = simulate_session(task, kind, config.user, config, seed);
      std::cout << metrics_record({task.id, kind, seed, metrics}) << "\n";
      return 0;
    }

    if (bench->parsed()) {
      const EngineConfig config = config_or_default(config_path);
      std::vector<TaskSpec> tasks;
      for (const auto& id : split_list(bench_tasks)) tasks.push_back(load_task_by_id(tasks_dir, id));
      std::vector<InterfaceKind> kinds;
      for (const auto& name : split_list(bench_interfaces)) kinds.push_back(interface_or_throw(name));
      const auto report = bench_report(tasks, kinds, config.user, config, seeds, first_seed, threads);
      write_bench_text(std::cout, report);
      if (!bench_out.empty()) {
        auto out = open_out(bench_out);
        write_bench_records(out, report);
      }
      return 0;
    }

    if (stats->parsed()) {
      const auto pairs = read_pairs(fs::path(pairs_path));
      const auto result = wilcoxon_signed_rank(pairs, *parse_alternative(alt));
      nlohmann::json j = {{"type", "wilcoxon"},   {"alternative", alt},
                          {"n", result.n},        {"w_plus", result.statistic},
                          {"p_value", result.p_value}};
      std::cout << j.dump() << "\n";
      return 0;
    }

#ifdef SIPSEQ_WITH_GATEWAY
    if (serve->parsed()) {
      serve_opts.store_dir = store_dir;
      serve_opts.tasks_dir = tasks_dir;
      serve_opts.default_config = kDataDir / "configs" / "default.json";
      if (!static_dir.empty()) serve_opts.static_dir = static_dir;
      return gateway::run_until_signal(serve_opts);
    }
#endif
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
