#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oran/agent.hpp"
#include "oran/config.hpp"
#include "oran/ran_sim.hpp"
#include "oran/ric.hpp"
#include "oran/support.hpp"
#include "oran/xapp.hpp"

// Whole-experiment orchestration: one file describes controller, node, cell,
// UEs, and xApps, and one call wires everything over an in-memory runtime and
// runs it to completion, deterministically or paced against the wall clock.
namespace oran::scenario {

struct ClockMode {
  bool realtime = false;
  double scale = 1.0;  // > 0; logical milliseconds per wall millisecond

  bool operator==(const ClockMode&) const = default;
};

// Accepts "det", "rt", or "rt:<scale>".
Expected<ClockMode> parse_clock_mode(const std::string& text);
std::string clock_mode_text(const ClockMode& mode);

struct Scenario {
  std::string name = "scenario";
  uint64_t duration_s = 1;
  uint64_t seed = 0;
  ClockMode clock;
  bool run_kpimon = false;
  bool run_slicing = false;
  std::string descriptor_dir = "xapps";

  ric::RicConfig ric;
  agent::AgentConfig agent;
  sim::CellConfig cell;
  std::vector<sim::UeConfig> ues;
  xapp::KpimonConfig kpimon;
  xapp::SlicingConfig slicing;

  static Expected<Scenario> from_config(const KvConfig& cfg);
  static Expected<Scenario> load(const std::string& path);
};

// What a run left behind, plus enough introspection for callers to map the
// outcome to an exit code and for tests to compare runs.
struct RunResult {
  std::string kpimon_csv_path;
  std::string slicing_csv_path;
  std::string summary_path;
  std::string proclog_path;

  bool kpimon_failed = false;
  bool slicing_failed = false;
  std::string failure_reason;
  uint64_t kpimon_reports = 0;
  uint64_t slicing_reports = 0;

  // The controller's procedure log: logical timestamps only, so a paced run
  // can be diffed against a deterministic one.
  std::vector<std::string> controller_log;
  std::vector<std::string> node_log;
  std::string summary_text;
};

// Runs the scenario to duration_s of simulated time and writes kpimon.csv,
// slicing.csv, summary.txt, and procedures.log into out_dir.
Expected<RunResult> run_scenario(const Scenario& sc, const std::string& out_dir);

}  // namespace oran::scenario
