// deskric: operator entry point.
//
//   deskric ric  --config ric.cfg          controller on real TCP sockets
//   deskric node --config node.cfg         E2 node + simulated cell
//   deskric xapp kpimon --config x.cfg     monitoring xApp
//   deskric xapp slicing --config x.cfg    slicing xApp
//   deskric run  --scenario s.scn --out d  whole experiment, in-process
//
// Socket commands run until SIGINT/SIGTERM and echo one line per procedure
// to stderr.  Exit codes: 0 ok, 2 config error, 3 subscription/setup
// failure, 4 transport error.

#include <csignal>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "oran/agent.hpp"
#include "oran/ran_sim.hpp"
#include "oran/ric.hpp"
#include "oran/scenario.hpp"
#include "oran/socket_runtime.hpp"
#include "oran/support.hpp"
#include "oran/xapp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSubscription = 3;
constexpr int kExitTransport = 4;

volatile std::sig_atomic_t g_stop = 0;

void handle_signal(int) { g_stop = 1; }

void install_signal_handlers() {
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
}

int report(const oran::Error& e) {
  std::fprintf(stderr, "error: %s (%s)\n", e.detail.c_str(), oran::err_name(e.code));
  return e.code == oran::ErrCode::TransportError ? kExitTransport : kExitConfig;
}

// Keeps a simulated cell advancing one subframe per wall-clock millisecond.
void drive_subframes(oran::net::SocketRuntime& rt, oran::sim::RanSim& ran, uint64_t t) {
  rt.schedule(t, [&rt, &ran, t] {
    ran.step_subframe();
    drive_subframes(rt, ran, t + 1);
  });
}

int cmd_ric(const std::string& config_path) {
  auto cfg = oran::KvConfig::parse_file(config_path);
  if (!cfg.ok()) return report(cfg.error());
  auto rcfg = oran::ric::RicConfig::from_config(*cfg);
  if (!rcfg.ok()) return report(rcfg.error());

  oran::net::SocketRuntime rt;
  oran::ric::Ric ric(*rcfg);
  ric.proc_log().set_echo(true);
  ric.start(rt);
  if (auto err = rt.take_error(); !err.ok()) return report(err.error());
  std::fprintf(stderr, "ric: e2 on %s, xapps on %s\n", rcfg->e2_listen.c_str(),
               rcfg->xapp_listen.c_str());

  install_signal_handlers();
  while (!g_stop) rt.poll_once(50);
  return kExitOk;
}

int cmd_node(const std::string& config_path) {
  auto cfg = oran::KvConfig::parse_file(config_path);
  if (!cfg.ok()) return report(cfg.error());
  auto acfg = oran::agent::AgentConfig::from_config(*cfg);
  if (!acfg.ok()) return report(acfg.error());
  auto cell = oran::sim::CellConfig::from_config(*cfg);
  if (!cell.ok()) return report(cell.error());
  auto ues = oran::sim::parse_ues(*cfg);
  if (!ues.ok()) return report(ues.error());

  oran::net::SocketRuntime rt;
  oran::sim::RanSim ran(*cell);
  for (const auto& ue : *ues)
    if (auto s = ran.add_ue(ue); !s.ok()) return report(s.error());

  oran::agent::Agent agent(*acfg, ran);
  agent.proc_log().set_echo(true);
  agent.start(rt);
  if (auto err = rt.take_error(); !err.ok()) {
    // An unreachable controller is retried forever; only a config-level
    // address problem is fatal here.
    if (err.error().code != oran::ErrCode::TransportError) return report(err.error());
    std::fprintf(stderr, "node: %s (retrying every %llu ms)\n",
                 err.error().detail.c_str(),
                 static_cast<unsigned long long>(acfg->retry_interval_ms));
  }
  drive_subframes(rt, ran, rt.now_ms() + 1);

  install_signal_handlers();
  while (!g_stop) {
    rt.poll_once(50);
    if (auto err = rt.take_error();
        !err.ok() && err.error().code != oran::ErrCode::TransportError)
      return report(err.error());
  }
  return kExitOk;
}

int cmd_xapp(const std::string& name, const std::string& config_path) {
  auto cfg = oran::KvConfig::parse_file(config_path);
  if (!cfg.ok()) return report(cfg.error());
  std::string desc_path = cfg->get_or("xapp.descriptor", "xapps/" + name + ".descriptor");
  auto desc = oran::xapp::load_descriptor(desc_path);
  if (!desc.ok()) return report(desc.error());

  oran::net::SocketRuntime rt;
  std::optional<oran::xapp::KpimonApp> kpimon;
  std::optional<oran::xapp::SlicingApp> slicing;
  oran::xapp::XappBase* app = nullptr;
  if (name == "kpimon") {
    if (auto s = oran::xapp::KpimonApp::check_descriptor(*desc); !s.ok())
      return report(s.error());
    auto xcfg = oran::xapp::KpimonConfig::from_config(*cfg);
    if (!xcfg.ok()) return report(xcfg.error());
    kpimon.emplace(*xcfg, *desc);
    app = &*kpimon;
  } else {
    if (auto s = oran::xapp::SlicingApp::check_descriptor(*desc); !s.ok())
      return report(s.error());
    auto xcfg = oran::xapp::SlicingConfig::from_config(*cfg);
    if (!xcfg.ok()) return report(xcfg.error());
    slicing.emplace(*xcfg, *desc);
    app = &*slicing;
  }

  app->proc_log().set_echo(true);
  if (auto s = app->start(rt); !s.ok()) return report(s.error());
  if (auto err = rt.take_error(); !err.ok()) return report(err.error());

  install_signal_handlers();
  while (!g_stop) {
    rt.poll_once(50);
    if (app->failed()) {
      std::fprintf(stderr, "%s: %s\n", name.c_str(), app->failure_reason().c_str());
      return kExitSubscription;
    }
    if (app->transport_lost()) {
      std::fprintf(stderr, "%s: controller link lost\n", name.c_str());
      return kExitTransport;
    }
  }
  return kExitOk;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<uint64_t> seed, const std::string& clock) {
  auto sc = oran::scenario::Scenario::load(scenario_path);
  if (!sc.ok()) return report(sc.error());
  if (seed) sc->seed = *seed;
  if (!clock.empty()) {
    auto mode = oran::scenario::parse_clock_mode(clock);
    if (!mode.ok()) return report(mode.error());
    sc->clock = *mode;
  }

  auto result = oran::scenario::run_scenario(*sc, out_dir);
  if (!result.ok()) return report(result.error());

  std::fprintf(stderr, "wrote %s\n", result->kpimon_csv_path.c_str());
  std::fprintf(stderr, "wrote %s\n", result->slicing_csv_path.c_str());
  std::fprintf(stderr, "wrote %s\n", result->summary_path.c_str());
  std::fprintf(stderr, "wrote %s\n", result->proclog_path.c_str());
  std::fputs(result->summary_text.c_str(), stdout);
  if (result->kpimon_failed || result->slicing_failed) {
    std::fprintf(stderr, "error: %s\n", result->failure_reason.c_str());
    return kExitSubscription;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale near-real-time RAN controller"};
  app.require_subcommand(1);

  std::string config_path;
  std::string xapp_name;
  std::string scenario_path;
  std::string out_dir = "out";
  std::string clock;
  std::optional<uint64_t> seed;

  auto* ric = app.add_subcommand("ric", "run the controller on TCP sockets");
  ric->add_option("--config", config_path, "controller config file")->required();

  auto* node = app.add_subcommand("node", "run an E2 node with a simulated cell");
  node->add_option("--config", config_path, "node config file")->required();

  auto* xapp = app.add_subcommand("xapp", "run an xApp against a controller");
  xapp->add_option("name", xapp_name, "xapp to run")
      ->required()
      ->check(CLI::IsMember({"kpimon", "slicing"}));
  xapp->add_option("--config", config_path, "xapp config file")->required();

  auto* run = app.add_subcommand("run", "run a scenario in-process and write metrics");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--clock", clock, "det, rt, or rt:<scale>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (ric->parsed()) return cmd_ric(config_path);
  if (node->parsed()) return cmd_node(config_path);
  if (xapp->parsed()) return cmd_xapp(xapp_name, config_path);
  return cmd_run(scenario_path, out_dir, seed, clock);
}
