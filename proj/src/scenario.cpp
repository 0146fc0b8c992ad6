#include "oran/scenario.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <thread>

namespace oran::scenario {

namespace {

// Nearest-integer division so summary numbers stay integral and bit-stable.
uint64_t div_round(uint64_t num, uint64_t den) {
  return den == 0 ? 0 : (num + den / 2) / den;
}

void schedule_steps(net::DetRuntime& rt, sim::RanSim& ran, uint64_t t, uint64_t end_ms) {
  rt.queue().schedule(t, net::EventClass::SubframeStep, [&rt, &ran, t, end_ms] {
    ran.step_subframe();
    if (t < end_ms) schedule_steps(rt, ran, t + 1, end_ms);
  });
}

// One UE session's reported byte series, reassembled from CSV rows. Sessions
// within a report keep their position across reports, which is what tells two
// same-QCI sessions apart.
struct SessionSeries {
  uint32_t node_id = 0;
  std::string qci;
  std::vector<uint64_t> t;
  std::vector<uint64_t> ul;
  std::vector<uint64_t> dl;
};

std::vector<SessionSeries> collect_sessions(const std::vector<xapp::MetricRow>& rows) {
  std::vector<SessionSeries> out;
  // Per node: current timestamp and per-metric session cursor within it.
  struct Cursor {
    uint64_t t = UINT64_MAX;
    size_t dl_seen = 0, ul_seen = 0;
  };
  std::map<uint32_t, Cursor> cursors;
  auto session_at = [&](uint32_t node, size_t idx, const std::string& qci) -> SessionSeries& {
    size_t have = 0;
    for (auto& s : out)
      if (s.node_id == node && have++ == idx) return s;
    out.push_back(SessionSeries{node, qci, {}, {}, {}});
    return out.back();
  };
  for (const auto& r : rows) {
    if (r.container != "O_CU_UP") continue;
    auto& cur = cursors[r.node_id];
    if (r.t_ms != cur.t) cur = Cursor{r.t_ms, 0, 0};
    if (r.metric == "cum_dl_bytes") {
      auto& s = session_at(r.node_id, cur.dl_seen++, r.key);
      s.t.push_back(r.t_ms);
      s.dl.push_back(r.value);
    } else if (r.metric == "cum_ul_bytes") {
      auto& s = session_at(r.node_id, cur.ul_seen++, r.key);
      s.ul.push_back(r.value);
    }
  }
  return out;
}

// Bytes per second between the first and last sample; a single sample is
// taken as a line through the origin.
uint64_t slope_bps(const std::vector<uint64_t>& t, const std::vector<uint64_t>& v) {
  if (t.empty() || v.empty()) return 0;
  uint64_t t0 = t.front(), v0 = v.front();
  uint64_t t1 = t.back(), v1 = v.back();
  if (t.size() == 1) {
    t0 = 0;
    v0 = 0;
  }
  if (t1 <= t0 || v1 < v0) return 0;
  return div_round((v1 - v0) * 1000, t1 - t0);
}

Status write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return Error{ErrCode::ConfigError, "cannot open " + path + " for writing"};
  out << text;
  out.flush();
  if (!out) return Error{ErrCode::ConfigError, "short write to " + path};
  return ok_status();
}

}  // namespace

Expected<ClockMode> parse_clock_mode(const std::string& text) {
  if (text == "det") return ClockMode{false, 1.0};
  if (text == "rt") return ClockMode{true, 1.0};
  if (text.rfind("rt:", 0) == 0) {
    const std::string num = text.substr(3);
    char* end = nullptr;
    double scale = std::strtod(num.c_str(), &end);
    if (num.empty() || end != num.c_str() + num.size() || !(scale > 0))
      return Error{ErrCode::ConfigError, "clock: scale must be a positive number"};
    return ClockMode{true, scale};
  }
  return Error{ErrCode::ConfigError, "clock: expected det, rt, or rt:<scale>"};
}

std::string clock_mode_text(const ClockMode& mode) {
  if (!mode.realtime) return "det";
  char buf[32];
  std::snprintf(buf, sizeof buf, "rt:%g", mode.scale);
  return buf;
}

Expected<Scenario> Scenario::from_config(const KvConfig& cfg) {
  Scenario sc;
  sc.name = cfg.get_or("name", sc.name);

  if (!cfg.has("duration_s")) return Error{ErrCode::MissingKey, "duration_s"};
  auto dur = cfg.get_u64("duration_s");
  if (!dur.ok() || *dur < 1)
    return Error{ErrCode::ConfigError, "duration_s: must be a whole number of seconds, at least 1"};
  sc.duration_s = *dur;

  if (cfg.has("seed")) {
    auto seed = cfg.get_u64("seed");
    if (!seed.ok()) return Error{ErrCode::ConfigError, "seed: not a number"};
    sc.seed = *seed;
  }

  auto clock = parse_clock_mode(cfg.get_or("clock", "det"));
  if (!clock.ok()) return clock.error();
  sc.clock = *clock;

  for (const auto& item : cfg.get_list("xapps")) {
    if (item == "kpimon")
      sc.run_kpimon = true;
    else if (item == "slicing")
      sc.run_slicing = true;
    else
      return Error{ErrCode::ConfigError, "xapps: unknown xapp '" + item + "'"};
  }
  sc.descriptor_dir = cfg.get_or("descriptor_dir", sc.descriptor_dir);

  auto ric = ric::RicConfig::from_config(cfg);
  if (!ric.ok()) return ric.error();
  sc.ric = *ric;
  auto agent = agent::AgentConfig::from_config(cfg);
  if (!agent.ok()) return agent.error();
  sc.agent = *agent;
  auto cell = sim::CellConfig::from_config(cfg);
  if (!cell.ok()) return cell.error();
  sc.cell = *cell;
  auto ues = sim::parse_ues(cfg);
  if (!ues.ok()) return ues.error();
  sc.ues = *ues;
  auto kpimon = xapp::KpimonConfig::from_config(cfg);
  if (!kpimon.ok()) return kpimon.error();
  sc.kpimon = *kpimon;
  auto slicing = xapp::SlicingConfig::from_config(cfg);
  if (!slicing.ok()) return slicing.error();
  sc.slicing = *slicing;

  // Everything runs in one process, so wire the components to each other
  // rather than trusting per-component address keys to agree.
  if (!cfg.has("ric.plmn_allowlist")) sc.ric.plmn_allowlist = {sc.agent.node.plmn};
  sc.agent.ric_addr = sc.ric.e2_listen;
  sc.kpimon.ric_addr = sc.ric.xapp_listen;
  sc.slicing.ric_addr = sc.ric.xapp_listen;
  return sc;
}

Expected<Scenario> Scenario::load(const std::string& path) {
  auto cfg = KvConfig::parse_file(path);
  if (!cfg.ok()) return cfg.error();
  return from_config(*cfg);
}

Expected<RunResult> run_scenario(const Scenario& sc, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return Error{ErrCode::ConfigError, "cannot create output directory " + out_dir};

  RunResult res;
  res.kpimon_csv_path = out_dir + "/kpimon.csv";
  res.slicing_csv_path = out_dir + "/slicing.csv";
  res.summary_path = out_dir + "/summary.txt";
  res.proclog_path = out_dir + "/procedures.log";

  net::DetRuntime rt;
  sim::RanSim ran(sc.cell);
  for (const auto& ue : sc.ues) {
    if (auto s = ran.add_ue(ue); !s.ok()) return s.error();
  }
  ric::Ric ric(sc.ric);
  agent::Agent agent(sc.agent, ran);

  std::optional<xapp::KpimonApp> kpimon;
  std::optional<xapp::SlicingApp> slicing;

  ric.start(rt);
  agent.start(rt);

  if (sc.run_kpimon) {
    auto desc = xapp::load_descriptor(sc.descriptor_dir + "/kpimon.descriptor");
    if (!desc.ok()) return desc.error();
    auto cfg = sc.kpimon;
    cfg.out_csv = res.kpimon_csv_path;
    kpimon.emplace(cfg, *desc);
    if (auto s = kpimon->start(rt); !s.ok()) return s.error();
  } else {
    if (auto s = xapp::write_metrics_csv(res.kpimon_csv_path, {}); !s.ok()) return s.error();
  }
  if (sc.run_slicing) {
    auto desc = xapp::load_descriptor(sc.descriptor_dir + "/slicing.descriptor");
    if (!desc.ok()) return desc.error();
    auto cfg = sc.slicing;
    cfg.out_csv = res.slicing_csv_path;
    slicing.emplace(cfg, *desc);
    if (auto s = slicing->start(rt); !s.ok()) return s.error();
  } else {
    if (auto s = xapp::write_metrics_csv(res.slicing_csv_path, {}); !s.ok()) return s.error();
  }

  const uint64_t duration_ms = sc.duration_s * 1000;
  schedule_steps(rt, ran, 1, duration_ms);

  if (!sc.clock.realtime) {
    rt.run_until(duration_ms);
  } else {
    // Same event order as the deterministic path; only the dispatch times are
    // paced, at `scale` logical milliseconds per wall millisecond.
    const auto wall0 = std::chrono::steady_clock::now();
    while (!rt.queue().empty() && rt.queue().next_at() <= duration_ms) {
      const double wall_ms = static_cast<double>(rt.queue().next_at()) / sc.clock.scale;
      std::this_thread::sleep_until(wall0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                std::chrono::duration<double, std::milli>(wall_ms)));
      rt.queue().run_next();
    }
  }

  if (kpimon) {
    res.kpimon_failed = kpimon->failed() || kpimon->transport_lost();
    res.kpimon_reports = kpimon->reports_received();
    if (kpimon->failed()) res.failure_reason = "kpimon: " + kpimon->failure_reason();
  }
  if (slicing) {
    res.slicing_failed = slicing->failed() || slicing->transport_lost();
    res.slicing_reports = slicing->reports_received();
    if (slicing->failed() && res.failure_reason.empty())
      res.failure_reason = "slicing: " + slicing->failure_reason();
  }
  res.controller_log = ric.proc_log().lines();
  res.node_log = agent.proc_log().lines();

  // --- summary --------------------------------------------------------------
  std::string s;
  s += "# run summary\n";
  s += "scenario = " + sc.name + "\n";
  s += "seed = " + std::to_string(sc.seed) + "\n";
  s += "duration_s = " + std::to_string(sc.duration_s) + "\n";
  s += "clock = " + clock_mode_text(sc.clock) + "\n";

  if (kpimon) {
    s += "\n[kpimon]\n";
    s += "reports = " + std::to_string(kpimon->reports_received()) + "\n";
    auto sessions = collect_sessions(kpimon->rows());
    s += "sessions = " + std::to_string(sessions.size()) + "\n";
    std::map<uint32_t, size_t> idx;
    for (const auto& sess : sessions) {
      const size_t i = idx[sess.node_id]++;
      s += "node " + std::to_string(sess.node_id) + " session " + std::to_string(i) +
           ": qci = " + sess.qci + ", cum_ul_bytes = " + std::to_string(sess.ul.empty() ? 0 : sess.ul.back()) +
           ", ul_slope_bytes_per_s = " + std::to_string(slope_bps(sess.t, sess.ul)) +
           ", cum_dl_bytes = " + std::to_string(sess.dl.empty() ? 0 : sess.dl.back()) +
           ", dl_slope_bytes_per_s = " + std::to_string(slope_bps(sess.t, sess.dl)) + "\n";
    }
  }

  if (slicing) {
    s += "\n[slicing]\n";
    s += "reports = " + std::to_string(slicing->reports_received()) + "\n";
    s += "controls_acked = " + std::to_string(slicing->acks_received()) + "\n";
    s += "controls_failed = " + std::to_string(slicing->control_failures()) + "\n";

    // Phase windows come from the share schedule; within each phase the first
    // epoch after the change is a transition and stays out of the mean.
    std::vector<uint64_t> bounds{0};
    for (const auto& p : sc.slicing.schedule.points)
      if (p.at_s != 0) bounds.push_back(p.at_s);
    s += "phases = " + std::to_string(bounds.size()) + "\n";
    const uint64_t period = sc.slicing.report_period_ms;
    for (size_t i = 0; i < bounds.size(); ++i) {
      const uint64_t start_ms = bounds[i] * 1000;
      const uint64_t end_ms = i + 1 < bounds.size() ? bounds[i + 1] * 1000 : duration_ms;
      for (const auto& slice : sc.slicing.schedule.slices) {
        const std::string key = std::to_string(slice.slice_id);
        uint64_t sum = 0, count = 0;
        for (const auto& r : slicing->rows()) {
          if (r.metric != "throughput_bps" || r.key != key) continue;
          if (r.t_ms < start_ms + sim::kEpochSubframes + period || r.t_ms > end_ms) continue;
          sum += r.value;
          ++count;
        }
        s += "phase " + std::to_string(i) + " [" + std::to_string(bounds[i]) + "s," +
             std::to_string(end_ms / 1000) + "s) slice " + key +
             ": mean_throughput_bps = " + std::to_string(div_round(sum, count)) +
             ", samples = " + std::to_string(count) + "\n";
      }
    }
  }
  res.summary_text = s;
  if (auto st = write_text(res.summary_path, s); !st.ok()) return st.error();

  std::string log_text = "# controller\n";
  for (const auto& line : res.controller_log) log_text += line + "\n";
  log_text += "# node " + e2ap::node_key(sc.agent.node) + "\n";
  for (const auto& line : res.node_log) log_text += line + "\n";
  if (auto st = write_text(res.proclog_path, log_text); !st.ok()) return st.error();

  return res;
}

}  // namespace oran::scenario
