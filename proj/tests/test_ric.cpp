#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "oran/agent.hpp"
#include "oran/ric.hpp"
#include "oran/sm_kpm.hpp"
#include "oran/sm_slicing.hpp"
#include "oran/transport.hpp"

using namespace oran;

namespace {

constexpr const char* kE2Addr = "mem://ric-e2";
constexpr const char* kXappAddr = "mem://ric-xapp";

e2ap::GlobalE2NodeId make_node(uint32_t id = 1) {
  e2ap::GlobalE2NodeId n;
  n.plmn = *parse_plmn("001/01");
  n.node_type = e2ap::NodeType::EN_GNB;
  n.node_id = id;
  return n;
}

ric::RicConfig ric_config() {
  ric::RicConfig cfg;
  cfg.e2_listen = kE2Addr;
  cfg.xapp_listen = kXappAddr;
  cfg.plmn_allowlist = {*parse_plmn("001/01")};
  return cfg;
}

agent::AgentConfig agent_config(uint32_t node_id = 1) {
  agent::AgentConfig cfg;
  cfg.ric_addr = kE2Addr;
  cfg.node = make_node(node_id);
  cfg.functions = agent::default_functions();
  return cfg;
}

sim::CellConfig cell_10mhz() { return sim::CellConfig{}; }

// Schedules a subframe step at every millisecond in (0, until_ms].
void drive_sim(net::DetRuntime& rt, sim::RanSim& sim, uint64_t until_ms) {
  for (uint64_t t = 1; t <= until_ms; ++t)
    rt.queue().schedule(t, net::EventClass::SubframeStep, [&sim] { sim.step_subframe(); });
}

// Scripted xApp-side client.
struct XappClient : net::Handler {
  net::Services* svc = nullptr;
  std::string name = "kpimon";
  bool auto_register = true;
  bool registered = false;
  bool closed = false;
  net::ConnId conn = 0;
  std::vector<xapp::XappPdu> msgs;
  std::vector<e2ap::RicIndication> inds;

  void connect(net::Services& s) {
    svc = &s;
    conn = s.connect(kXappAddr, *this);
  }
  void send(const xapp::XappPdu& p) {
    auto b = xapp::encode_pdu(p);
    REQUIRE(b.ok());
    svc->send_frame(conn, 0, *b);
  }
  void subscribe(const e2ap::GlobalE2NodeId& node, uint16_t fid, uint32_t period_ms,
                 std::vector<e2ap::RicAction> actions = {{1, e2ap::ActionType::REPORT, {}}}) {
    xapp::XappSubscribe m;
    m.node = node;
    m.function_id = fid;
    m.event_trigger = kpm::encode_trigger({period_ms});
    m.actions = std::move(actions);
    send(m);
  }
  void control(const e2ap::GlobalE2NodeId& node, const slicing::Control& cmd, bool ack) {
    xapp::XappControl m;
    m.node = node;
    m.function_id = slicing::kFunctionId;
    auto msg = slicing::encode_control(cmd);
    REQUIRE(msg.ok());
    m.message = *msg;
    m.ack_requested = ack;
    send(m);
  }

  void on_connected(net::ConnId c) override {
    conn = c;
    if (auto_register) send(xapp::XappRegister{name});
  }
  void on_frame(net::ConnId, const e2ap::Frame& f) override {
    if (!f.payload.empty() && f.payload[0] == e2ap::tag::kIndication) {
      auto d = e2ap::decode_pdu(f.payload);
      REQUIRE(d.ok());
      inds.push_back(std::get<e2ap::RicIndication>(*d));
      return;
    }
    auto d = xapp::decode_pdu(f.payload);
    REQUIRE(d.ok());
    if (std::holds_alternative<xapp::XappRegisterAck>(*d)) registered = true;
    msgs.push_back(std::move(*d));
  }
  void on_closed(net::ConnId) override { closed = true; }

  template <typename T>
  const T* last() const {
    for (auto it = msgs.rbegin(); it != msgs.rend(); ++it)
      if (auto* m = std::get_if<T>(&*it)) return m;
    return nullptr;
  }
  template <typename T>
  size_t count() const {
    return std::count_if(msgs.begin(), msgs.end(),
                         [](const auto& m) { return std::holds_alternative<T>(m); });
  }
};

// Scripted node-side endpoint (stand-in for a real agent).
struct FakeNode : net::Handler {
  net::Services* svc = nullptr;
  e2ap::GlobalE2NodeId node = make_node();
  std::vector<e2ap::RanFunctionItem> functions = agent::default_functions();
  bool auto_setup = true;
  bool answer_subscriptions = false;
  net::ConnId conn = 0;
  std::vector<e2ap::E2apPdu> msgs;
  bool closed = false;

  void connect(net::Services& s) {
    svc = &s;
    conn = s.connect(kE2Addr, *this);
  }
  void send(uint8_t stream, const e2ap::E2apPdu& p) {
    auto b = e2ap::encode_pdu(p);
    REQUIRE(b.ok());
    svc->send_frame(conn, stream, *b);
  }
  void on_connected(net::ConnId c) override {
    conn = c;
    if (auto_setup) send(0, e2ap::E2SetupRequest{node, functions});
  }
  void on_frame(net::ConnId, const e2ap::Frame& f) override {
    auto d = e2ap::decode_pdu(f.payload);
    REQUIRE(d.ok());
    msgs.push_back(*d);
    if (answer_subscriptions) {
      if (auto* req = std::get_if<e2ap::RicSubscriptionRequest>(&*d)) {
        std::vector<uint8_t> admitted;
        for (const auto& a : req->actions)
          if (a.action_type == e2ap::ActionType::REPORT) admitted.push_back(a.action_id);
        send(e2ap::stream_for_function(req->function_id),
             e2ap::RicSubscriptionResponse{req->request_id, admitted});
      }
    }
  }
  void on_closed(net::ConnId) override { closed = true; }

  template <typename T>
  const T* last() const {
    for (auto it = msgs.rbegin(); it != msgs.rend(); ++it)
      if (auto* m = std::get_if<T>(&*it)) return m;
    return nullptr;
  }
  template <typename T>
  size_t count() const {
    return std::count_if(msgs.begin(), msgs.end(),
                         [](const auto& m) { return std::holds_alternative<T>(m); });
  }
};

// Scripted controller endpoint speaking raw E2AP at the agent.
struct FakeRic : net::Handler {
  net::Services* svc = nullptr;
  net::ConnId conn = 0;
  std::vector<e2ap::E2apPdu> msgs;
  void on_accept(net::ConnId c) override { conn = c; }
  void on_frame(net::ConnId, const e2ap::Frame& f) override {
    auto d = e2ap::decode_pdu(f.payload);
    REQUIRE(d.ok());
    if (std::holds_alternative<e2ap::E2SetupRequest>(*d)) {
      auto b = e2ap::encode_pdu(e2ap::E2SetupResponse{{0, 1}});
      svc->send_frame(conn, 0, *b);
      return;
    }
    msgs.push_back(*d);
  }
  void send(uint8_t stream, const e2ap::E2apPdu& p) {
    auto b = e2ap::encode_pdu(p);
    REQUIRE(b.ok());
    svc->send_frame(conn, stream, *b);
  }
  template <typename T>
  const T* last() const {
    for (auto it = msgs.rbegin(); it != msgs.rend(); ++it)
      if (auto* m = std::get_if<T>(&*it)) return m;
    return nullptr;
  }
};

size_t count_log(const ProcLog& log, const std::string& needle) {
  size_t n = 0;
  for (const auto& line : log.lines())
    if (line.find(needle) != std::string::npos) ++n;
  return n;
}

}  // namespace

TEST_CASE("requestor ids derive stably from the xapp name") {
  // Independently computed FNV-1a(name) mod 2^16.
  CHECK(ric::Ric::requestor_for("kpimon") == 49921);
  CHECK(ric::Ric::requestor_for("slicing") == 3874);
  CHECK(ric::Ric::requestor_for("xapp-a") == 37428);
  CHECK(ric::Ric::requestor_for("xapp-b") == 38733);
}

TEST_CASE("sdl versions count up from one and counters survive as text") {
  ric::Sdl sdl;
  CHECK(sdl.put("ns", "k", {1}) == 1);
  CHECK(sdl.put("ns", "k", {2}) == 2);
  CHECK(sdl.put("ns", "other", {3}) == 1);
  auto e = sdl.get("ns", "k");
  REQUIRE(e.has_value());
  CHECK(e->version == 2);
  CHECK(e->value == std::vector<uint8_t>{2});
  CHECK_FALSE(sdl.get("nope", "k").has_value());
  CHECK(sdl.bump_counter("stats", "c") == 1);
  CHECK(sdl.bump_counter("stats", "c") == 2);
  CHECK(sdl.read_counter("stats", "c") == 2);
  auto raw = sdl.get("stats", "c");
  REQUIRE(raw.has_value());
  CHECK(std::string(raw->value.begin(), raw->value.end()) == "2");
  CHECK(sdl.keys("ns") == std::vector<std::string>{"k", "other"});
}

TEST_CASE("sdl journal records every write") {
  std::string path = "build/test-sdl-journal.txt";
  {
    ric::Sdl sdl(path);
    sdl.put("rnib", "a", {0xAB});
    sdl.put_text("stats", "n", "7");
  }
  std::FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[256];
  std::string content;
  while (std::fgets(buf, sizeof buf, f)) content += buf;
  std::fclose(f);
  CHECK(content == "rnib a 1 ab\nstats n 1 37\n");
}

TEST_CASE("setup handshake registers the node once") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  sim::RanSim sim(cell_10mhz());
  agent::Agent ag(agent_config(), sim);
  ag.start(rt);
  rt.run_all();

  CHECK(ag.state() == agent::AgentState::Connected);
  CHECK(ag.setup_attempts() == 1);
  REQUIRE(ric.rnib().size() == 1);
  const auto& entry = ric.rnib().begin()->second;
  CHECK(ric.rnib().begin()->first == "001/01/EN_GNB/1");
  CHECK(entry.status == rnib::NodeStatus::Connected);
  CHECK(entry.connected_at_ms == 0);
  REQUIRE(entry.functions.size() == 2);
  CHECK(entry.functions[0].function_id == 0);
  CHECK(entry.functions[0].sm_name == "ORANSC-KPM");
  CHECK(entry.functions[1].function_id == 1);
  CHECK(entry.functions[1].sm_name == "ORANSC-SLICE");

  // Exactly one exchange on the wire.
  CHECK(count_log(ric.proc_log(), "rx pdu=E2SetupRequest") == 1);
  CHECK(count_log(ric.proc_log(), "tx pdu=E2SetupResponse") == 1);

  // Persisted through the data layer with version 1.
  auto stored = ric.sdl().get("rnib", "001/01/EN_GNB/1");
  REQUIRE(stored.has_value());
  CHECK(stored->version == 1);
  auto decoded = rnib::decode_rnib_entry(stored->value);
  REQUIRE(decoded.ok());
  CHECK(*decoded == entry);
}

TEST_CASE("node outside the allowlist is refused and keeps retrying") {
  net::DetRuntime rt;
  ric::RicConfig cfg = ric_config();
  cfg.plmn_allowlist = {*parse_plmn("310/410")};
  ric::Ric ric(cfg);
  ric.start(rt);
  sim::RanSim sim(cell_10mhz());
  agent::AgentConfig acfg = agent_config();
  acfg.retry_interval_ms = 5000;
  agent::Agent ag(acfg, sim);
  ag.start(rt);

  rt.run_until(4999);
  CHECK(ag.state() != agent::AgentState::Connected);
  CHECK(ric.rnib().empty());
  CHECK(ag.setup_attempts() == 1);
  rt.run_until(10000);
  // Still refused, still trying: one fresh attempt per retry interval.
  CHECK(ag.setup_attempts() == 3);
  CHECK(ric.rnib().empty());
}

TEST_CASE("second connection claiming a live node id is refused") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  FakeNode first, second;
  first.connect(rt);
  rt.run_all();
  REQUIRE(ric.rnib().size() == 1);
  uint64_t routed_version = ric.sdl().get("rnib", "001/01/EN_GNB/1")->version;

  second.connect(rt);
  rt.run_all();
  auto* failure = second.last<e2ap::E2SetupFailure>();
  REQUIRE(failure != nullptr);
  CHECK(failure->cause.category == e2ap::CauseCategory::PROTOCOL);
  CHECK(failure->cause.code == e2ap::cause::kDuplicateNode);
  CHECK(second.closed);
  // First registration untouched.
  CHECK(ric.rnib().size() == 1);
  CHECK(ric.rnib().begin()->second.status == rnib::NodeStatus::Connected);
  CHECK(ric.sdl().get("rnib", "001/01/EN_GNB/1")->version == routed_version);
  CHECK_FALSE(first.closed);
}

TEST_CASE("repeated setup on the same connection overwrites the entry") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  FakeNode node;
  node.connect(rt);
  rt.run_all();
  REQUIRE(ric.rnib().size() == 1);
  CHECK(ric.rnib().begin()->second.functions.size() == 2);

  node.functions = {agent::default_functions()[0]};  // drop the slicing SM
  node.send(0, e2ap::E2SetupRequest{node.node, node.functions});
  rt.run_all();
  REQUIRE(ric.rnib().size() == 1);
  CHECK(ric.rnib().begin()->second.functions.size() == 1);
  CHECK(ric.sdl().get("rnib", "001/01/EN_GNB/1")->version == 2);
  CHECK(node.count<e2ap::E2SetupResponse>() == 2);
}

TEST_CASE("subscription goes active end-to-end and indications flow") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  sim::RanSim sim(cell_10mhz());
  REQUIRE(sim.add_ue({1, 9, 4'000'000, 0}).ok());
  agent::Agent ag(agent_config(), sim);
  ag.start(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();
  REQUIRE(xa.registered);

  xa.subscribe(make_node(), kpm::kFunctionId, 1000);
  rt.run_until(0);

  auto* res = xa.last<xapp::XappSubscribeResult>();
  REQUIRE(res != nullptr);
  CHECK(res->outcome == xapp::SubscribeOutcome::Active);
  CHECK(res->request_id.requestor_id == 49921);
  CHECK(res->request_id.instance_id == 1);
  CHECK(res->admitted_action_ids == std::vector<uint8_t>{1});
  REQUIRE(ric.subscriptions().size() == 1);
  CHECK(ric.subscriptions()[0].state == ric::SubState::Active);
  CHECK(ric.subscriptions()[0].xapp_id == "kpimon");

  drive_sim(rt, sim, 3000);
  rt.run_until(3000);
  REQUIRE(xa.inds.size() == 3);
  CHECK(xa.inds[0].sequence_number == 1);
  CHECK(xa.inds[1].sequence_number == 2);
  CHECK(xa.inds[2].sequence_number == 3);
  CHECK(xa.inds[0].request_id == res->request_id);

  auto header = kpm::decode_header(xa.inds[0].header);
  REQUIRE(header.ok());
  CHECK(header->timestamp_ms == 1000);
  CHECK(header->node_id == 1);
  auto report = kpm::decode_report(xa.inds[0].message);
  REQUIRE(report.ok());
  REQUIRE(report->containers.size() == 3);
  // 4 Mbps offered uplink for one second.
  const auto& up = std::get<kpm::OcuUpMetrics>(report->containers[2].metrics);
  REQUIRE(up.stats.size() == 1);
  CHECK(up.stats[0].cum_ul_bytes == 500'000);
  CHECK(ric.indications_routed() == 3);
  CHECK(ric.indications_dropped() == 0);
}

TEST_CASE("subscribing against an unknown node fails locally") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();
  xa.subscribe(make_node(42), kpm::kFunctionId, 1000);
  rt.run_all();
  auto* res = xa.last<xapp::XappSubscribeResult>();
  REQUIRE(res != nullptr);
  CHECK(res->outcome == xapp::SubscribeOutcome::Failed);
  CHECK(res->cause.category == e2ap::CauseCategory::MISC);
  CHECK(res->cause.code == e2ap::cause::kUnknownNode);
  CHECK(res->request_id.instance_id == 0);  // nothing was created
  CHECK(ric.subscriptions().empty());
  CHECK(count_log(ric.proc_log(), "tx pdu=RicSubscriptionRequest") == 0);
}

TEST_CASE("subscribing to a function the node lacks fails locally") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  FakeNode node;
  node.connect(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();
  xa.subscribe(node.node, 7, 1000);
  rt.run_all();
  auto* res = xa.last<xapp::XappSubscribeResult>();
  REQUIRE(res != nullptr);
  CHECK(res->outcome == xapp::SubscribeOutcome::Failed);
  CHECK(res->cause.category == e2ap::CauseCategory::RIC_SERVICE);
  CHECK(res->cause.code == e2ap::cause::kFunctionNotSupported);
  CHECK(node.count<e2ap::RicSubscriptionRequest>() == 0);
}

TEST_CASE("malformed trigger is rejected by the node with a protocol cause") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  sim::RanSim sim(cell_10mhz());
  agent::Agent ag(agent_config(), sim);
  ag.start(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();

  xapp::XappSubscribe m;
  m.node = make_node();
  m.function_id = kpm::kFunctionId;
  m.event_trigger = {0xFF};  // not a valid trigger
  m.actions = {{1, e2ap::ActionType::REPORT, {}}};
  xa.send(m);
  rt.run_all();

  auto* res = xa.last<xapp::XappSubscribeResult>();
  REQUIRE(res != nullptr);
  CHECK(res->outcome == xapp::SubscribeOutcome::Failed);
  CHECK(res->cause.category == e2ap::CauseCategory::PROTOCOL);
  CHECK(res->cause.code == e2ap::cause::kMalformedTrigger);
  REQUIRE(ric.subscriptions().size() == 1);
  CHECK(ric.subscriptions()[0].state == ric::SubState::Failed);
  CHECK(ag.subscriptions().empty());
  // The request id is released once the subscription fails.
  xa.subscribe(make_node(), kpm::kFunctionId, 1000);
  rt.run_until(0);
  auto* res2 = xa.last<xapp::XappSubscribeResult>();
  REQUIRE(res2 != nullptr);
  CHECK(res2->outcome == xapp::SubscribeOutcome::Active);
  CHECK(res2->request_id.instance_id == 2);
}

TEST_CASE("unanswered subscription times out as a transport failure") {
  net::DetRuntime rt;
  ric::RicConfig cfg = ric_config();
  cfg.timeout_ms = 2000;
  ric::Ric ric(cfg);
  ric.start(rt);
  FakeNode node;  // never answers subscription requests
  node.connect(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();

  xa.subscribe(node.node, kpm::kFunctionId, 1000);
  rt.run_until(1999);
  CHECK(ric.subscriptions()[0].state == ric::SubState::Pending);
  CHECK(xa.last<xapp::XappSubscribeResult>() == nullptr);
  rt.run_until(2000);
  auto* res = xa.last<xapp::XappSubscribeResult>();
  REQUIRE(res != nullptr);
  CHECK(res->outcome == xapp::SubscribeOutcome::Failed);
  CHECK(res->cause.category == e2ap::CauseCategory::TRANSPORT);
  CHECK(res->cause.code == e2ap::cause::kTimeout);
  CHECK(ric.subscriptions()[0].state == ric::SubState::Failed);

  // A late answer from the node cannot resurrect the subscription.
  auto* req = node.last<e2ap::RicSubscriptionRequest>();
  REQUIRE(req != nullptr);
  node.send(1, e2ap::RicSubscriptionResponse{req->request_id, {1}});
  rt.run_all();
  CHECK(ric.subscriptions()[0].state == ric::SubState::Failed);
}

TEST_CASE("node disconnect fails live subscriptions and flips the rnib entry") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  FakeNode node;
  node.answer_subscriptions = true;
  node.connect(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();
  xa.subscribe(node.node, kpm::kFunctionId, 1000);
  rt.run_all();
  REQUIRE(ric.subscriptions()[0].state == ric::SubState::Active);

  rt.close(node.conn);
  rt.run_all();
  CHECK(ric.rnib().begin()->second.status == rnib::NodeStatus::Disconnected);
  CHECK(ric.subscriptions()[0].state == ric::SubState::Failed);
  CHECK(ric.subscriptions()[0].failure_cause.category == e2ap::CauseCategory::TRANSPORT);
  CHECK(ric.subscriptions()[0].failure_cause.code == e2ap::cause::kConnectionLost);
  auto* res = xa.last<xapp::XappSubscribeResult>();
  REQUIRE(res != nullptr);
  CHECK(res->outcome == xapp::SubscribeOutcome::Failed);
  // The SDL now holds the disconnected entry as a new version.
  auto stored = ric.sdl().get("rnib", "001/01/EN_GNB/1");
  CHECK(stored->version == 2);
  CHECK(rnib::decode_rnib_entry(stored->value)->status == rnib::NodeStatus::Disconnected);
  // Subscribing against the disconnected node is a local unknown-node reject.
  xa.subscribe(node.node, kpm::kFunctionId, 1000);
  rt.run_all();
  CHECK(xa.last<xapp::XappSubscribeResult>()->cause.code == e2ap::cause::kUnknownNode);
}

TEST_CASE("control round trip acks and applies slice state") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  sim::RanSim sim(cell_10mhz());
  REQUIRE(sim.add_ue({1, 9, 0, 8'000'000}).ok());
  agent::Agent ag(agent_config(), sim);
  ag.start(rt);
  XappClient xa;
  xa.name = "slicing";
  xa.connect(rt);
  rt.run_all();

  xa.control(make_node(), slicing::CreateSlice{1, "gold"}, true);
  rt.run_all();
  auto* res = xa.last<xapp::XappControlResult>();
  REQUIRE(res != nullptr);
  CHECK(res->outcome == xapp::ControlOutcome::Acked);
  CHECK(res->request_id.requestor_id == 3874);
  CHECK(sim.has_slice(1));

  SUBCASE("validation failure is reported with the violation cause") {
    xa.control(make_node(), slicing::ConfigureShares{{{9, 50}}}, true);
    rt.run_all();
    auto* f = xa.last<xapp::XappControlResult>();
    REQUIRE(f != nullptr);
    CHECK(f->outcome == xapp::ControlOutcome::Failed);
    CHECK(f->cause.category == e2ap::CauseCategory::RIC_SERVICE);
    CHECK(f->cause.code == e2ap::cause::kUnknownSlice);
  }
  SUBCASE("share sum violation maps to its own cause") {
    // The honest encoder refuses such a vector, so lay the bytes down by
    // hand: opcode 2, one entry, slice 1 at 101 percent.
    xapp::XappControl m;
    m.node = make_node();
    m.function_id = slicing::kFunctionId;
    m.message = {0x02, 0x01, 0x01, 0x65};
    m.ack_requested = true;
    xa.send(m);
    rt.run_all();
    CHECK(xa.last<xapp::XappControlResult>()->cause.code == e2ap::cause::kShareSumExceeded);
  }
  SUBCASE("duplicate slice create maps to its own cause") {
    xa.control(make_node(), slicing::CreateSlice{1, "again"}, true);
    rt.run_all();
    CHECK(xa.last<xapp::XappControlResult>()->cause.code == e2ap::cause::kDuplicateSliceId);
  }
  SUBCASE("no-ack control is fire-and-forget") {
    xa.control(make_node(), slicing::BindUe{1, 1}, false);
    rt.run_all();
    auto* r = xa.last<xapp::XappControlResult>();
    REQUIRE(r != nullptr);
    CHECK(r->outcome == xapp::ControlOutcome::SentNoAck);
    // Applied even though nobody asked for an ack.
    CHECK(sim.slice_count() == 1);
  }
  SUBCASE("control against a node without the function is rejected locally") {
    xapp::XappControl m;
    m.node = make_node(9);
    m.function_id = slicing::kFunctionId;
    m.message = {0x00};
    m.ack_requested = true;
    xa.send(m);
    rt.run_all();
    CHECK(xa.last<xapp::XappControlResult>()->cause.code == e2ap::cause::kUnknownNode);
  }
}

TEST_CASE("unanswered control times out as a transport failure") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  FakeNode node;  // silent on control
  node.connect(rt);
  XappClient xa;
  xa.name = "slicing";
  xa.connect(rt);
  rt.run_all();
  xa.control(node.node, slicing::CreateSlice{1, "gold"}, true);
  rt.run_until(2000);
  auto* res = xa.last<xapp::XappControlResult>();
  REQUIRE(res != nullptr);
  CHECK(res->outcome == xapp::ControlOutcome::Failed);
  CHECK(res->cause.category == e2ap::CauseCategory::TRANSPORT);
  CHECK(res->cause.code == e2ap::cause::kTimeout);
}

TEST_CASE("controller reset clears node sessions and restarts sequences") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  sim::RanSim sim(cell_10mhz());
  REQUIRE(sim.add_ue({1, 9, 4'000'000, 0}).ok());
  agent::Agent ag(agent_config(), sim);
  ag.start(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();
  xa.subscribe(make_node(), kpm::kFunctionId, 1000);
  rt.run_until(0);
  drive_sim(rt, sim, 6000);
  rt.run_until(2500);
  REQUIRE(xa.inds.size() == 2);
  CHECK(xa.inds.back().sequence_number == 2);

  REQUIRE(ric.reset_node(make_node()).ok());
  rt.run_until(2600);
  CHECK(ag.subscriptions().empty());
  CHECK(ric.subscriptions()[0].state == ric::SubState::Failed);
  CHECK(count_log(ric.proc_log(), "rx pdu=ResetResponse") == 1);

  // No further indications arrive after the reset.
  rt.run_until(5000);
  CHECK(xa.inds.size() == 2);
  // R-NIB keeps the node CONNECTED; re-subscribing works and numbering
  // restarts from one.
  CHECK(ric.rnib().begin()->second.status == rnib::NodeStatus::Connected);
  xa.subscribe(make_node(), kpm::kFunctionId, 1000);
  rt.run_until(6000);
  REQUIRE(xa.inds.size() == 3);
  CHECK(xa.inds.back().sequence_number == 1);
  CHECK(xa.inds.back().request_id.instance_id == 2);
}

TEST_CASE("node initiated reset fails subscriptions but keeps the entry") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  FakeNode node;
  node.answer_subscriptions = true;
  node.connect(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();
  xa.subscribe(node.node, kpm::kFunctionId, 1000);
  rt.run_all();
  REQUIRE(ric.subscriptions()[0].state == ric::SubState::Active);

  node.send(0, e2ap::ResetRequest{{e2ap::CauseCategory::MISC, 0}});
  rt.run_all();
  CHECK(node.count<e2ap::ResetResponse>() == 1);
  CHECK(ric.subscriptions()[0].state == ric::SubState::Failed);
  CHECK(ric.rnib().begin()->second.status == rnib::NodeStatus::Connected);
}

TEST_CASE("indications without a route are counted and dropped") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  FakeNode node;
  node.connect(rt);
  rt.run_all();
  e2ap::RicIndication ind;
  ind.request_id = {1234, 1};
  ind.function_id = 0;
  ind.sequence_number = 1;
  ind.header = {0x00};
  ind.message = {0x00};
  node.send(1, ind);
  rt.run_all();
  CHECK(ric.indications_dropped() == 1);
  CHECK(ric.indications_routed() == 0);
  // The drop counter lives in the stats namespace of the data layer.
  CHECK(ric.sdl().read_counter("ric-stats", "indications_dropped") == 1);
}

TEST_CASE("rnib query and sdl get answer over the xapp link") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  FakeNode node;
  node.connect(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();

  xa.send(xapp::RnibQuery{});
  rt.run_all();
  auto* rn = xa.last<xapp::RnibResult>();
  REQUIRE(rn != nullptr);
  REQUIRE(rn->entries.size() == 1);
  CHECK(rn->entries[0].node == node.node);
  CHECK(rn->entries[0].functions.size() == 2);

  xa.send(xapp::SdlGet{"rnib", "001/01/EN_GNB/1"});
  rt.run_all();
  auto* sv = xa.last<xapp::SdlValue>();
  REQUIRE(sv != nullptr);
  CHECK(sv->found);
  CHECK(sv->version == 1);
  CHECK(rnib::decode_rnib_entry(sv->value).ok());

  xa.send(xapp::SdlGet{"rnib", "no-such-node"});
  rt.run_all();
  CHECK_FALSE(xa.last<xapp::SdlValue>()->found);
}

TEST_CASE("unregistered xapp traffic closes the link") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  XappClient xa;
  xa.auto_register = false;
  xa.connect(rt);
  rt.run_all();
  xa.send(xapp::RnibQuery{});
  rt.run_all();
  CHECK(xa.closed);
  CHECK(xa.msgs.empty());
}

TEST_CASE("agent retries until the controller comes up") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  sim::RanSim sim(cell_10mhz());
  agent::AgentConfig acfg = agent_config();
  acfg.retry_interval_ms = 5000;
  agent::Agent ag(acfg, sim);
  ag.start(rt);
  // The controller appears twelve seconds in.
  rt.queue().schedule(12000, net::EventClass::Timer, [&] { ric.start(rt); });
  rt.run_until(14999);
  CHECK(ag.state() != agent::AgentState::Connected);
  CHECK(ag.setup_attempts() == 3);
  rt.run_until(15000);
  CHECK(ag.state() == agent::AgentState::Connected);
  CHECK(ag.setup_attempts() == 4);
  CHECK(ric.rnib().size() == 1);
  CHECK(ric.rnib().begin()->second.connected_at_ms == 15000);
}

TEST_CASE("agent answers direct subscription edge cases") {
  net::DetRuntime rt;
  FakeRic fric;
  fric.svc = &rt;
  rt.listen(kE2Addr, fric);
  sim::RanSim sim(cell_10mhz());
  agent::Agent ag(agent_config(), sim);
  ag.start(rt);
  rt.run_all();
  REQUIRE(ag.state() == agent::AgentState::Connected);

  SUBCASE("unknown function id") {
    fric.send(1, e2ap::RicSubscriptionRequest{{1, 1}, 9, kpm::encode_trigger({1000}), {{1, e2ap::ActionType::REPORT, {}}}});
    rt.run_all();
    auto* f = fric.last<e2ap::RicSubscriptionFailure>();
    REQUIRE(f != nullptr);
    CHECK(f->cause.category == e2ap::CauseCategory::RIC_SERVICE);
    CHECK(f->cause.code == e2ap::cause::kFunctionNotSupported);
    CHECK(ag.subscriptions().empty());
  }
  SUBCASE("undecodable trigger") {
    fric.send(1, e2ap::RicSubscriptionRequest{{1, 2}, 0, {0xAA, 0xBB}, {{1, e2ap::ActionType::REPORT, {}}}});
    rt.run_all();
    auto* f = fric.last<e2ap::RicSubscriptionFailure>();
    REQUIRE(f != nullptr);
    CHECK(f->cause.category == e2ap::CauseCategory::PROTOCOL);
    CHECK(f->cause.code == e2ap::cause::kMalformedTrigger);
  }
  SUBCASE("zero period trigger") {
    fric.send(1, e2ap::RicSubscriptionRequest{{1, 3}, 0, {0, 0, 0, 0}, {{1, e2ap::ActionType::REPORT, {}}}});
    rt.run_all();
    CHECK(fric.last<e2ap::RicSubscriptionFailure>()->cause.code == e2ap::cause::kMalformedTrigger);
  }
  SUBCASE("only non-report actions") {
    fric.send(1, e2ap::RicSubscriptionRequest{
                     {1, 4}, 0, kpm::encode_trigger({1000}),
                     {{1, e2ap::ActionType::INSERT, {}}, {2, e2ap::ActionType::POLICY, {}}}});
    rt.run_all();
    auto* f = fric.last<e2ap::RicSubscriptionFailure>();
    REQUIRE(f != nullptr);
    CHECK(f->cause.code == e2ap::cause::kActionNotSupported);
    CHECK(ag.subscriptions().empty());
  }
  SUBCASE("mixed actions admit only report") {
    fric.send(1, e2ap::RicSubscriptionRequest{
                     {1, 5}, 0, kpm::encode_trigger({1000}),
                     {{3, e2ap::ActionType::REPORT, {}}, {4, e2ap::ActionType::POLICY, {}}}});
    rt.run_until(0);
    auto* r = fric.last<e2ap::RicSubscriptionResponse>();
    REQUIRE(r != nullptr);
    CHECK(r->admitted_action_ids == std::vector<uint8_t>{3});
    REQUIRE(ag.subscriptions().size() == 1);
    CHECK(ag.subscriptions()[0].action_id == 3);
    CHECK(ag.subscriptions()[0].sequence_number == 1);
    CHECK(ag.subscriptions()[0].next_fire_ms == 1000);
  }
  SUBCASE("control on the kpm function is refused") {
    fric.send(1, e2ap::RicControlRequest{{1, 6}, 0, {}, {0x00}, true});
    rt.run_all();
    auto* f = fric.last<e2ap::RicControlFailure>();
    REQUIRE(f != nullptr);
    CHECK(f->cause.code == e2ap::cause::kFunctionNotSupported);
  }
  SUBCASE("garbage control payload is a protocol failure") {
    fric.send(2, e2ap::RicControlRequest{{1, 7}, 1, {}, {0xEE, 0xFF}, true});
    rt.run_all();
    auto* f = fric.last<e2ap::RicControlFailure>();
    REQUIRE(f != nullptr);
    CHECK(f->cause.category == e2ap::CauseCategory::PROTOCOL);
    CHECK(f->cause.code == e2ap::cause::kMalformedPayload);
  }
}

TEST_CASE("report timer keeps a drift-free cadence and drops when offline") {
  net::DetRuntime rt;
  ric::Ric ric(ric_config());
  ric.start(rt);
  sim::RanSim sim(cell_10mhz());
  REQUIRE(sim.add_ue({1, 9, 4'000'000, 0}).ok());
  agent::Agent ag(agent_config(), sim);
  ag.start(rt);
  XappClient xa;
  xa.connect(rt);
  rt.run_all();
  xa.subscribe(make_node(), kpm::kFunctionId, 700);
  rt.run_until(0);
  drive_sim(rt, sim, 3000);
  rt.run_until(3000);
  // Fires at 700, 1400, 2100, 2800: exact multiples, no drift.
  REQUIRE(xa.inds.size() == 4);
  for (size_t i = 0; i < xa.inds.size(); ++i) {
    auto h = kpm::decode_header(xa.inds[i].header);
    REQUIRE(h.ok());
    CHECK(h->timestamp_ms == 700 * (i + 1));
  }
  CHECK(ag.reports_sent() == 4);
  CHECK(ag.reports_dropped() == 0);
}
