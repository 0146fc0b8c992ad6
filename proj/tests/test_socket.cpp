// Socket runtime: the same components that run deterministically in memory,
// carried over real loopback TCP with poll-driven dispatch.

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "oran/agent.hpp"
#include "oran/ran_sim.hpp"
#include "oran/ric.hpp"
#include "oran/socket_runtime.hpp"
#include "oran/xapp.hpp"

using namespace oran;

namespace {

// Asks the OS for a currently free loopback port.  The tiny window between
// probing and binding is acceptable for a local test.
uint16_t free_port() {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(fd >= 0);
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  sa.sin_port = 0;
  REQUIRE(::bind(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) == 0);
  socklen_t sl = sizeof sa;
  REQUIRE(::getsockname(fd, reinterpret_cast<sockaddr*>(&sa), &sl) == 0);
  uint16_t port = ntohs(sa.sin_port);
  ::close(fd);
  return port;
}

std::string loop_addr(uint16_t port) { return "tcp://127.0.0.1:" + std::to_string(port); }

// Pumps the runtime until the predicate holds; false on wall-clock timeout.
template <class Pred>
bool pump_until(net::SocketRuntime& rt, Pred pred, int deadline_ms = 5000) {
  auto start = std::chrono::steady_clock::now();
  while (!pred()) {
    rt.poll_once(10);
    auto waited = std::chrono::steady_clock::now() - start;
    if (waited > std::chrono::milliseconds(deadline_ms)) return false;
  }
  return true;
}

struct Probe : net::Handler {
  net::Services* svc = nullptr;
  bool connected = false;
  bool closed = false;
  std::vector<e2ap::Frame> frames;

  void on_connected(net::ConnId) override { connected = true; }
  void on_frame(net::ConnId, const e2ap::Frame& f) override { frames.push_back(f); }
  void on_closed(net::ConnId) override { closed = true; }
};

// Accepting side that returns every frame with the stream id bumped by one.
struct EchoServer : net::Handler {
  explicit EchoServer(net::Services& s) : svc(&s) {}
  net::Services* svc;
  size_t echoed = 0;

  void on_frame(net::ConnId c, const e2ap::Frame& f) override {
    ++echoed;
    svc->send_frame(c, static_cast<uint8_t>(f.stream_id + 1), f.payload);
  }
};

e2ap::GlobalE2NodeId sock_node(uint32_t id = 7) {
  e2ap::GlobalE2NodeId n;
  n.plmn = *parse_plmn("001/01");
  n.node_type = e2ap::NodeType::EN_GNB;
  n.node_id = id;
  return n;
}

size_t count_log(const ProcLog& log, const std::string& needle) {
  size_t n = 0;
  for (const auto& line : log.lines())
    if (line.find(needle) != std::string::npos) ++n;
  return n;
}

void drive_cell(net::SocketRuntime& rt, sim::RanSim& ran, uint64_t t) {
  rt.schedule(t, [&rt, &ran, t] {
    ran.step_subframe();
    drive_cell(rt, ran, t + 1);
  });
}

}  // namespace

TEST_CASE("socket runtime timers fire in order and honor cancel") {
  net::SocketRuntime rt;
  std::vector<int> fired;
  uint64_t now = rt.now_ms();
  rt.schedule(now + 30, [&] { fired.push_back(3); });
  uint64_t victim = rt.schedule(now + 15, [&] { fired.push_back(9); });
  rt.schedule(now + 10, [&] { fired.push_back(1); });
  rt.schedule(now + 20, [&] { fired.push_back(2); });
  rt.cancel(victim);
  REQUIRE(pump_until(rt, [&] { return fired.size() == 3; }));
  CHECK(fired == std::vector<int>{1, 2, 3});
}

TEST_CASE("connecting to a dead port reports closed, not connected") {
  net::SocketRuntime rt;
  Probe probe;
  rt.connect(loop_addr(free_port()), probe);
  REQUIRE(pump_until(rt, [&] { return probe.closed; }));
  CHECK_FALSE(probe.connected);
  CHECK(rt.open_conns() == 0);
}

TEST_CASE("malformed addresses are rejected as config errors") {
  net::SocketRuntime rt;
  Probe probe;
  rt.listen("mem://not-a-socket", probe);
  auto err = rt.take_error();
  REQUIRE_FALSE(err.ok());
  CHECK(err.error().code == ErrCode::ConfigError);

  rt.connect("tcp://127.0.0.1:notaport", probe);
  err = rt.take_error();
  REQUIRE_FALSE(err.ok());
  CHECK(err.error().code == ErrCode::ConfigError);
  REQUIRE(pump_until(rt, [&] { return probe.closed; }));
}

TEST_CASE("frames cross loopback intact, including large and empty payloads") {
  net::SocketRuntime rt;
  EchoServer server(rt);
  uint16_t port = free_port();
  auto bound = rt.listen_checked(loop_addr(port), server);
  REQUIRE(bound.ok());
  CHECK(*bound == port);

  Probe client;
  net::ConnId c = rt.connect(loop_addr(port), client);
  REQUIRE(pump_until(rt, [&] { return client.connected; }));

  std::vector<uint8_t> big(40'000);
  for (size_t i = 0; i < big.size(); ++i) big[i] = static_cast<uint8_t>(i * 31 + 7);
  rt.send_frame(c, 1, {});
  rt.send_frame(c, 2, big);
  rt.send_frame(c, 3, std::vector<uint8_t>{0xAB});
  REQUIRE(pump_until(rt, [&] { return client.frames.size() == 3; }));

  CHECK(client.frames[0].stream_id == 2);
  CHECK(client.frames[0].payload.empty());
  CHECK(client.frames[1].stream_id == 3);
  CHECK(client.frames[1].payload == big);
  CHECK(client.frames[2].stream_id == 4);
  CHECK(client.frames[2].payload == std::vector<uint8_t>{0xAB});
  CHECK(server.echoed == 3);
}

TEST_CASE("controller and node complete E2 setup over TCP") {
  net::SocketRuntime rt;
  uint16_t e2_port = free_port();
  uint16_t xapp_port = free_port();

  ric::RicConfig rcfg;
  rcfg.e2_listen = loop_addr(e2_port);
  rcfg.xapp_listen = loop_addr(xapp_port);
  rcfg.plmn_allowlist = {*parse_plmn("001/01")};
  ric::Ric ric(rcfg);
  ric.start(rt);
  REQUIRE(rt.take_error().ok());

  agent::AgentConfig acfg;
  acfg.ric_addr = loop_addr(e2_port);
  acfg.node = sock_node();
  sim::RanSim ran(sim::CellConfig{});
  agent::Agent agent(acfg, ran);
  agent.start(rt);

  REQUIRE(pump_until(rt, [&] { return agent.state() == agent::AgentState::Connected; }));
  REQUIRE(ric.rnib().size() == 1);
  const auto& entry = ric.rnib().begin()->second;
  CHECK(entry.status == rnib::NodeStatus::Connected);
  REQUIRE(entry.functions.size() == 2);
  CHECK(entry.functions[0].function_id == 0);
  CHECK(entry.functions[1].function_id == 1);
  CHECK(count_log(agent.proc_log(), "tx pdu=E2SetupRequest") == 1);
  CHECK(count_log(agent.proc_log(), "rx pdu=E2SetupResponse") == 1);
}

TEST_CASE("a setup rejection is delivered before the controller hangs up") {
  net::SocketRuntime rt;
  uint16_t e2_port = free_port();
  uint16_t xapp_port = free_port();

  ric::RicConfig rcfg;
  rcfg.e2_listen = loop_addr(e2_port);
  rcfg.xapp_listen = loop_addr(xapp_port);
  rcfg.plmn_allowlist = {*parse_plmn("999/99")};
  ric::Ric ric(rcfg);
  ric.start(rt);
  REQUIRE(rt.take_error().ok());

  agent::AgentConfig acfg;
  acfg.ric_addr = loop_addr(e2_port);
  acfg.node = sock_node();
  acfg.retry_interval_ms = 50;
  sim::RanSim ran(sim::CellConfig{});
  agent::Agent agent(acfg, ran);
  agent.start(rt);

  // The rejection races the close on a real socket; the runtime must flush
  // before closing, every retry round.
  REQUIRE(pump_until(
      rt, [&] { return count_log(agent.proc_log(), "rx pdu=E2SetupFailure") >= 2; }));
  CHECK(ric.rnib().empty());
  CHECK(agent.state() != agent::AgentState::Connected);
}

TEST_CASE("kpimon monitors a live node over sockets end to end") {
  net::SocketRuntime rt;
  uint16_t e2_port = free_port();
  uint16_t xapp_port = free_port();

  ric::RicConfig rcfg;
  rcfg.e2_listen = loop_addr(e2_port);
  rcfg.xapp_listen = loop_addr(xapp_port);
  rcfg.plmn_allowlist = {*parse_plmn("001/01")};
  ric::Ric ric(rcfg);
  ric.start(rt);
  REQUIRE(rt.take_error().ok());

  agent::AgentConfig acfg;
  acfg.ric_addr = loop_addr(e2_port);
  acfg.node = sock_node();
  sim::RanSim ran(sim::CellConfig{});
  REQUIRE(ran.add_ue({1, 9, 4'000'000, 0}).ok());
  REQUIRE(ran.add_ue({2, 7, 7'000'000, 0}).ok());
  agent::Agent agent(acfg, ran);
  agent.start(rt);
  drive_cell(rt, ran, rt.now_ms() + 1);
  // A monitor queries the R-NIB once at registration, so it comes up after
  // the node it should find — the same order an operator uses.
  REQUIRE(pump_until(rt, [&] { return agent.state() == agent::AgentState::Connected; }));

  xapp::KpimonConfig xcfg;
  xcfg.ric_addr = loop_addr(xapp_port);
  xcfg.period_ms = 100;
  xapp::XappDescriptor desc;
  desc.xapp_name = "kpimon";
  desc.consumes = {"ORANSC-KPM"};
  xapp::KpimonApp app(xcfg, desc);
  REQUIRE(app.start(rt).ok());
  REQUIRE(rt.take_error().ok());

  REQUIRE(pump_until(rt, [&] { return app.reports_received() >= 3; }));
  CHECK(app.subscriptions_active() == 1);
  CHECK(app.decode_warnings() == 0);
  CHECK_FALSE(app.failed());

  // Wall pacing decides how many bytes each report saw; the structure and
  // monotonicity are what a real-socket run must still guarantee.
  uint64_t last_ul_q9 = 0;
  size_t ul_rows_q9 = 0;
  bool monotone = true;
  for (const auto& row : app.rows()) {
    bool known = row.container == "O_DU" || row.container == "O_CU_CP" ||
                 row.container == "O_CU_UP";
    CHECK(known);
    if (row.metric == "cum_ul_bytes" && row.key == "9") {
      if (row.value < last_ul_q9) monotone = false;
      last_ul_q9 = row.value;
      ++ul_rows_q9;
    }
  }
  CHECK(monotone);
  CHECK(ul_rows_q9 >= 3);
}

TEST_CASE("a stream with an impossible frame length is dropped") {
  net::SocketRuntime rt;
  EchoServer server(rt);
  uint16_t port = free_port();
  REQUIRE(rt.listen_checked(loop_addr(port), server).ok());

  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(fd >= 0);
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  sa.sin_port = htons(port);
  REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) == 0);
  int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);

  const uint8_t poison[5] = {0xFF, 0x00, 0x00, 0x00, 0x00};  // length 0xFF000000
  REQUIRE(::send(fd, poison, sizeof poison, MSG_NOSIGNAL) == sizeof poison);

  bool peer_closed = false;
  auto start = std::chrono::steady_clock::now();
  while (!peer_closed &&
         std::chrono::steady_clock::now() - start < std::chrono::seconds(5)) {
    rt.poll_once(10);
    uint8_t buf[64];
    ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n == 0) peer_closed = true;
    if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK) peer_closed = true;
  }
  ::close(fd);
  CHECK(peer_closed);
  CHECK(server.echoed == 0);
}
