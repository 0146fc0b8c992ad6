#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oran/config.hpp"
#include "oran/e2ap.hpp"
#include "oran/proclog.hpp"
#include "oran/ran_sim.hpp"
#include "oran/transport.hpp"

namespace oran::agent {

struct AgentConfig {
  std::string ric_addr = "mem://ric-e2";
  e2ap::GlobalE2NodeId node;
  std::vector<e2ap::RanFunctionItem> functions;  // defaults to both bundled SMs
  uint64_t retry_interval_ms = 5000;

  // Reads agent.ric_addr / agent.plmn / agent.node_type / agent.node_id /
  // agent.retry_ms.
  static Expected<AgentConfig> from_config(const KvConfig& cfg);
};

// The two RAN functions every bundled node exposes.
std::vector<e2ap::RanFunctionItem> default_functions();

struct InstalledSubscription {
  e2ap::RicRequestId request_id;
  uint16_t function_id = 0;
  uint64_t period_ms = 0;
  uint64_t next_fire_ms = 0;  // advances by exactly period_ms, no drift
  uint8_t action_id = 0;
  uint32_t sequence_number = 1;  // next indication's number
  uint64_t timer_id = 0;
};

enum class AgentState : uint8_t { Idle, Connecting, SetupSent, Connected };

// Node-side E2 termination: connects to the controller, registers its RAN
// functions, and serves subscriptions and control over the attached cell.
class Agent : public net::Handler {
 public:
  Agent(AgentConfig cfg, sim::RanSim& ran);

  void start(net::Services& svc);

  void on_connected(net::ConnId c) override;
  void on_frame(net::ConnId c, const e2ap::Frame& f) override;
  void on_closed(net::ConnId c) override;

  AgentState state() const { return state_; }
  const std::vector<InstalledSubscription>& subscriptions() const { return subs_; }
  uint64_t setup_attempts() const { return attempts_; }
  uint64_t reports_sent() const { return reports_sent_; }
  uint64_t reports_dropped() const { return reports_dropped_; }
  ProcLog& proc_log() { return log_; }

 private:
  void connect_now();
  void schedule_retry();
  void handle_subscription(const e2ap::RicSubscriptionRequest& req);
  void handle_control(const e2ap::RicControlRequest& req);
  void handle_reset(const e2ap::ResetRequest& req);
  void on_report_timer(e2ap::RicRequestId rid);
  void drop_subscriptions();
  void send(uint8_t stream, const e2ap::E2apPdu& pdu);
  bool supports(uint16_t function_id) const;

  AgentConfig cfg_;
  sim::RanSim& ran_;
  net::Services* svc_ = nullptr;
  net::ConnId conn_ = 0;
  AgentState state_ = AgentState::Idle;
  std::vector<InstalledSubscription> subs_;
  ProcLog log_;
  uint64_t attempts_ = 0;
  uint64_t reports_sent_ = 0;
  uint64_t reports_dropped_ = 0;
};

}  // namespace oran::agent
