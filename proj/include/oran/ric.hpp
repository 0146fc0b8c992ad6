#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oran/config.hpp"
#include "oran/e2ap.hpp"
#include "oran/proclog.hpp"
#include "oran/rnib.hpp"
#include "oran/transport.hpp"
#include "oran/xapp_proto.hpp"

namespace oran::ric {

struct RicConfig {
  std::string e2_listen = "mem://ric-e2";
  std::string xapp_listen = "mem://ric-xapp";
  std::vector<std::array<uint8_t, 3>> plmn_allowlist;  // empty = allow none
  uint64_t timeout_ms = 2000;
  std::string sdl_journal_path;  // empty = in-memory only

  static Expected<RicConfig> from_config(const KvConfig& cfg);
};

// Shared data layer: namespaced key/value store with monotonically increasing
// per-key versions, optionally journaled to a file for offline inspection.
class Sdl {
 public:
  struct Entry {
    std::vector<uint8_t> value;
    uint64_t version = 0;
  };

  explicit Sdl(std::string journal_path = {});

  uint64_t put(const std::string& ns, const std::string& key, std::vector<uint8_t> value);
  uint64_t put_text(const std::string& ns, const std::string& key, const std::string& text);
  std::optional<Entry> get(const std::string& ns, const std::string& key) const;
  // Counters are stored as ASCII decimal so they stay journal-readable.
  uint64_t bump_counter(const std::string& ns, const std::string& key);
  uint64_t read_counter(const std::string& ns, const std::string& key) const;
  std::vector<std::string> keys(const std::string& ns) const;  // sorted

 private:
  std::map<std::string, std::map<std::string, Entry>> data_;
  std::string journal_path_;
};

enum class SubState : uint8_t { Pending = 0, Active = 1, Failed = 2 };

const char* sub_state_name(SubState s);

struct Subscription {
  e2ap::RicRequestId request_id;
  e2ap::GlobalE2NodeId node;
  uint16_t function_id = 0;
  std::vector<uint8_t> event_trigger;
  std::vector<e2ap::RicAction> actions;
  std::string xapp_id;
  SubState state = SubState::Pending;
  e2ap::Cause failure_cause{};                 // meaningful when Failed
  std::vector<uint8_t> admitted_action_ids;    // meaningful when Active
};

// The near-real-time controller: terminates E2 connections from nodes on one
// listener and xApp connections on the other, owns the R-NIB, the
// subscription table, the indication routes, and the SDL.
class Ric {
 public:
  explicit Ric(RicConfig cfg);
  ~Ric();

  // Registers both listeners and starts serving.
  void start(net::Services& svc);

  // Management action: fail every subscription on the node and tell it to
  // drop its local state. The R-NIB entry stays CONNECTED.
  Status reset_node(const e2ap::GlobalE2NodeId& node);

  // Introspection (tests, CLI status output).
  const std::map<std::string, rnib::RnibEntry>& rnib() const { return rnib_; }
  const std::vector<Subscription>& subscriptions() const { return subs_; }
  Sdl& sdl() { return sdl_; }
  ProcLog& proc_log() { return log_; }
  uint64_t indications_dropped() const;
  uint64_t indications_routed() const { return indications_routed_; }

  static uint16_t requestor_for(const std::string& xapp_id);

 private:
  struct E2Endpoint : net::Handler {
    explicit E2Endpoint(Ric& r) : ric(r) {}
    void on_accept(net::ConnId c) override { ric.e2_accept(c); }
    void on_frame(net::ConnId c, const e2ap::Frame& f) override { ric.e2_frame(c, f); }
    void on_closed(net::ConnId c) override { ric.e2_closed(c); }
    Ric& ric;
  };
  struct XappEndpoint : net::Handler {
    explicit XappEndpoint(Ric& r) : ric(r) {}
    void on_accept(net::ConnId c) override { ric.xapp_accept(c); }
    void on_frame(net::ConnId c, const e2ap::Frame& f) override { ric.xapp_frame(c, f); }
    void on_closed(net::ConnId c) override { ric.xapp_closed(c); }
    Ric& ric;
  };

  struct PendingControl {
    std::string xapp_id;
    uint64_t timer_id = 0;
  };

  void e2_accept(net::ConnId c);
  void e2_frame(net::ConnId c, const e2ap::Frame& f);
  void e2_closed(net::ConnId c);
  void xapp_accept(net::ConnId c);
  void xapp_frame(net::ConnId c, const e2ap::Frame& f);
  void xapp_closed(net::ConnId c);

  void handle_setup(net::ConnId c, const e2ap::E2SetupRequest& req);
  void handle_node_reset(net::ConnId c, const e2ap::ResetRequest& req);
  void handle_sub_response(net::ConnId c, const e2ap::RicSubscriptionResponse& m);
  void handle_sub_failure(net::ConnId c, const e2ap::RicSubscriptionFailure& m);
  void handle_indication(net::ConnId c, const e2ap::RicIndication& m);
  void handle_control_result(net::ConnId c, const e2ap::RicRequestId& rid,
                             std::optional<e2ap::Cause> failure);

  void handle_xapp_register(net::ConnId c, const xapp::XappRegister& m);
  void handle_xapp_subscribe(net::ConnId c, const xapp::XappSubscribe& m);
  void handle_xapp_control(net::ConnId c, const xapp::XappControl& m);
  void handle_rnib_query(net::ConnId c);
  void handle_sdl_get(net::ConnId c, const xapp::SdlGet& m);

  void send_e2(net::ConnId c, uint8_t stream, const e2ap::E2apPdu& pdu);
  void send_xapp(net::ConnId c, const xapp::XappPdu& pdu);
  void persist_rnib(const rnib::RnibEntry& entry);
  void fail_node_subscriptions(const std::string& key, const e2ap::Cause& cause);
  void fail_subscription(Subscription& sub, const e2ap::Cause& cause, bool notify);
  e2ap::RicRequestId allocate_request_id(const std::string& xapp_id);
  bool request_id_in_use(const e2ap::RicRequestId& rid) const;
  Subscription* find_sub(const std::string& node_key, const e2ap::RicRequestId& rid);
  std::string peer_name_e2(net::ConnId c) const;
  std::string peer_name_xapp(net::ConnId c) const;
  std::optional<net::ConnId> xapp_conn(const std::string& xapp_id) const;

  RicConfig cfg_;
  net::Services* svc_ = nullptr;
  E2Endpoint e2_ep_{*this};
  XappEndpoint xapp_ep_{*this};
  Sdl sdl_;
  ProcLog log_;

  std::map<std::string, rnib::RnibEntry> rnib_;         // node_key -> entry
  std::map<net::ConnId, std::string> conn_node_;        // E2 conn -> node_key
  std::map<std::string, net::ConnId> node_conn_;        // node_key -> live E2 conn
  std::map<net::ConnId, std::string> conn_xapp_;        // xApp conn -> xapp_id ("" = unregistered)
  std::map<std::string, net::ConnId> xapp_conn_;        // xapp_id -> live conn
  std::vector<Subscription> subs_;
  std::map<std::pair<std::string, e2ap::RicRequestId>, std::string> routes_;
  std::map<std::pair<std::string, e2ap::RicRequestId>, uint64_t> sub_timers_;
  std::map<std::pair<std::string, e2ap::RicRequestId>, PendingControl> pending_controls_;
  std::map<uint16_t, uint16_t> next_instance_;
  uint64_t indications_routed_ = 0;
};

}  // namespace oran::ric
