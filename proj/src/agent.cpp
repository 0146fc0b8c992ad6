#include "oran/agent.hpp"

#include <algorithm>

#include "oran/sm_kpm.hpp"
#include "oran/sm_slicing.hpp"

namespace oran::agent {

std::vector<e2ap::RanFunctionItem> default_functions() {
  return {
      {kpm::kFunctionId, kpm::kRevision, std::string(kpm::kSmName), {}},
      {slicing::kFunctionId, slicing::kRevision, std::string(slicing::kSmName), {}},
  };
}

Expected<AgentConfig> AgentConfig::from_config(const KvConfig& cfg) {
  AgentConfig out;
  out.ric_addr = cfg.get_or("agent.ric_addr", out.ric_addr);
  auto plmn = parse_plmn(cfg.get_or("agent.plmn", "001/01"));
  if (!plmn) return Error{ErrCode::ConfigError, "agent.plmn: bad PLMN"};
  out.node.plmn = *plmn;
  std::string type = cfg.get_or("agent.node_type", "EN_GNB");
  if (type == "ENB")
    out.node.node_type = e2ap::NodeType::ENB;
  else if (type == "GNB")
    out.node.node_type = e2ap::NodeType::GNB;
  else if (type == "EN_GNB")
    out.node.node_type = e2ap::NodeType::EN_GNB;
  else
    return Error{ErrCode::ConfigError, "agent.node_type: expected ENB, GNB or EN_GNB"};
  auto id = cfg.get_u64("agent.node_id");
  if (cfg.has("agent.node_id")) {
    if (!id) return Error{ErrCode::ConfigError, "agent.node_id: not a number"};
    if (*id > e2ap::kMaxNodeId) return Error{ErrCode::ConfigError, "agent.node_id: exceeds 20 bits"};
    out.node.node_id = static_cast<uint32_t>(*id);
  } else {
    out.node.node_id = 1;
  }
  if (cfg.has("agent.retry_ms")) {
    auto v = cfg.get_u64("agent.retry_ms");
    if (!v) return Error{ErrCode::ConfigError, "agent.retry_ms: not a number"};
    if (*v == 0) return Error{ErrCode::ConfigError, "agent.retry_ms: must be positive"};
    out.retry_interval_ms = *v;
  }
  out.functions = default_functions();
  return out;
}

Agent::Agent(AgentConfig cfg, sim::RanSim& ran) : cfg_(std::move(cfg)), ran_(ran) {
  if (cfg_.functions.empty()) cfg_.functions = default_functions();
}

void Agent::start(net::Services& svc) {
  svc_ = &svc;
  connect_now();
}

void Agent::connect_now() {
  state_ = AgentState::Connecting;
  ++attempts_;
  log_.log(svc_->now_ms(), "tx", "Connect", "ric");
  conn_ = svc_->connect(cfg_.ric_addr, *this);
}

void Agent::schedule_retry() {
  state_ = AgentState::Idle;
  svc_->schedule(svc_->now_ms() + cfg_.retry_interval_ms, [this] {
    if (state_ == AgentState::Idle) connect_now();
  });
}

void Agent::send(uint8_t stream, const e2ap::E2apPdu& pdu) {
  auto bytes = e2ap::encode_pdu(pdu);
  if (!bytes.ok()) return;
  log_.log(svc_->now_ms(), "tx", e2ap::pdu_name(pdu), "ric",
           std::nullopt);
  svc_->send_frame(conn_, stream, *bytes);
}

bool Agent::supports(uint16_t function_id) const {
  return std::any_of(cfg_.functions.begin(), cfg_.functions.end(),
                     [&](const auto& f) { return f.function_id == function_id; });
}

void Agent::on_connected(net::ConnId c) {
  conn_ = c;
  state_ = AgentState::SetupSent;
  send(e2ap::kStreamSupport, e2ap::E2SetupRequest{cfg_.node, cfg_.functions});
}

void Agent::on_closed(net::ConnId) {
  drop_subscriptions();
  schedule_retry();
}

void Agent::drop_subscriptions() {
  for (auto& sub : subs_) svc_->cancel(sub.timer_id);
  subs_.clear();
}

void Agent::on_frame(net::ConnId, const e2ap::Frame& f) {
  auto pdu = e2ap::decode_pdu(f.payload);
  if (!pdu.ok()) return;
  log_.log(svc_->now_ms(), "rx", e2ap::pdu_name(*pdu), "ric", std::nullopt);
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, e2ap::E2SetupResponse>) {
          state_ = AgentState::Connected;
        } else if constexpr (std::is_same_v<T, e2ap::E2SetupFailure>) {
          svc_->close(conn_);
          schedule_retry();
        } else if constexpr (std::is_same_v<T, e2ap::RicSubscriptionRequest>) {
          handle_subscription(m);
        } else if constexpr (std::is_same_v<T, e2ap::RicControlRequest>) {
          handle_control(m);
        } else if constexpr (std::is_same_v<T, e2ap::ResetRequest>) {
          handle_reset(m);
        }
      },
      *pdu);
}

void Agent::handle_subscription(const e2ap::RicSubscriptionRequest& req) {
  uint8_t stream = e2ap::stream_for_function(req.function_id);
  if (!supports(req.function_id)) {
    send(stream, e2ap::RicSubscriptionFailure{
                     req.request_id,
                     {e2ap::CauseCategory::RIC_SERVICE, e2ap::cause::kFunctionNotSupported}});
    return;
  }
  auto trigger = kpm::decode_trigger(req.event_trigger);
  if (!trigger.ok()) {
    send(stream, e2ap::RicSubscriptionFailure{
                     req.request_id,
                     {e2ap::CauseCategory::PROTOCOL, e2ap::cause::kMalformedTrigger}});
    return;
  }
  // Both bundled service models support REPORT only; other action types are
  // left out of the admitted list.
  std::vector<uint8_t> admitted;
  for (const auto& a : req.actions)
    if (a.action_type == e2ap::ActionType::REPORT) admitted.push_back(a.action_id);
  if (admitted.empty()) {
    send(stream, e2ap::RicSubscriptionFailure{
                     req.request_id,
                     {e2ap::CauseCategory::RIC_SERVICE, e2ap::cause::kActionNotSupported}});
    return;
  }

  InstalledSubscription sub;
  sub.request_id = req.request_id;
  sub.function_id = req.function_id;
  sub.period_ms = trigger->period_ms;
  sub.next_fire_ms = svc_->now_ms() + trigger->period_ms;
  sub.action_id = admitted.front();
  sub.sequence_number = 1;
  e2ap::RicRequestId rid = req.request_id;
  sub.timer_id = svc_->schedule(sub.next_fire_ms, [this, rid] { on_report_timer(rid); });
  subs_.push_back(std::move(sub));

  send(stream, e2ap::RicSubscriptionResponse{req.request_id, admitted});
}

void Agent::on_report_timer(e2ap::RicRequestId rid) {
  auto it = std::find_if(subs_.begin(), subs_.end(),
                         [&](const auto& s) { return s.request_id == rid; });
  if (it == subs_.end()) return;
  InstalledSubscription& sub = *it;

  uint64_t end = sub.next_fire_ms;
  uint64_t start = end - sub.period_ms;

  // On a wall clock the cell may not have completed subframe `end` yet when
  // this timer fires; the report covers a fixed window, so wait for the cell
  // rather than shifting the grid.  (Deterministic runs step the cell ahead
  // of same-instant timers and never take this branch.)
  if (ran_.now_ms() < end) {
    sub.timer_id = svc_->schedule(svc_->now_ms() + 1, [this, rid] { on_report_timer(rid); });
    return;
  }

  kpm::IndicationHeader header;
  header.plmn = cfg_.node.plmn;
  header.node_id = cfg_.node.node_id;
  header.timestamp_ms = svc_->now_ms();

  std::vector<uint8_t> message;
  bool have_message = false;
  if (sub.function_id == kpm::kFunctionId) {
    if (auto report = ran_.kpm_snapshot(start, end); report.ok()) {
      if (auto bytes = kpm::encode_report(*report); bytes.ok()) {
        message = std::move(*bytes);
        have_message = true;
      }
    }
  } else if (sub.function_id == slicing::kFunctionId) {
    if (auto report = ran_.slice_snapshot(start, end); report.ok()) {
      if (auto bytes = slicing::encode_report(*report); bytes.ok()) {
        message = std::move(*bytes);
        have_message = true;
      }
    }
  }

  if (have_message && state_ == AgentState::Connected) {
    e2ap::RicIndication ind;
    ind.request_id = sub.request_id;
    ind.function_id = sub.function_id;
    ind.action_id = sub.action_id;
    ind.sequence_number = sub.sequence_number;
    ind.header = kpm::encode_header(header);
    ind.message = std::move(message);
    send(e2ap::stream_for_function(sub.function_id), ind);
    ++reports_sent_;
  } else {
    ++reports_dropped_;
  }
  sub.sequence_number += 1;

  // Fixed cadence from the install time; a late wakeup never shifts the grid.
  sub.next_fire_ms += sub.period_ms;
  sub.timer_id = svc_->schedule(sub.next_fire_ms, [this, rid] { on_report_timer(rid); });
}

void Agent::handle_control(const e2ap::RicControlRequest& req) {
  uint8_t stream = e2ap::stream_for_function(req.function_id);
  auto fail = [&](e2ap::Cause cause) {
    send(stream, e2ap::RicControlFailure{req.request_id, cause});
  };
  if (!supports(req.function_id) || req.function_id != slicing::kFunctionId) {
    fail({e2ap::CauseCategory::RIC_SERVICE, e2ap::cause::kFunctionNotSupported});
    return;
  }
  auto cmd = slicing::decode_control(req.message);
  if (!cmd.ok()) {
    // Share-vector validity is checked during decoding; those rejections are
    // service-level, not framing-level.
    switch (cmd.code()) {
      case ErrCode::ShareSumExceeded:
        fail({e2ap::CauseCategory::RIC_SERVICE, e2ap::cause::kShareSumExceeded});
        break;
      case ErrCode::DuplicateSliceId:
        fail({e2ap::CauseCategory::RIC_SERVICE, e2ap::cause::kDuplicateSliceId});
        break;
      default:
        fail({e2ap::CauseCategory::PROTOCOL, e2ap::cause::kMalformedPayload});
        break;
    }
    return;
  }
  Status applied = ran_.apply_slice_config(*cmd);
  if (!applied.ok()) {
    uint8_t code;
    switch (applied.code()) {
      case ErrCode::ShareSumExceeded: code = e2ap::cause::kShareSumExceeded; break;
      case ErrCode::DuplicateSliceId: code = e2ap::cause::kDuplicateSliceId; break;
      case ErrCode::UnknownSlice: code = e2ap::cause::kUnknownSlice; break;
      case ErrCode::UnknownUe: code = e2ap::cause::kUnknownUe; break;
      default: code = e2ap::cause::kControlRejected; break;
    }
    fail({e2ap::CauseCategory::RIC_SERVICE, code});
    return;
  }
  if (req.ack_requested) send(stream, e2ap::RicControlAck{req.request_id});
}

void Agent::handle_reset(const e2ap::ResetRequest&) {
  // Forget every subscription and timer; applied slice configuration is part
  // of the cell, not the session, so it stays.
  drop_subscriptions();
  send(e2ap::kStreamSupport, e2ap::ResetResponse{});
}

}  // namespace oran::agent
