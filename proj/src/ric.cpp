#include "oran/ric.hpp"

#include <algorithm>
#include <cstdio>

namespace oran::ric {

namespace {

template <typename T>
concept HasRequestId = requires(const T& t) { t.request_id; };

std::optional<e2ap::RicRequestId> rid_of(const e2ap::E2apPdu& pdu) {
  return std::visit(
      [](const auto& m) -> std::optional<e2ap::RicRequestId> {
        if constexpr (HasRequestId<std::decay_t<decltype(m)>>) return m.request_id;
        return std::nullopt;
      },
      pdu);
}

std::optional<e2ap::RicRequestId> rid_of(const xapp::XappPdu& pdu) {
  return std::visit(
      [](const auto& m) -> std::optional<e2ap::RicRequestId> {
        if constexpr (HasRequestId<std::decay_t<decltype(m)>>) return m.request_id;
        return std::nullopt;
      },
      pdu);
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const char* sub_state_name(SubState s) {
  switch (s) {
    case SubState::Pending: return "PENDING";
    case SubState::Active: return "ACTIVE";
    case SubState::Failed: return "FAILED";
  }
  return "?";
}

Expected<RicConfig> RicConfig::from_config(const KvConfig& cfg) {
  RicConfig out;
  out.e2_listen = cfg.get_or("ric.e2_listen", out.e2_listen);
  out.xapp_listen = cfg.get_or("ric.xapp_listen", out.xapp_listen);
  for (const std::string& item : cfg.get_list("ric.plmn_allowlist")) {
    auto plmn = parse_plmn(item);
    if (!plmn) return Error{ErrCode::ConfigError, "ric.plmn_allowlist: bad PLMN '" + item + "'"};
    out.plmn_allowlist.push_back(*plmn);
  }
  if (cfg.has("ric.timeout_ms")) {
    auto v = cfg.get_u64("ric.timeout_ms");
    if (!v) return Error{ErrCode::ConfigError, "ric.timeout_ms: not a number"};
    if (*v == 0) return Error{ErrCode::ConfigError, "ric.timeout_ms: must be positive"};
    out.timeout_ms = *v;
  }
  out.sdl_journal_path = cfg.get_or("ric.sdl_journal_path", "");
  return out;
}

// ---- Sdl -------------------------------------------------------------------

Sdl::Sdl(std::string journal_path) : journal_path_(std::move(journal_path)) {
  if (!journal_path_.empty()) {
    // Truncate: each run journals its own history.
    if (std::FILE* f = std::fopen(journal_path_.c_str(), "w")) std::fclose(f);
  }
}

uint64_t Sdl::put(const std::string& ns, const std::string& key, std::vector<uint8_t> value) {
  Entry& e = data_[ns][key];
  e.version += 1;
  e.value = std::move(value);
  if (!journal_path_.empty()) {
    if (std::FILE* f = std::fopen(journal_path_.c_str(), "a")) {
      std::string hex = e.value.empty() ? "-" : to_hex(e.value.data(), e.value.size());
      std::fprintf(f, "%s %s %llu %s\n", ns.c_str(), key.c_str(),
                   static_cast<unsigned long long>(e.version), hex.c_str());
      std::fclose(f);
    }
  }
  return e.version;
}

uint64_t Sdl::put_text(const std::string& ns, const std::string& key, const std::string& text) {
  return put(ns, key, std::vector<uint8_t>(text.begin(), text.end()));
}

std::optional<Sdl::Entry> Sdl::get(const std::string& ns, const std::string& key) const {
  auto nit = data_.find(ns);
  if (nit == data_.end()) return std::nullopt;
  auto kit = nit->second.find(key);
  if (kit == nit->second.end()) return std::nullopt;
  return kit->second;
}

uint64_t Sdl::read_counter(const std::string& ns, const std::string& key) const {
  auto e = get(ns, key);
  if (!e) return 0;
  uint64_t v = 0;
  for (uint8_t c : e->value) {
    if (c < '0' || c > '9') return 0;
    v = v * 10 + (c - '0');
  }
  return v;
}

uint64_t Sdl::bump_counter(const std::string& ns, const std::string& key) {
  uint64_t v = read_counter(ns, key) + 1;
  put_text(ns, key, std::to_string(v));
  return v;
}

std::vector<std::string> Sdl::keys(const std::string& ns) const {
  std::vector<std::string> out;
  auto nit = data_.find(ns);
  if (nit == data_.end()) return out;
  for (const auto& [k, _] : nit->second) out.push_back(k);
  return out;
}

// ---- Ric -------------------------------------------------------------------

Ric::Ric(RicConfig cfg) : cfg_(std::move(cfg)), sdl_(cfg_.sdl_journal_path) {}

Ric::~Ric() = default;

void Ric::start(net::Services& svc) {
  svc_ = &svc;
  svc.listen(cfg_.e2_listen, e2_ep_);
  svc.listen(cfg_.xapp_listen, xapp_ep_);
}

uint16_t Ric::requestor_for(const std::string& xapp_id) {
  return static_cast<uint16_t>(fnv1a64(xapp_id) & 0xFFFF);
}

uint64_t Ric::indications_dropped() const {
  return sdl_.read_counter("ric-stats", "indications_dropped");
}

std::string Ric::peer_name_e2(net::ConnId c) const {
  auto it = conn_node_.find(c);
  if (it != conn_node_.end()) return it->second;
  return svc_->peer_desc(c);
}

std::string Ric::peer_name_xapp(net::ConnId c) const {
  auto it = conn_xapp_.find(c);
  if (it != conn_xapp_.end() && !it->second.empty()) return it->second;
  return svc_->peer_desc(c);
}

std::optional<net::ConnId> Ric::xapp_conn(const std::string& xapp_id) const {
  auto it = xapp_conn_.find(xapp_id);
  if (it == xapp_conn_.end()) return std::nullopt;
  return it->second;
}

void Ric::send_e2(net::ConnId c, uint8_t stream, const e2ap::E2apPdu& pdu) {
  auto bytes = e2ap::encode_pdu(pdu);
  if (!bytes.ok()) return;  // internal invariant: we only build valid PDUs
  log_.log(svc_->now_ms(), "tx", e2ap::pdu_name(pdu), peer_name_e2(c), rid_of(pdu));
  svc_->send_frame(c, stream, *bytes);
}

void Ric::send_xapp(net::ConnId c, const xapp::XappPdu& pdu) {
  auto bytes = xapp::encode_pdu(pdu);
  if (!bytes.ok()) return;
  log_.log(svc_->now_ms(), "tx", xapp::pdu_name(pdu), peer_name_xapp(c), rid_of(pdu));
  svc_->send_frame(c, e2ap::kStreamSupport, *bytes);
}

void Ric::persist_rnib(const rnib::RnibEntry& entry) {
  sdl_.put("rnib", e2ap::node_key(entry.node), rnib::encode_rnib_entry(entry));
}

// ---- E2 side ---------------------------------------------------------------

void Ric::e2_accept(net::ConnId) {}

void Ric::e2_frame(net::ConnId c, const e2ap::Frame& f) {
  auto pdu = e2ap::decode_pdu(f.payload);
  if (!pdu.ok()) {
    sdl_.bump_counter("ric-stats", "decode_errors");
    return;
  }
  log_.log(svc_->now_ms(), "rx", e2ap::pdu_name(*pdu), peer_name_e2(c), rid_of(*pdu));
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, e2ap::E2SetupRequest>)
          handle_setup(c, m);
        else if constexpr (std::is_same_v<T, e2ap::ResetRequest>)
          handle_node_reset(c, m);
        else if constexpr (std::is_same_v<T, e2ap::RicSubscriptionResponse>)
          handle_sub_response(c, m);
        else if constexpr (std::is_same_v<T, e2ap::RicSubscriptionFailure>)
          handle_sub_failure(c, m);
        else if constexpr (std::is_same_v<T, e2ap::RicIndication>)
          handle_indication(c, m);
        else if constexpr (std::is_same_v<T, e2ap::RicControlAck>)
          handle_control_result(c, m.request_id, std::nullopt);
        else if constexpr (std::is_same_v<T, e2ap::RicControlFailure>)
          handle_control_result(c, m.request_id, m.cause);
        else if constexpr (std::is_same_v<T, e2ap::ResetResponse>) {
          // Completion of a controller-initiated reset; state already updated.
        } else
          sdl_.bump_counter("ric-stats", "unexpected_pdus");
      },
      *pdu);
}

void Ric::handle_setup(net::ConnId c, const e2ap::E2SetupRequest& req) {
  bool allowed = std::find(cfg_.plmn_allowlist.begin(), cfg_.plmn_allowlist.end(),
                           req.node.plmn) != cfg_.plmn_allowlist.end();
  if (!allowed) {
    send_e2(c, e2ap::kStreamSupport,
            e2ap::E2SetupFailure{{e2ap::CauseCategory::MISC, e2ap::cause::kUnauthorized}});
    svc_->close(c);
    e2_closed(c);
    return;
  }
  std::string key = e2ap::node_key(req.node);
  auto live = node_conn_.find(key);
  if (live != node_conn_.end() && live->second != c) {
    // The node identity is already served by another live connection; the
    // existing entry stays authoritative.
    send_e2(c, e2ap::kStreamSupport,
            e2ap::E2SetupFailure{{e2ap::CauseCategory::PROTOCOL, e2ap::cause::kDuplicateNode}});
    svc_->close(c);
    e2_closed(c);
    return;
  }
  // If this connection was serving a different node identity, retire it.
  if (auto prev = conn_node_.find(c); prev != conn_node_.end() && prev->second != key) {
    if (auto eit = rnib_.find(prev->second); eit != rnib_.end()) {
      eit->second.status = rnib::NodeStatus::Disconnected;
      persist_rnib(eit->second);
    }
    fail_node_subscriptions(prev->second,
                            {e2ap::CauseCategory::TRANSPORT, e2ap::cause::kConnectionLost});
    node_conn_.erase(prev->second);
  }

  rnib::RnibEntry entry;
  entry.node = req.node;
  entry.transport_addr = svc_->peer_desc(c);
  entry.status = rnib::NodeStatus::Connected;
  entry.functions = req.functions;
  entry.connected_at_ms = svc_->now_ms();
  rnib_[key] = entry;
  conn_node_[c] = key;
  node_conn_[key] = c;
  persist_rnib(entry);

  e2ap::E2SetupResponse resp;
  for (const auto& f : req.functions) resp.accepted_function_ids.push_back(f.function_id);
  send_e2(c, e2ap::kStreamSupport, resp);
}

void Ric::handle_node_reset(net::ConnId c, const e2ap::ResetRequest& req) {
  auto it = conn_node_.find(c);
  if (it != conn_node_.end()) fail_node_subscriptions(it->second, req.cause);
  send_e2(c, e2ap::kStreamSupport, e2ap::ResetResponse{});
}

void Ric::handle_sub_response(net::ConnId c, const e2ap::RicSubscriptionResponse& m) {
  auto it = conn_node_.find(c);
  if (it == conn_node_.end()) return;
  Subscription* sub = find_sub(it->second, m.request_id);
  if (!sub || sub->state != SubState::Pending) return;
  sub->state = SubState::Active;
  sub->admitted_action_ids = m.admitted_action_ids;
  if (auto t = sub_timers_.find({it->second, m.request_id}); t != sub_timers_.end()) {
    svc_->cancel(t->second);
    sub_timers_.erase(t);
  }
  if (auto xc = xapp_conn(sub->xapp_id)) {
    xapp::XappSubscribeResult res;
    res.request_id = m.request_id;
    res.outcome = xapp::SubscribeOutcome::Active;
    res.admitted_action_ids = m.admitted_action_ids;
    send_xapp(*xc, res);
  }
}

void Ric::handle_sub_failure(net::ConnId c, const e2ap::RicSubscriptionFailure& m) {
  auto it = conn_node_.find(c);
  if (it == conn_node_.end()) return;
  Subscription* sub = find_sub(it->second, m.request_id);
  if (!sub || sub->state != SubState::Pending) return;
  if (auto t = sub_timers_.find({it->second, m.request_id}); t != sub_timers_.end()) {
    svc_->cancel(t->second);
    sub_timers_.erase(t);
  }
  routes_.erase({it->second, m.request_id});
  fail_subscription(*sub, m.cause, true);
}

void Ric::handle_indication(net::ConnId c, const e2ap::RicIndication& m) {
  auto it = conn_node_.find(c);
  if (it == conn_node_.end()) {
    sdl_.bump_counter("ric-stats", "indications_dropped");
    return;
  }
  auto route = routes_.find({it->second, m.request_id});
  if (route == routes_.end()) {
    sdl_.bump_counter("ric-stats", "indications_dropped");
    return;
  }
  auto xc = xapp_conn(route->second);
  if (!xc) {
    sdl_.bump_counter("ric-stats", "indications_dropped");
    return;
  }
  auto bytes = e2ap::encode_pdu(e2ap::E2apPdu(m));
  if (!bytes.ok()) return;
  ++indications_routed_;
  log_.log(svc_->now_ms(), "tx", "RicIndication", peer_name_xapp(*xc), m.request_id);
  svc_->send_frame(*xc, e2ap::stream_for_function(m.function_id), *bytes);
}

void Ric::handle_control_result(net::ConnId c, const e2ap::RicRequestId& rid,
                                std::optional<e2ap::Cause> failure) {
  auto it = conn_node_.find(c);
  if (it == conn_node_.end()) return;
  auto pc = pending_controls_.find({it->second, rid});
  if (pc == pending_controls_.end()) return;
  svc_->cancel(pc->second.timer_id);
  std::string xapp_id = pc->second.xapp_id;
  pending_controls_.erase(pc);
  if (auto xc = xapp_conn(xapp_id)) {
    xapp::XappControlResult res;
    res.request_id = rid;
    if (failure) {
      res.outcome = xapp::ControlOutcome::Failed;
      res.cause = *failure;
    } else {
      res.outcome = xapp::ControlOutcome::Acked;
    }
    send_xapp(*xc, res);
  }
}

void Ric::e2_closed(net::ConnId c) {
  auto it = conn_node_.find(c);
  if (it == conn_node_.end()) return;
  std::string key = it->second;
  conn_node_.erase(it);
  node_conn_.erase(key);
  if (auto eit = rnib_.find(key); eit != rnib_.end()) {
    eit->second.status = rnib::NodeStatus::Disconnected;
    persist_rnib(eit->second);
  }
  fail_node_subscriptions(key, {e2ap::CauseCategory::TRANSPORT, e2ap::cause::kConnectionLost});
  // Outstanding control requests to the node can never be answered.
  for (auto pit = pending_controls_.begin(); pit != pending_controls_.end();) {
    if (pit->first.first == key) {
      svc_->cancel(pit->second.timer_id);
      if (auto xc = xapp_conn(pit->second.xapp_id)) {
        xapp::XappControlResult res;
        res.request_id = pit->first.second;
        res.outcome = xapp::ControlOutcome::Failed;
        res.cause = {e2ap::CauseCategory::TRANSPORT, e2ap::cause::kConnectionLost};
        send_xapp(*xc, res);
      }
      pit = pending_controls_.erase(pit);
    } else {
      ++pit;
    }
  }
}

void Ric::fail_node_subscriptions(const std::string& key, const e2ap::Cause& cause) {
  for (auto& sub : subs_) {
    if (e2ap::node_key(sub.node) != key || sub.state == SubState::Failed) continue;
    if (auto t = sub_timers_.find({key, sub.request_id}); t != sub_timers_.end()) {
      svc_->cancel(t->second);
      sub_timers_.erase(t);
    }
    routes_.erase({key, sub.request_id});
    fail_subscription(sub, cause, true);
  }
}

void Ric::fail_subscription(Subscription& sub, const e2ap::Cause& cause, bool notify) {
  sub.state = SubState::Failed;
  sub.failure_cause = cause;
  if (!notify) return;
  if (auto xc = xapp_conn(sub.xapp_id)) {
    xapp::XappSubscribeResult res;
    res.request_id = sub.request_id;
    res.outcome = xapp::SubscribeOutcome::Failed;
    res.cause = cause;
    send_xapp(*xc, res);
  }
}

Subscription* Ric::find_sub(const std::string& node_key, const e2ap::RicRequestId& rid) {
  for (auto& sub : subs_)
    if (sub.request_id == rid && e2ap::node_key(sub.node) == node_key) return &sub;
  return nullptr;
}

bool Ric::request_id_in_use(const e2ap::RicRequestId& rid) const {
  for (const auto& sub : subs_)
    if (sub.request_id == rid && sub.state != SubState::Failed) return true;
  for (const auto& [key, _] : pending_controls_)
    if (key.second == rid) return true;
  return false;
}

e2ap::RicRequestId Ric::allocate_request_id(const std::string& xapp_id) {
  uint16_t requestor = requestor_for(xapp_id);
  uint16_t& next = next_instance_[requestor];
  if (next == 0) next = 1;
  e2ap::RicRequestId rid{requestor, next};
  while (request_id_in_use(rid)) {
    ++rid.instance_id;
    if (rid.instance_id == 0) rid.instance_id = 1;
  }
  next = static_cast<uint16_t>(rid.instance_id + 1);
  if (next == 0) next = 1;
  return rid;
}

// ---- xApp side -------------------------------------------------------------

void Ric::xapp_accept(net::ConnId c) { conn_xapp_[c] = ""; }

void Ric::xapp_frame(net::ConnId c, const e2ap::Frame& f) {
  auto pdu = xapp::decode_pdu(f.payload);
  if (!pdu.ok()) {
    sdl_.bump_counter("ric-stats", "decode_errors");
    return;
  }
  log_.log(svc_->now_ms(), "rx", xapp::pdu_name(*pdu), peer_name_xapp(c), rid_of(*pdu));
  bool registered = conn_xapp_.count(c) && !conn_xapp_[c].empty();
  if (!registered && !std::holds_alternative<xapp::XappRegister>(*pdu)) {
    // Everything but registration requires a registered peer.
    svc_->close(c);
    xapp_closed(c);
    return;
  }
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, xapp::XappRegister>)
          handle_xapp_register(c, m);
        else if constexpr (std::is_same_v<T, xapp::XappSubscribe>)
          handle_xapp_subscribe(c, m);
        else if constexpr (std::is_same_v<T, xapp::XappControl>)
          handle_xapp_control(c, m);
        else if constexpr (std::is_same_v<T, xapp::RnibQuery>)
          handle_rnib_query(c);
        else if constexpr (std::is_same_v<T, xapp::SdlGet>)
          handle_sdl_get(c, m);
        else
          sdl_.bump_counter("ric-stats", "unexpected_pdus");
      },
      *pdu);
}

void Ric::handle_xapp_register(net::ConnId c, const xapp::XappRegister& m) {
  if (m.xapp_name.empty()) {
    svc_->close(c);
    xapp_closed(c);
    return;
  }
  conn_xapp_[c] = m.xapp_name;
  xapp_conn_[m.xapp_name] = c;
  send_xapp(c, xapp::XappRegisterAck{});
}

void Ric::handle_xapp_subscribe(net::ConnId c, const xapp::XappSubscribe& m) {
  const std::string& xapp_id = conn_xapp_[c];
  std::string key = e2ap::node_key(m.node);

  auto reject = [&](e2ap::Cause cause) {
    xapp::XappSubscribeResult res;
    // instance_id 0 = no subscription was created for this request.
    res.request_id = {requestor_for(xapp_id), 0};
    res.outcome = xapp::SubscribeOutcome::Failed;
    res.cause = cause;
    send_xapp(c, res);
  };

  auto entry = rnib_.find(key);
  if (entry == rnib_.end() || entry->second.status != rnib::NodeStatus::Connected) {
    reject({e2ap::CauseCategory::MISC, e2ap::cause::kUnknownNode});
    return;
  }
  bool has_function = std::any_of(entry->second.functions.begin(), entry->second.functions.end(),
                                  [&](const auto& f) { return f.function_id == m.function_id; });
  if (!has_function) {
    reject({e2ap::CauseCategory::RIC_SERVICE, e2ap::cause::kFunctionNotSupported});
    return;
  }

  Subscription sub;
  sub.request_id = allocate_request_id(xapp_id);
  sub.node = m.node;
  sub.function_id = m.function_id;
  sub.event_trigger = m.event_trigger;
  sub.actions = m.actions;
  sub.xapp_id = xapp_id;
  sub.state = SubState::Pending;
  subs_.push_back(sub);
  routes_[{key, sub.request_id}] = xapp_id;

  e2ap::RicSubscriptionRequest req;
  req.request_id = sub.request_id;
  req.function_id = m.function_id;
  req.event_trigger = m.event_trigger;
  req.actions = m.actions;
  send_e2(node_conn_[key], e2ap::stream_for_function(m.function_id), req);

  e2ap::RicRequestId rid = sub.request_id;
  uint64_t timer = svc_->schedule(svc_->now_ms() + cfg_.timeout_ms, [this, key, rid] {
    sub_timers_.erase({key, rid});
    Subscription* s = find_sub(key, rid);
    if (!s || s->state != SubState::Pending) return;
    routes_.erase({key, rid});
    fail_subscription(*s, {e2ap::CauseCategory::TRANSPORT, e2ap::cause::kTimeout}, true);
  });
  sub_timers_[{key, rid}] = timer;
}

void Ric::handle_xapp_control(net::ConnId c, const xapp::XappControl& m) {
  const std::string& xapp_id = conn_xapp_[c];
  std::string key = e2ap::node_key(m.node);

  auto reject = [&](e2ap::Cause cause) {
    xapp::XappControlResult res;
    res.request_id = {requestor_for(xapp_id), 0};
    res.outcome = xapp::ControlOutcome::Failed;
    res.cause = cause;
    send_xapp(c, res);
  };

  auto entry = rnib_.find(key);
  if (entry == rnib_.end() || entry->second.status != rnib::NodeStatus::Connected) {
    reject({e2ap::CauseCategory::MISC, e2ap::cause::kUnknownNode});
    return;
  }
  bool has_function = std::any_of(entry->second.functions.begin(), entry->second.functions.end(),
                                  [&](const auto& f) { return f.function_id == m.function_id; });
  if (!has_function) {
    reject({e2ap::CauseCategory::RIC_SERVICE, e2ap::cause::kFunctionNotSupported});
    return;
  }

  e2ap::RicRequestId rid = allocate_request_id(xapp_id);
  e2ap::RicControlRequest req;
  req.request_id = rid;
  req.function_id = m.function_id;
  req.header = m.header;
  req.message = m.message;
  req.ack_requested = m.ack_requested;
  send_e2(node_conn_[key], e2ap::stream_for_function(m.function_id), req);

  if (!m.ack_requested) {
    xapp::XappControlResult res;
    res.request_id = rid;
    res.outcome = xapp::ControlOutcome::SentNoAck;
    send_xapp(c, res);
    return;
  }
  uint64_t timer = svc_->schedule(svc_->now_ms() + cfg_.timeout_ms, [this, key, rid] {
    auto pc = pending_controls_.find({key, rid});
    if (pc == pending_controls_.end()) return;
    std::string owner = pc->second.xapp_id;
    pending_controls_.erase(pc);
    if (auto xc = xapp_conn(owner)) {
      xapp::XappControlResult res;
      res.request_id = rid;
      res.outcome = xapp::ControlOutcome::Failed;
      res.cause = {e2ap::CauseCategory::TRANSPORT, e2ap::cause::kTimeout};
      send_xapp(*xc, res);
    }
  });
  pending_controls_[{key, rid}] = PendingControl{xapp_id, timer};
}

void Ric::handle_rnib_query(net::ConnId c) {
  xapp::RnibResult res;
  for (const auto& [_, entry] : rnib_) res.entries.push_back(entry);
  send_xapp(c, res);
}

void Ric::handle_sdl_get(net::ConnId c, const xapp::SdlGet& m) {
  xapp::SdlValue res;
  if (auto e = sdl_.get(m.ns, m.key)) {
    res.found = true;
    res.version = e->version;
    res.value = e->value;
  }
  send_xapp(c, res);
}

void Ric::xapp_closed(net::ConnId c) {
  auto it = conn_xapp_.find(c);
  if (it == conn_xapp_.end()) return;
  std::string xapp_id = it->second;
  conn_xapp_.erase(it);
  if (xapp_id.empty()) return;
  if (auto reg = xapp_conn_.find(xapp_id); reg != xapp_conn_.end() && reg->second == c)
    xapp_conn_.erase(reg);
  for (auto& sub : subs_) {
    if (sub.xapp_id != xapp_id || sub.state == SubState::Failed) continue;
    std::string key = e2ap::node_key(sub.node);
    if (auto t = sub_timers_.find({key, sub.request_id}); t != sub_timers_.end()) {
      svc_->cancel(t->second);
      sub_timers_.erase(t);
    }
    routes_.erase({key, sub.request_id});
    fail_subscription(sub, {e2ap::CauseCategory::TRANSPORT, e2ap::cause::kConnectionLost}, false);
  }
  for (auto pit = pending_controls_.begin(); pit != pending_controls_.end();) {
    if (pit->second.xapp_id == xapp_id) {
      svc_->cancel(pit->second.timer_id);
      pit = pending_controls_.erase(pit);
    } else {
      ++pit;
    }
  }
}

// ---- management ------------------------------------------------------------

Status Ric::reset_node(const e2ap::GlobalE2NodeId& node) {
  std::string key = e2ap::node_key(node);
  auto conn = node_conn_.find(key);
  if (conn == node_conn_.end())
    return Error{ErrCode::ConfigError, "no live connection for node " + key};
  fail_node_subscriptions(key, {e2ap::CauseCategory::MISC, e2ap::cause::kUnspecified});
  send_e2(conn->second, e2ap::kStreamSupport,
          e2ap::ResetRequest{{e2ap::CauseCategory::MISC, e2ap::cause::kUnspecified}});
  return ok_status();
}

}  // namespace oran::ric
