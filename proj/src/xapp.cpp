#include "oran/xapp.hpp"

#include <algorithm>
#include <set>

namespace oran::xapp {

namespace {

// Strict unsigned decimal parse for key suffixes and share lists.
std::optional<uint64_t> parse_uint(const std::string& s, uint64_t max) {
  if (s.empty() || s.size() > 20) return std::nullopt;
  uint64_t v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return std::nullopt;
    v = v * 10 + static_cast<uint64_t>(ch - '0');
    if (v > max) return std::nullopt;
  }
  return v;
}

const char* cause_category_text(e2ap::CauseCategory c) {
  switch (c) {
    case e2ap::CauseCategory::RIC_REQUEST: return "ric-request";
    case e2ap::CauseCategory::RIC_SERVICE: return "ric-service";
    case e2ap::CauseCategory::TRANSPORT: return "transport";
    case e2ap::CauseCategory::PROTOCOL: return "protocol";
    case e2ap::CauseCategory::MISC: return "misc";
  }
  return "?";
}

std::string cause_text(const e2ap::Cause& c) {
  return std::string(cause_category_text(c.category)) + "/" + std::to_string(c.code);
}

bool node_has_function(const rnib::RnibEntry& e, uint16_t function_id) {
  return e.status == rnib::NodeStatus::Connected &&
         std::any_of(e.functions.begin(), e.functions.end(),
                     [&](const auto& f) { return f.function_id == function_id; });
}

}  // namespace

// --- Descriptors ------------------------------------------------------------

Expected<XappDescriptor> parse_descriptor(const KvConfig& cfg) {
  XappDescriptor d;
  auto name = cfg.get("xapp_name");
  if (!name || name->empty())
    return Error{ErrCode::MissingKey, "xapp_name (" + cfg.origin() + ")"};
  d.xapp_name = *name;
  if (d.xapp_name.size() > kMaxXappNameLen)
    return Error{ErrCode::OversizeField, "xapp_name longer than 64 bytes"};

  if (!cfg.has("consumes")) return Error{ErrCode::MissingKey, "consumes (" + cfg.origin() + ")"};
  d.consumes = cfg.get_list("consumes");
  if (d.consumes.empty())
    return Error{ErrCode::MissingKey, "consumes must name at least one service model"};

  for (const auto& item : cfg.get_list("produces")) {
    auto t = e2ap::action_type_from_name(item);
    if (!t) return Error{ErrCode::UnknownActionType, "produces: " + item};
    d.produces.push_back(*t);
  }
  d.version = cfg.get_or("version", "0");
  return d;
}

Expected<XappDescriptor> load_descriptor(const std::string& path) {
  auto cfg = KvConfig::parse_file(path);
  if (!cfg.ok()) return cfg.error();
  return parse_descriptor(*cfg);
}

// --- Metric persistence -----------------------------------------------------

std::string to_csv_line(const MetricRow& row) {
  return std::to_string(row.t_ms) + "," + std::to_string(row.node_id) + "," + row.container +
         "," + row.metric + "," + row.key + "," + std::to_string(row.value);
}

Status write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return Error{ErrCode::ConfigError, "cannot open " + path + " for writing"};
  out << kMetricsCsvHeader << '\n';
  for (const auto& r : rows) out << to_csv_line(r) << '\n';
  out.flush();
  if (!out) return Error{ErrCode::ConfigError, "short write to " + path};
  return ok_status();
}

// --- Common client plumbing -------------------------------------------------

XappBase::XappBase(std::string ric_addr, XappDescriptor desc)
    : ric_addr_(std::move(ric_addr)), desc_(std::move(desc)) {}

Status XappBase::start(net::Services& svc) {
  svc_ = &svc;
  conn_ = svc.connect(ric_addr_, *this);
  return ok_status();
}

void XappBase::on_connected(net::ConnId c) {
  conn_ = c;
  link_up_ = true;
  send(XappRegister{desc_.xapp_name});
}

void XappBase::on_frame(net::ConnId, const e2ap::Frame& f) {
  if (!f.payload.empty() && f.payload[0] == e2ap::tag::kIndication) {
    auto ind = e2ap::decode_pdu(f.payload);
    if (!ind.ok()) {
      ++decode_warnings_;
      return;
    }
    const auto& i = std::get<e2ap::RicIndication>(*ind);
    log_.log(svc_->now_ms(), "rx", e2ap::pdu_name(*ind), "ric", i.request_id);
    on_indication(i);
    return;
  }
  auto pdu = decode_pdu(f.payload);
  if (!pdu.ok()) {
    ++decode_warnings_;
    return;
  }
  log_.log(svc_->now_ms(), "rx", pdu_name(*pdu), "ric", std::nullopt);
  if (std::holds_alternative<XappRegisterAck>(*pdu)) {
    registered_ = true;
    on_registered();
    return;
  }
  on_message(*pdu);
}

void XappBase::on_closed(net::ConnId) {
  link_up_ = false;
  if (!failed_) transport_lost_ = true;
}

void XappBase::send(const XappPdu& pdu) {
  if (!svc_ || !link_up_) return;
  auto bytes = encode_pdu(pdu);
  if (!bytes.ok()) return;  // callers build bounded PDUs
  log_.log(svc_->now_ms(), "tx", pdu_name(pdu), "ric", std::nullopt);
  svc_->send_frame(conn_, 0, *bytes);
}

void XappBase::fail(std::string reason) {
  if (failed_) return;
  failed_ = true;
  failure_reason_ = std::move(reason);
  if (svc_ && link_up_) {
    svc_->close(conn_);
    link_up_ = false;
  }
}

void XappBase::append_row(MetricRow row) {
  if (csv_.is_open()) {
    csv_ << to_csv_line(row) << '\n';
    csv_.flush();
  }
  rows_.push_back(std::move(row));
}

Status XappBase::open_csv(const std::string& path) {
  if (path.empty()) return ok_status();
  csv_.open(path, std::ios::trunc);
  if (!csv_) return Error{ErrCode::ConfigError, "cannot open " + path + " for writing"};
  csv_ << kMetricsCsvHeader << '\n';
  csv_.flush();
  return ok_status();
}

// --- kpimon -----------------------------------------------------------------

Expected<KpimonConfig> KpimonConfig::from_config(const KvConfig& cfg) {
  KpimonConfig c;
  c.ric_addr = cfg.get_or("xapp.ric_addr", c.ric_addr);
  auto period = cfg.get_u64_or("kpimon.period_ms", c.period_ms);
  if (period < 1 || period > UINT32_MAX)
    return Error{ErrCode::InvalidPeriod, "kpimon.period_ms"};
  c.period_ms = static_cast<uint32_t>(period);
  c.out_csv = cfg.get_or("kpimon.out_csv", "");
  return c;
}

KpimonApp::KpimonApp(KpimonConfig cfg, XappDescriptor desc)
    : XappBase(cfg.ric_addr, std::move(desc)), cfg_(std::move(cfg)) {}

Status KpimonApp::check_descriptor(const XappDescriptor& desc) {
  for (const auto& s : desc.consumes)
    if (s == kpm::kSmName) return ok_status();
  return Error{ErrCode::ConfigError,
               "descriptor for " + desc.xapp_name + " does not consume " + kpm::kSmName};
}

Status KpimonApp::start(net::Services& svc) {
  if (auto s = check_descriptor(descriptor()); !s.ok()) return s;
  if (auto s = open_csv(cfg_.out_csv); !s.ok()) return s;
  return XappBase::start(svc);
}

void KpimonApp::on_registered() { send(RnibQuery{}); }

void KpimonApp::on_message(const XappPdu& pdu) {
  if (const auto* rnib = std::get_if<RnibResult>(&pdu)) {
    for (const auto& entry : rnib->entries) {
      if (!node_has_function(entry, kpm::kFunctionId)) continue;
      XappSubscribe sub;
      sub.node = entry.node;
      sub.function_id = kpm::kFunctionId;
      sub.event_trigger = kpm::encode_trigger({cfg_.period_ms});
      sub.actions = {{1, e2ap::ActionType::REPORT, {}}};
      send(sub);
      ++pending_;
    }
    if (pending_ == 0) fail(std::string("no connected node exposes ") + kpm::kSmName);
    return;
  }
  if (const auto* res = std::get_if<XappSubscribeResult>(&pdu)) {
    if (res->outcome == SubscribeOutcome::Active) {
      if (pending_ > 0) --pending_;
      ++active_;
    } else {
      if (active_ > 0) --active_;
      fail("subscription failed: " + cause_text(res->cause));
    }
    return;
  }
}

void KpimonApp::on_indication(const e2ap::RicIndication& ind) {
  auto hdr = kpm::decode_header(ind.header);
  auto rep = kpm::decode_report(ind.message);
  if (!hdr.ok() || !rep.ok()) {
    ++decode_warnings_;
    return;
  }
  ++reports_received_;
  const uint64_t t = hdr->timestamp_ms;
  const uint32_t node = hdr->node_id;

  for (const auto& c : rep->containers) {
    const std::string cname = kpm::container_type_name(c.type());
    if (const auto* du = std::get_if<kpm::OduMetrics>(&c.metrics)) {
      append_row({t, node, cname, "prb_used_dl", "", du->prb_used_dl});
      append_row({t, node, cname, "prb_used_ul", "", du->prb_used_ul});
      append_row({t, node, cname, "prb_available", "", du->prb_available});
    } else if (const auto* cp = std::get_if<kpm::OcuCpMetrics>(&c.metrics)) {
      append_row({t, node, cname, "active_ues", "", cp->active_ues});
    } else if (const auto* up = std::get_if<kpm::OcuUpMetrics>(&c.metrics)) {
      auto& prev = prev_stats_[node];
      for (size_t i = 0; i < up->stats.size(); ++i) {
        const auto& st = up->stats[i];
        const std::string key = std::to_string(st.qci);
        const uint64_t prev_dl = i < prev.size() ? prev[i].cum_dl_bytes : 0;
        const uint64_t prev_ul = i < prev.size() ? prev[i].cum_ul_bytes : 0;
        append_row({t, node, cname, "cum_dl_bytes", key, st.cum_dl_bytes});
        append_row({t, node, cname, "cum_dl_bytes_delta", key,
                    st.cum_dl_bytes >= prev_dl ? st.cum_dl_bytes - prev_dl : 0});
        append_row({t, node, cname, "cum_ul_bytes", key, st.cum_ul_bytes});
        append_row({t, node, cname, "cum_ul_bytes_delta", key,
                    st.cum_ul_bytes >= prev_ul ? st.cum_ul_bytes - prev_ul : 0});
      }
      prev = up->stats;
    }
  }
}

// --- slicing ----------------------------------------------------------------

Status validate_schedule(const SliceSchedule& sched) {
  std::set<uint8_t> ids;
  for (const auto& cs : sched.slices) {
    if (cs.name.size() > slicing::kMaxSliceNameLen)
      return Error{ErrCode::OversizeField,
                   "slice " + std::to_string(cs.slice_id) + " name longer than 32 bytes"};
    if (!ids.insert(cs.slice_id).second)
      return Error{ErrCode::DuplicateSliceId, "slice " + std::to_string(cs.slice_id)};
  }
  for (const auto& b : sched.bindings) {
    if (!ids.count(b.slice_id))
      return Error{ErrCode::UnknownSlice, "binding for ue " + std::to_string(b.ue_id) +
                                              " names slice " + std::to_string(b.slice_id)};
  }
  uint32_t prev = 0;
  bool first = true;
  for (const auto& p : sched.points) {
    if (!first && p.at_s <= prev)
      return Error{ErrCode::ConfigError, "share schedule times must be strictly increasing (at " +
                                             std::to_string(p.at_s) + "s)"};
    prev = p.at_s;
    first = false;
    if (auto st = slicing::validate_shares(p.shares); !st.ok()) return st.error();
    for (const auto& sh : p.shares) {
      if (!ids.count(sh.slice_id))
        return Error{ErrCode::UnknownSlice, "share entry at " + std::to_string(p.at_s) +
                                                "s names slice " + std::to_string(sh.slice_id)};
    }
  }
  return ok_status();
}

Expected<SlicingConfig> SlicingConfig::from_config(const KvConfig& cfg) {
  SlicingConfig c;
  c.ric_addr = cfg.get_or("xapp.ric_addr", c.ric_addr);
  auto period = cfg.get_u64_or("slicing.report_period_ms", c.report_period_ms);
  if (period < 1 || period > UINT32_MAX)
    return Error{ErrCode::InvalidPeriod, "slicing.report_period_ms"};
  c.report_period_ms = static_cast<uint32_t>(period);
  c.out_csv = cfg.get_or("slicing.out_csv", "");

  for (const auto& key : cfg.keys_with_prefix("slicing.slice.")) {
    const std::string suffix = key.substr(std::string("slicing.slice.").size());
    const auto dot = suffix.find('.');
    if (dot == std::string::npos || suffix.substr(dot + 1) != "name")
      return Error{ErrCode::ConfigError, "unexpected key " + key};
    auto id = parse_uint(suffix.substr(0, dot), 255);
    if (!id) return Error{ErrCode::ConfigError, key + ": slice id must be 0..255"};
    c.schedule.slices.push_back(
        {static_cast<uint8_t>(*id), cfg.get_or(key, "")});
  }
  for (const auto& key : cfg.keys_with_prefix("slicing.bind.")) {
    auto ue = parse_uint(key.substr(std::string("slicing.bind.").size()), UINT32_MAX);
    if (!ue) return Error{ErrCode::ConfigError, key + ": ue id must be an unsigned integer"};
    auto slice = parse_uint(cfg.get_or(key, ""), 255);
    if (!slice) return Error{ErrCode::ConfigError, key + ": slice id must be 0..255"};
    c.schedule.bindings.push_back({static_cast<uint32_t>(*ue), static_cast<uint8_t>(*slice)});
  }
  for (const auto& key : cfg.keys_with_prefix("slicing.share.")) {
    auto at_s = parse_uint(key.substr(std::string("slicing.share.").size()), UINT32_MAX);
    if (!at_s) return Error{ErrCode::ConfigError, key + ": time must be seconds since start"};
    SharePoint point;
    point.at_s = static_cast<uint32_t>(*at_s);
    for (const auto& item : cfg.get_list(key)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        return Error{ErrCode::ConfigError, key + ": entries must look like slice:share"};
      auto id = parse_uint(item.substr(0, colon), 255);
      auto share = parse_uint(item.substr(colon + 1), 100);
      if (!id || !share)
        return Error{ErrCode::ConfigError, key + ": bad share entry '" + item + "'"};
      point.shares.push_back({static_cast<uint8_t>(*id), static_cast<uint8_t>(*share)});
    }
    c.schedule.points.push_back(std::move(point));
  }

  if (auto st = validate_schedule(c.schedule); !st.ok()) return st.error();
  return c;
}

SlicingApp::SlicingApp(SlicingConfig cfg, XappDescriptor desc)
    : XappBase(cfg.ric_addr, std::move(desc)), cfg_(std::move(cfg)) {}

Status SlicingApp::check_descriptor(const XappDescriptor& desc) {
  bool consumes = std::any_of(desc.consumes.begin(), desc.consumes.end(),
                              [](const std::string& s) { return s == slicing::kSmName; });
  if (!consumes)
    return Error{ErrCode::ConfigError,
                 "descriptor for " + desc.xapp_name + " does not consume " + slicing::kSmName};
  bool controls = std::any_of(desc.produces.begin(), desc.produces.end(),
                              [](e2ap::ActionType t) { return t == e2ap::ActionType::CONTROL; });
  if (!controls)
    return Error{ErrCode::ConfigError,
                 "descriptor for " + desc.xapp_name + " does not produce CONTROL"};
  return ok_status();
}

Status SlicingApp::start(net::Services& svc) {
  if (auto s = check_descriptor(descriptor()); !s.ok()) return s;
  if (auto s = validate_schedule(cfg_.schedule); !s.ok()) return s;
  if (auto s = open_csv(cfg_.out_csv); !s.ok()) return s;
  return XappBase::start(svc);
}

void SlicingApp::on_registered() { send(RnibQuery{}); }

void SlicingApp::on_message(const XappPdu& pdu) {
  if (const auto* rnib = std::get_if<RnibResult>(&pdu)) {
    for (const auto& entry : rnib->entries) {
      if (node_has_function(entry, slicing::kFunctionId)) {
        node_ = entry.node;
        break;
      }
    }
    if (!node_) {
      fail(std::string("no connected node exposes ") + slicing::kSmName);
      return;
    }
    for (const auto& cs : cfg_.schedule.slices)
      send_control({cs, "create slice " + std::to_string(cs.slice_id), false, std::nullopt});
    for (const auto& b : cfg_.schedule.bindings)
      send_control({b, "bind ue " + std::to_string(b.ue_id), false, std::nullopt});

    XappSubscribe sub;
    sub.node = *node_;
    sub.function_id = slicing::kFunctionId;
    sub.event_trigger = kpm::encode_trigger({cfg_.report_period_ms});
    sub.actions = {{1, e2ap::ActionType::REPORT, {}}};
    send(sub);

    arm_point_timers();
    return;
  }
  if (const auto* res = std::get_if<XappSubscribeResult>(&pdu)) {
    if (res->outcome == SubscribeOutcome::Active) {
      subscribed_ = true;
    } else {
      fail("subscription failed: " + cause_text(res->cause));
    }
    return;
  }
  if (const auto* res = std::get_if<XappControlResult>(&pdu)) {
    if (outstanding_.empty()) return;  // stray result; nothing to match
    OutstandingControl oc = std::move(outstanding_.front());
    outstanding_.pop_front();
    if (res->outcome == ControlOutcome::Failed) {
      if (!oc.retried) {
        ++retries_;
        oc.retried = true;
        send_control(std::move(oc));
      } else {
        ++control_failures_;
      }
      return;
    }
    ++acks_;
    if (oc.point_index) share_ack_times_[*oc.point_index] = svc_->now_ms();
    return;
  }
}

void SlicingApp::on_indication(const e2ap::RicIndication& ind) {
  auto hdr = kpm::decode_header(ind.header);
  auto rep = slicing::decode_report(ind.message);
  if (!hdr.ok() || !rep.ok()) {
    ++decode_warnings_;
    return;
  }
  ++reports_received_;
  const uint64_t t = hdr->timestamp_ms;
  const uint32_t node = hdr->node_id;
  for (const auto& rec : rep->records) {
    const std::string key = std::to_string(rec.slice_id);
    // Slice scheduling is a DU MAC function, so the rows file under O_DU.
    append_row({t, node, "O_DU", "subframes_allocated", key, rec.subframes_allocated});
    append_row({t, node, "O_DU", "cum_dl_bytes", key, rec.cum_dl_bytes});
    append_row({t, node, "O_DU", "throughput_bps", key, rec.throughput_bps});
  }
}

void SlicingApp::send_control(OutstandingControl oc) {
  XappControl m;
  m.node = *node_;
  m.function_id = slicing::kFunctionId;
  auto msg = slicing::encode_control(oc.cmd);
  if (!msg.ok()) {
    ++control_failures_;  // schedule is validated at start; defensive only
    return;
  }
  m.message = *msg;
  m.ack_requested = true;
  send(m);
  outstanding_.push_back(std::move(oc));
}

void SlicingApp::arm_point_timers() {
  for (size_t i = 0; i < cfg_.schedule.points.size(); ++i) {
    const uint64_t fire_ms = uint64_t{cfg_.schedule.points[i].at_s} * 1000;
    if (fire_ms <= svc_->now_ms()) {
      fire_point(i);
    } else {
      svc_->schedule(fire_ms, [this, i] { fire_point(i); });
    }
  }
}

void SlicingApp::fire_point(size_t index) {
  if (failed_or_down()) return;
  const auto& p = cfg_.schedule.points[index];
  send_control({slicing::ConfigureShares{p.shares},
                "shares at " + std::to_string(p.at_s) + "s", false, index});
}

}  // namespace oran::xapp
