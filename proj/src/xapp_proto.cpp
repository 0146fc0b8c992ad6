#include "oran/xapp_proto.hpp"

#include "oran/bytes.hpp"
#include "oran/e2ap_ies.hpp"

namespace oran::xapp {

namespace {

using namespace e2ap::ies;
using e2ap::kMaxOpaqueLen;

struct Encoder {
  ByteWriter w;
  Status status = ok_status();

  void require(Status s) {
    if (status.ok() && !s.ok()) status = s;
  }

  Status operator()(const XappRegister& m) {
    w.u8(tag::kRegister);
    if (m.xapp_name.size() > kMaxXappNameLen) return oversize("xapp_name exceeds 64 bytes");
    put_ie_header(w, ie::kXappName, static_cast<uint16_t>(m.xapp_name.size()));
    w.raw(m.xapp_name);
    return status;
  }
  Status operator()(const XappRegisterAck&) {
    w.u8(tag::kRegisterAck);
    return status;
  }
  Status operator()(const XappSubscribe& m) {
    w.u8(tag::kSubscribe);
    require(check_node(m.node));
    put_node_ie(w, m.node);
    require(check_function_id(m.function_id));
    put_function_id_ie(w, m.function_id);
    require(put_opaque_ie(w, ie::kEventTrigger, m.event_trigger, "event trigger too large"));
    for (const auto& a : m.actions) require(put_action_ie(w, a));
    return status;
  }
  Status operator()(const XappSubscribeResult& m) {
    w.u8(tag::kSubscribeResult);
    put_request_id_ie(w, m.request_id);
    put_cause_ie(w, m.cause);
    for (uint8_t id : m.admitted_action_ids) put_u8_ie(w, ie::kAdmittedActionId, id);
    put_u8_ie(w, ie::kOutcome, static_cast<uint8_t>(m.outcome));
    return status;
  }
  Status operator()(const XappControl& m) {
    w.u8(tag::kControl);
    require(check_node(m.node));
    put_node_ie(w, m.node);
    require(check_function_id(m.function_id));
    put_function_id_ie(w, m.function_id);
    require(put_opaque_ie(w, ie::kControlHeader, m.header, "control header too large"));
    require(put_opaque_ie(w, ie::kControlMessage, m.message, "control message too large"));
    put_u8_ie(w, ie::kAckRequested, m.ack_requested ? 1 : 0);
    return status;
  }
  Status operator()(const XappControlResult& m) {
    w.u8(tag::kControlResult);
    put_request_id_ie(w, m.request_id);
    put_cause_ie(w, m.cause);
    put_u8_ie(w, ie::kOutcome, static_cast<uint8_t>(m.outcome));
    return status;
  }
  Status operator()(const RnibQuery&) {
    w.u8(tag::kRnibQuery);
    return status;
  }
  Status operator()(const RnibResult& m) {
    w.u8(tag::kRnibResult);
    for (const auto& e : m.entries) {
      std::vector<uint8_t> buf = rnib::encode_rnib_entry(e);
      require(put_opaque_ie(w, ie::kRnibEntry, buf, "rnib entry too large"));
    }
    return status;
  }
  Status operator()(const SdlGet& m) {
    w.u8(tag::kSdlGet);
    put_ie_header(w, ie::kSdlNamespace, static_cast<uint16_t>(m.ns.size()));
    w.raw(m.ns);
    put_ie_header(w, ie::kSdlKey, static_cast<uint16_t>(m.key.size()));
    w.raw(m.key);
    if (m.ns.size() > kMaxOpaqueLen || m.key.size() > kMaxOpaqueLen)
      require(oversize("sdl name too large"));
    return status;
  }
  Status operator()(const SdlValue& m) {
    w.u8(tag::kSdlValue);
    require(put_opaque_ie(w, ie::kSdlValue, m.value, "sdl value too large"));
    put_u64_ie(w, ie::kSdlVersion, m.version);
    put_u8_ie(w, ie::kSdlFound, m.found ? 1 : 0);
    return status;
  }
};

std::string span_str(std::span<const uint8_t> v) {
  return std::string(reinterpret_cast<const char*>(v.data()), v.size());
}

template <typename T>
Expected<XappPdu> as_pdu(Expected<T> v) {
  if (!v.ok()) return v.error();
  return XappPdu(std::move(*v));
}

Expected<XappPdu> decode_body(uint8_t t, const IeView& view) {
  switch (t) {
    case tag::kRegister: {
      auto name = view.one(ie::kXappName, "xapp name");
      if (!name) return name.error();
      if (name->size() > kMaxXappNameLen) return bad_ie("xapp_name exceeds 64 bytes");
      return XappPdu(XappRegister{span_str(*name)});
    }
    case tag::kRegisterAck:
      return XappPdu(XappRegisterAck{});
    case tag::kSubscribe: {
      XappSubscribe m;
      auto node = view.one(ie::kNodeId, "node id");
      if (!node) return node.error();
      auto n = read_node(*node);
      if (!n) return n.error();
      m.node = *n;
      auto fid = view.one(ie::kFunctionId, "function id");
      if (!fid) return fid.error();
      auto f = read_function_id(*fid);
      if (!f) return f.error();
      m.function_id = *f;
      auto trig = view.one(ie::kEventTrigger, "event trigger");
      if (!trig) return trig.error();
      m.event_trigger.assign(trig->begin(), trig->end());
      for (auto v : view.all(ie::kAction)) {
        auto a = read_action(v);
        if (!a) return a.error();
        m.actions.push_back(std::move(*a));
      }
      return XappPdu(std::move(m));
    }
    case tag::kSubscribeResult: {
      XappSubscribeResult m;
      auto rid = view.one(ie::kRequestId, "request id");
      if (!rid) return rid.error();
      auto r = read_request_id(*rid);
      if (!r) return r.error();
      m.request_id = *r;
      auto cz = view.one(ie::kCause, "cause");
      if (!cz) return cz.error();
      auto c = read_cause(*cz);
      if (!c) return c.error();
      m.cause = *c;
      auto oc = view.one(ie::kOutcome, "outcome");
      if (!oc) return oc.error();
      auto o = read_u8(*oc, "outcome");
      if (!o) return o.error();
      if (*o > 1) return bad_ie("unknown subscribe outcome");
      m.outcome = static_cast<SubscribeOutcome>(*o);
      for (auto v : view.all(ie::kAdmittedActionId)) {
        auto id = read_u8(v, "admitted action id");
        if (!id) return id.error();
        m.admitted_action_ids.push_back(*id);
      }
      return XappPdu(std::move(m));
    }
    case tag::kControl: {
      XappControl m;
      auto node = view.one(ie::kNodeId, "node id");
      if (!node) return node.error();
      auto n = read_node(*node);
      if (!n) return n.error();
      m.node = *n;
      auto fid = view.one(ie::kFunctionId, "function id");
      if (!fid) return fid.error();
      auto f = read_function_id(*fid);
      if (!f) return f.error();
      m.function_id = *f;
      auto hdr = view.one(ie::kControlHeader, "control header");
      if (!hdr) return hdr.error();
      m.header.assign(hdr->begin(), hdr->end());
      auto msg = view.one(ie::kControlMessage, "control message");
      if (!msg) return msg.error();
      m.message.assign(msg->begin(), msg->end());
      auto ack = view.one(ie::kAckRequested, "ack requested");
      if (!ack) return ack.error();
      auto a = read_u8(*ack, "ack requested");
      if (!a) return a.error();
      if (*a > 1) return bad_ie("ack flag must be 0 or 1");
      m.ack_requested = *a == 1;
      return XappPdu(std::move(m));
    }
    case tag::kControlResult: {
      XappControlResult m;
      auto rid = view.one(ie::kRequestId, "request id");
      if (!rid) return rid.error();
      auto r = read_request_id(*rid);
      if (!r) return r.error();
      m.request_id = *r;
      auto cz = view.one(ie::kCause, "cause");
      if (!cz) return cz.error();
      auto c = read_cause(*cz);
      if (!c) return c.error();
      m.cause = *c;
      auto oc = view.one(ie::kOutcome, "outcome");
      if (!oc) return oc.error();
      auto o = read_u8(*oc, "outcome");
      if (!o) return o.error();
      if (*o > 2) return bad_ie("unknown control outcome");
      m.outcome = static_cast<ControlOutcome>(*o);
      return XappPdu(std::move(m));
    }
    case tag::kRnibQuery:
      return XappPdu(RnibQuery{});
    case tag::kRnibResult: {
      RnibResult m;
      for (auto v : view.all(ie::kRnibEntry)) {
        auto e = rnib::decode_rnib_entry(v);
        if (!e) return e.error();
        m.entries.push_back(std::move(*e));
      }
      return XappPdu(std::move(m));
    }
    case tag::kSdlGet: {
      SdlGet m;
      auto ns = view.one(ie::kSdlNamespace, "sdl namespace");
      if (!ns) return ns.error();
      m.ns = span_str(*ns);
      auto key = view.one(ie::kSdlKey, "sdl key");
      if (!key) return key.error();
      m.key = span_str(*key);
      return XappPdu(std::move(m));
    }
    case tag::kSdlValue: {
      SdlValue m;
      auto val = view.one(ie::kSdlValue, "sdl value");
      if (!val) return val.error();
      m.value.assign(val->begin(), val->end());
      auto ver = view.one(ie::kSdlVersion, "sdl version");
      if (!ver) return ver.error();
      auto v = read_u64(*ver, "sdl version");
      if (!v) return v.error();
      m.version = *v;
      auto fnd = view.one(ie::kSdlFound, "sdl found");
      if (!fnd) return fnd.error();
      auto fv = read_u8(*fnd, "sdl found");
      if (!fv) return fv.error();
      if (*fv > 1) return bad_ie("sdl found flag must be 0 or 1");
      m.found = *fv == 1;
      return XappPdu(std::move(m));
    }
    default:
      return Error{ErrCode::UnknownPduTag, "unknown xapp pdu tag"};
  }
}

}  // namespace

uint8_t pdu_tag(const XappPdu& pdu) {
  static constexpr uint8_t kTags[] = {
      tag::kRegister, tag::kRegisterAck,   tag::kSubscribe, tag::kSubscribeResult,
      tag::kControl,  tag::kControlResult, tag::kRnibQuery, tag::kRnibResult,
      tag::kSdlGet,   tag::kSdlValue,
  };
  return kTags[pdu.index()];
}

const char* pdu_name(const XappPdu& pdu) {
  static constexpr const char* kNames[] = {
      "XappRegister", "XappRegisterAck", "XappSubscribe", "XappSubscribeResult",
      "XappControl",  "XappControlResult", "RnibQuery",   "RnibResult",
      "SdlGet",       "SdlValue",
  };
  return kNames[pdu.index()];
}

Expected<std::vector<uint8_t>> encode_pdu(const XappPdu& pdu) {
  Encoder enc;
  Status s = std::visit(enc, pdu);
  if (!s.ok()) return s.error();
  return enc.w.take();
}

Expected<XappPdu> decode_pdu(std::span<const uint8_t> bytes) {
  if (bytes.empty()) return Error{ErrCode::TruncatedBuffer, "empty pdu"};
  auto items = parse_ies(bytes.subspan(1));
  if (!items) return items.error();
  return decode_body(bytes[0], IeView(*items));
}

}  // namespace oran::xapp
