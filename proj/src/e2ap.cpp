#include "oran/e2ap.hpp"

#include <algorithm>

#include "oran/bytes.hpp"
#include "oran/config.hpp"
#include "oran/e2ap_ies.hpp"

namespace oran::e2ap {

namespace {

using namespace ies;

struct Encoder {
  ByteWriter w;
  Status status = ok_status();

  void require(Status s) {
    if (status.ok() && !s.ok()) status = s;
  }

  Status operator()(const E2SetupRequest& m) {
    w.u8(tag::kSetupRequest);
    require(check_node(m.node));
    put_node_ie(w, m.node);
    for (const auto& f : m.functions) require(put_ran_function_ie(w, f));
    return status;
  }
  Status operator()(const E2SetupResponse& m) {
    w.u8(tag::kSetupResponse);
    for (uint16_t fid : m.accepted_function_ids) {
      require(check_function_id(fid));
      put_ie_header(w, ie::kAcceptedFunctionId, 2);
      w.u16(fid);
    }
    return status;
  }
  Status operator()(const E2SetupFailure& m) {
    w.u8(tag::kSetupFailure);
    put_cause_ie(w, m.cause);
    return status;
  }
  Status operator()(const ResetRequest& m) {
    w.u8(tag::kResetRequest);
    put_cause_ie(w, m.cause);
    return status;
  }
  Status operator()(const ResetResponse&) {
    w.u8(tag::kResetResponse);
    return status;
  }
  Status operator()(const RicSubscriptionRequest& m) {
    w.u8(tag::kSubscriptionRequest);
    put_request_id_ie(w, m.request_id);
    require(check_function_id(m.function_id));
    put_function_id_ie(w, m.function_id);
    require(put_opaque_ie(w, ie::kEventTrigger, m.event_trigger, "event_trigger"));
    for (const auto& a : m.actions) require(put_action_ie(w, a));
    return status;
  }
  Status operator()(const RicSubscriptionResponse& m) {
    w.u8(tag::kSubscriptionResponse);
    put_request_id_ie(w, m.request_id);
    for (uint8_t id : m.admitted_action_ids) {
      put_ie_header(w, ie::kAdmittedActionId, 1);
      w.u8(id);
    }
    return status;
  }
  Status operator()(const RicSubscriptionFailure& m) {
    w.u8(tag::kSubscriptionFailure);
    put_request_id_ie(w, m.request_id);
    put_cause_ie(w, m.cause);
    return status;
  }
  Status operator()(const RicIndication& m) {
    w.u8(tag::kIndication);
    put_request_id_ie(w, m.request_id);
    require(check_function_id(m.function_id));
    put_function_id_ie(w, m.function_id);
    put_ie_header(w, ie::kActionId, 1);
    w.u8(m.action_id);
    put_ie_header(w, ie::kSequenceNumber, 4);
    w.u32(m.sequence_number);
    require(put_opaque_ie(w, ie::kIndicationHeader, m.header, "indication header"));
    require(put_opaque_ie(w, ie::kIndicationMessage, m.message, "indication message"));
    return status;
  }
  Status operator()(const RicControlRequest& m) {
    w.u8(tag::kControlRequest);
    put_request_id_ie(w, m.request_id);
    require(check_function_id(m.function_id));
    put_function_id_ie(w, m.function_id);
    require(put_opaque_ie(w, ie::kControlHeader, m.header, "control header"));
    require(put_opaque_ie(w, ie::kControlMessage, m.message, "control message"));
    put_ie_header(w, ie::kAckRequested, 1);
    w.u8(m.ack_requested ? 1 : 0);
    return status;
  }
  Status operator()(const RicControlAck& m) {
    w.u8(tag::kControlAck);
    put_request_id_ie(w, m.request_id);
    return status;
  }
  Status operator()(const RicControlFailure& m) {
    w.u8(tag::kControlFailure);
    put_request_id_ie(w, m.request_id);
    put_cause_ie(w, m.cause);
    return status;
  }
};

template <typename T>
Expected<E2apPdu> as_pdu(Expected<T> v) {
  if (!v.ok()) return v.error();
  return E2apPdu(std::move(*v));
}

Expected<E2apPdu> decode_body(uint8_t tag, const IeView& ies) {
  switch (tag) {
    case tag::kSetupRequest: {
      auto node_v = ies.one(ie::kNodeId, "NodeId");
      if (!node_v.ok()) return node_v.error();
      auto node = read_node(*node_v);
      if (!node.ok()) return node.error();
      E2SetupRequest m;
      m.node = *node;
      for (auto fv : ies.all(ie::kRanFunction)) {
        auto f = read_ran_function(fv);
        if (!f.ok()) return f.error();
        m.functions.push_back(std::move(*f));
      }
      return E2apPdu(std::move(m));
    }
    case tag::kSetupResponse: {
      E2SetupResponse m;
      for (auto v : ies.all(ie::kAcceptedFunctionId)) {
        auto fid = read_function_id(v);
        if (!fid.ok()) return fid.error();
        m.accepted_function_ids.push_back(*fid);
      }
      return E2apPdu(std::move(m));
    }
    case tag::kSetupFailure: {
      auto v = ies.one(ie::kCause, "Cause");
      if (!v.ok()) return v.error();
      auto c = read_cause(*v);
      if (!c.ok()) return c.error();
      return E2apPdu(E2SetupFailure{*c});
    }
    case tag::kResetRequest: {
      auto v = ies.one(ie::kCause, "Cause");
      if (!v.ok()) return v.error();
      auto c = read_cause(*v);
      if (!c.ok()) return c.error();
      return E2apPdu(ResetRequest{*c});
    }
    case tag::kResetResponse:
      return E2apPdu(ResetResponse{});
    case tag::kSubscriptionRequest: {
      auto rid_v = ies.one(ie::kRequestId, "RequestId");
      if (!rid_v.ok()) return rid_v.error();
      auto rid = read_request_id(*rid_v);
      if (!rid.ok()) return rid.error();
      auto fid_v = ies.one(ie::kFunctionId, "FunctionId");
      if (!fid_v.ok()) return fid_v.error();
      auto fid = read_function_id(*fid_v);
      if (!fid.ok()) return fid.error();
      auto trig_v = ies.one(ie::kEventTrigger, "EventTrigger");
      if (!trig_v.ok()) return trig_v.error();
      RicSubscriptionRequest m;
      m.request_id = *rid;
      m.function_id = *fid;
      m.event_trigger.assign(trig_v->begin(), trig_v->end());
      for (auto av : ies.all(ie::kAction)) {
        auto a = read_action(av);
        if (!a.ok()) return a.error();
        m.actions.push_back(std::move(*a));
      }
      return E2apPdu(std::move(m));
    }
    case tag::kSubscriptionResponse: {
      auto rid_v = ies.one(ie::kRequestId, "RequestId");
      if (!rid_v.ok()) return rid_v.error();
      auto rid = read_request_id(*rid_v);
      if (!rid.ok()) return rid.error();
      RicSubscriptionResponse m;
      m.request_id = *rid;
      for (auto v : ies.all(ie::kAdmittedActionId)) {
        if (v.size() != 1) return bad_ie("admitted action id IE must be 1 byte");
        m.admitted_action_ids.push_back(v[0]);
      }
      return E2apPdu(std::move(m));
    }
    case tag::kSubscriptionFailure: {
      auto rid_v = ies.one(ie::kRequestId, "RequestId");
      if (!rid_v.ok()) return rid_v.error();
      auto rid = read_request_id(*rid_v);
      if (!rid.ok()) return rid.error();
      auto cv = ies.one(ie::kCause, "Cause");
      if (!cv.ok()) return cv.error();
      auto c = read_cause(*cv);
      if (!c.ok()) return c.error();
      return E2apPdu(RicSubscriptionFailure{*rid, *c});
    }
    case tag::kIndication: {
      auto rid_v = ies.one(ie::kRequestId, "RequestId");
      if (!rid_v.ok()) return rid_v.error();
      auto rid = read_request_id(*rid_v);
      if (!rid.ok()) return rid.error();
      auto fid_v = ies.one(ie::kFunctionId, "FunctionId");
      if (!fid_v.ok()) return fid_v.error();
      auto fid = read_function_id(*fid_v);
      if (!fid.ok()) return fid.error();
      auto aid_v = ies.one(ie::kActionId, "ActionId");
      if (!aid_v.ok()) return aid_v.error();
      if (aid_v->size() != 1) return bad_ie("action id IE must be 1 byte");
      auto seq_v = ies.one(ie::kSequenceNumber, "SequenceNumber");
      if (!seq_v.ok()) return seq_v.error();
      if (seq_v->size() != 4) return bad_ie("sequence number IE must be 4 bytes");
      auto hdr_v = ies.one(ie::kIndicationHeader, "IndicationHeader");
      if (!hdr_v.ok()) return hdr_v.error();
      auto msg_v = ies.one(ie::kIndicationMessage, "IndicationMessage");
      if (!msg_v.ok()) return msg_v.error();
      RicIndication m;
      m.request_id = *rid;
      m.function_id = *fid;
      m.action_id = (*aid_v)[0];
      m.sequence_number = static_cast<uint32_t>((*seq_v)[0]) << 24 |
                          static_cast<uint32_t>((*seq_v)[1]) << 16 |
                          static_cast<uint32_t>((*seq_v)[2]) << 8 | (*seq_v)[3];
      m.header.assign(hdr_v->begin(), hdr_v->end());
      m.message.assign(msg_v->begin(), msg_v->end());
      return E2apPdu(std::move(m));
    }
    case tag::kControlRequest: {
      auto rid_v = ies.one(ie::kRequestId, "RequestId");
      if (!rid_v.ok()) return rid_v.error();
      auto rid = read_request_id(*rid_v);
      if (!rid.ok()) return rid.error();
      auto fid_v = ies.one(ie::kFunctionId, "FunctionId");
      if (!fid_v.ok()) return fid_v.error();
      auto fid = read_function_id(*fid_v);
      if (!fid.ok()) return fid.error();
      auto hdr_v = ies.one(ie::kControlHeader, "ControlHeader");
      if (!hdr_v.ok()) return hdr_v.error();
      auto msg_v = ies.one(ie::kControlMessage, "ControlMessage");
      if (!msg_v.ok()) return msg_v.error();
      auto ack_v = ies.one(ie::kAckRequested, "AckRequested");
      if (!ack_v.ok()) return ack_v.error();
      if (ack_v->size() != 1 || (*ack_v)[0] > 1) return bad_ie("ack flag must be one byte 0/1");
      RicControlRequest m;
      m.request_id = *rid;
      m.function_id = *fid;
      m.header.assign(hdr_v->begin(), hdr_v->end());
      m.message.assign(msg_v->begin(), msg_v->end());
      m.ack_requested = (*ack_v)[0] == 1;
      return E2apPdu(std::move(m));
    }
    case tag::kControlAck: {
      auto rid_v = ies.one(ie::kRequestId, "RequestId");
      if (!rid_v.ok()) return rid_v.error();
      auto rid = read_request_id(*rid_v);
      if (!rid.ok()) return rid.error();
      return E2apPdu(RicControlAck{*rid});
    }
    case tag::kControlFailure: {
      auto rid_v = ies.one(ie::kRequestId, "RequestId");
      if (!rid_v.ok()) return rid_v.error();
      auto rid = read_request_id(*rid_v);
      if (!rid.ok()) return rid.error();
      auto cv = ies.one(ie::kCause, "Cause");
      if (!cv.ok()) return cv.error();
      auto c = read_cause(*cv);
      if (!c.ok()) return c.error();
      return E2apPdu(RicControlFailure{*rid, *c});
    }
    default:
      return Error{ErrCode::UnknownPduTag, "tag 0x" + to_hex(&tag, 1)};
  }
}

}  // namespace

Expected<std::vector<uint8_t>> encode_pdu(const E2apPdu& pdu) {
  Encoder enc;
  Status s = std::visit(enc, pdu);
  if (!s.ok()) return s.error();
  return enc.w.take();
}

Expected<E2apPdu> decode_pdu(std::span<const uint8_t> bytes) {
  if (bytes.empty()) return Error{ErrCode::TruncatedBuffer, "empty buffer"};
  uint8_t tag = bytes[0];
  switch (tag) {
    case tag::kSetupRequest:
    case tag::kSetupResponse:
    case tag::kSetupFailure:
    case tag::kResetRequest:
    case tag::kResetResponse:
    case tag::kSubscriptionRequest:
    case tag::kSubscriptionResponse:
    case tag::kSubscriptionFailure:
    case tag::kIndication:
    case tag::kControlRequest:
    case tag::kControlAck:
    case tag::kControlFailure:
      break;
    default:
      return Error{ErrCode::UnknownPduTag, "tag 0x" + to_hex(&tag, 1)};
  }
  auto ies = parse_ies(bytes.subspan(1));
  if (!ies.ok()) return ies.error();
  return decode_body(tag, IeView(*ies));
}

uint8_t pdu_tag(const E2apPdu& pdu) {
  return std::visit(
      [](const auto& m) -> uint8_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, E2SetupRequest>) return tag::kSetupRequest;
        if constexpr (std::is_same_v<T, E2SetupResponse>) return tag::kSetupResponse;
        if constexpr (std::is_same_v<T, E2SetupFailure>) return tag::kSetupFailure;
        if constexpr (std::is_same_v<T, ResetRequest>) return tag::kResetRequest;
        if constexpr (std::is_same_v<T, ResetResponse>) return tag::kResetResponse;
        if constexpr (std::is_same_v<T, RicSubscriptionRequest>) return tag::kSubscriptionRequest;
        if constexpr (std::is_same_v<T, RicSubscriptionResponse>) return tag::kSubscriptionResponse;
        if constexpr (std::is_same_v<T, RicSubscriptionFailure>) return tag::kSubscriptionFailure;
        if constexpr (std::is_same_v<T, RicIndication>) return tag::kIndication;
        if constexpr (std::is_same_v<T, RicControlRequest>) return tag::kControlRequest;
        if constexpr (std::is_same_v<T, RicControlAck>) return tag::kControlAck;
        if constexpr (std::is_same_v<T, RicControlFailure>) return tag::kControlFailure;
      },
      pdu);
}

const char* tag_name(uint8_t tag) {
  switch (tag) {
    case tag::kSetupRequest: return "E2SetupRequest";
    case tag::kSetupResponse: return "E2SetupResponse";
    case tag::kSetupFailure: return "E2SetupFailure";
    case tag::kResetRequest: return "ResetRequest";
    case tag::kResetResponse: return "ResetResponse";
    case tag::kSubscriptionRequest: return "RicSubscriptionRequest";
    case tag::kSubscriptionResponse: return "RicSubscriptionResponse";
    case tag::kSubscriptionFailure: return "RicSubscriptionFailure";
    case tag::kIndication: return "RicIndication";
    case tag::kControlRequest: return "RicControlRequest";
    case tag::kControlAck: return "RicControlAck";
    case tag::kControlFailure: return "RicControlFailure";
    default: return "?";
  }
}

const char* pdu_name(const E2apPdu& pdu) { return tag_name(pdu_tag(pdu)); }

const char* action_type_name(ActionType t) {
  switch (t) {
    case ActionType::REPORT: return "REPORT";
    case ActionType::INSERT: return "INSERT";
    case ActionType::CONTROL: return "CONTROL";
    case ActionType::POLICY: return "POLICY";
  }
  return "?";
}

std::optional<ActionType> action_type_from_name(const std::string& name) {
  if (name == "REPORT") return ActionType::REPORT;
  if (name == "INSERT") return ActionType::INSERT;
  if (name == "CONTROL") return ActionType::CONTROL;
  if (name == "POLICY") return ActionType::POLICY;
  return std::nullopt;
}

std::string node_key(const GlobalE2NodeId& id) {
  std::string out = format_plmn(id.plmn);
  out.push_back('/');
  switch (id.node_type) {
    case NodeType::ENB: out += "ENB"; break;
    case NodeType::GNB: out += "GNB"; break;
    case NodeType::EN_GNB: out += "EN_GNB"; break;
  }
  out.push_back('/');
  out += std::to_string(id.node_id);
  return out;
}

uint8_t stream_for_function(uint16_t function_id) {
  return function_id <= 254 ? static_cast<uint8_t>(1 + function_id) : 255;
}

Expected<std::vector<uint8_t>> frame_write(uint8_t stream_id, std::span<const uint8_t> payload) {
  if (payload.size() > kMaxFramePayload)
    return Error{ErrCode::OversizePayload, "frame payload exceeds 2^24-1 bytes"};
  ByteWriter w;
  w.u32(static_cast<uint32_t>(payload.size()));
  w.u8(stream_id);
  w.raw(payload);
  return w.take();
}

Expected<FrameReadResult> frame_read(std::span<const uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderLen)
    return Error{ErrCode::TruncatedFrame, "incomplete frame header"};
  uint32_t len = static_cast<uint32_t>(bytes[0]) << 24 | static_cast<uint32_t>(bytes[1]) << 16 |
                 static_cast<uint32_t>(bytes[2]) << 8 | bytes[3];
  if (len > kMaxFramePayload) return Error{ErrCode::OversizePayload, "frame length out of range"};
  if (bytes.size() - kFrameHeaderLen < len)
    return Error{ErrCode::TruncatedFrame, "incomplete frame payload"};
  FrameReadResult out;
  out.frame.stream_id = bytes[4];
  out.frame.payload.assign(bytes.begin() + kFrameHeaderLen, bytes.begin() + kFrameHeaderLen + len);
  out.consumed = kFrameHeaderLen + len;
  return out;
}

void FrameReassembler::feed(std::span<const uint8_t> bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<Frame> FrameReassembler::next() {
  auto r = frame_read(buf_);
  if (!r.ok()) return std::nullopt;
  buf_.erase(buf_.begin(), buf_.begin() + static_cast<long>(r->consumed));
  return std::move(r->frame);
}

}  // namespace oran::e2ap
