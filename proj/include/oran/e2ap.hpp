#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "oran/support.hpp"

namespace oran::e2ap {

// ---------------------------------------------------------------------------
// Domain types. Wire layouts for everything below are normative in
// docs/wire-format.md; encode_pdu/decode_pdu are the only codec entry points.
// ---------------------------------------------------------------------------

enum class NodeType : uint8_t { ENB = 0, GNB = 1, EN_GNB = 2 };

struct GlobalE2NodeId {
  std::array<uint8_t, 3> plmn{};  // BCD-packed MCC+MNC
  NodeType node_type = NodeType::ENB;
  uint32_t node_id = 0;  // low 20 bits significant

  bool operator==(const GlobalE2NodeId&) const = default;
  // Strict ordering so node ids can key maps.
  auto operator<=>(const GlobalE2NodeId&) const = default;
};

std::string node_key(const GlobalE2NodeId& id);  // "plmn/type/id" display+SDL key

inline constexpr uint32_t kMaxNodeId = (1u << 20) - 1;
inline constexpr size_t kMaxSmNameLen = 64;
inline constexpr size_t kMaxSmDefinitionLen = 4096;
inline constexpr size_t kMaxOpaqueLen = 65535;  // every opaque field carries a 16-bit length

struct RanFunctionItem {
  uint16_t function_id = 0;  // 0..4095
  uint16_t revision = 0;
  std::string sm_name;                  // <= 64 bytes, unique per node
  std::vector<uint8_t> definition;      // <= 4096 bytes
  bool operator==(const RanFunctionItem&) const = default;
};

inline constexpr uint16_t kMaxRanFunctionId = 4095;

struct RicRequestId {
  uint16_t requestor_id = 0;
  uint16_t instance_id = 0;
  bool operator==(const RicRequestId&) const = default;
  auto operator<=>(const RicRequestId&) const = default;
};

enum class CauseCategory : uint8_t {
  RIC_REQUEST = 0,
  RIC_SERVICE = 1,
  TRANSPORT = 2,
  PROTOCOL = 3,
  MISC = 4,
};

// Cause codes, per category (registry in docs/wire-format.md).
namespace cause {
inline constexpr uint8_t kUnspecified = 0;
// MISC
inline constexpr uint8_t kUnauthorized = 1;
inline constexpr uint8_t kUnknownNode = 2;
// PROTOCOL
inline constexpr uint8_t kDuplicateNode = 1;
inline constexpr uint8_t kMalformedTrigger = 2;
inline constexpr uint8_t kMalformedPayload = 3;
// TRANSPORT
inline constexpr uint8_t kTimeout = 1;
inline constexpr uint8_t kConnectionLost = 2;
// RIC_SERVICE
inline constexpr uint8_t kFunctionNotSupported = 1;
inline constexpr uint8_t kActionNotSupported = 2;
inline constexpr uint8_t kControlRejected = 3;
inline constexpr uint8_t kShareSumExceeded = 4;
inline constexpr uint8_t kDuplicateSliceId = 5;
inline constexpr uint8_t kUnknownSlice = 6;
inline constexpr uint8_t kUnknownUe = 7;
// RIC_REQUEST
inline constexpr uint8_t kUnknownRequestId = 1;
}  // namespace cause

struct Cause {
  CauseCategory category = CauseCategory::MISC;
  uint8_t code = 0;
  bool operator==(const Cause&) const = default;
};

enum class ActionType : uint8_t { REPORT = 0, INSERT = 1, CONTROL = 2, POLICY = 3 };

const char* action_type_name(ActionType t);
std::optional<ActionType> action_type_from_name(const std::string& name);

struct RicAction {
  uint8_t action_id = 0;
  ActionType action_type = ActionType::REPORT;
  std::vector<uint8_t> definition;
  bool operator==(const RicAction&) const = default;
};

// --- The twelve E2AP messages -----------------------------------------------

struct E2SetupRequest {
  GlobalE2NodeId node;
  std::vector<RanFunctionItem> functions;
  bool operator==(const E2SetupRequest&) const = default;
};
struct E2SetupResponse {
  std::vector<uint16_t> accepted_function_ids;
  bool operator==(const E2SetupResponse&) const = default;
};
struct E2SetupFailure {
  Cause cause;
  bool operator==(const E2SetupFailure&) const = default;
};
struct ResetRequest {
  Cause cause;
  bool operator==(const ResetRequest&) const = default;
};
struct ResetResponse {
  bool operator==(const ResetResponse&) const = default;
};
struct RicSubscriptionRequest {
  RicRequestId request_id;
  uint16_t function_id = 0;
  std::vector<uint8_t> event_trigger;
  std::vector<RicAction> actions;
  bool operator==(const RicSubscriptionRequest&) const = default;
};
struct RicSubscriptionResponse {
  RicRequestId request_id;
  std::vector<uint8_t> admitted_action_ids;
  bool operator==(const RicSubscriptionResponse&) const = default;
};
struct RicSubscriptionFailure {
  RicRequestId request_id;
  Cause cause;
  bool operator==(const RicSubscriptionFailure&) const = default;
};
struct RicIndication {
  RicRequestId request_id;
  uint16_t function_id = 0;
  uint8_t action_id = 0;
  uint32_t sequence_number = 0;  // strictly increasing per subscription
  std::vector<uint8_t> header;
  std::vector<uint8_t> message;
  bool operator==(const RicIndication&) const = default;
};
struct RicControlRequest {
  RicRequestId request_id;
  uint16_t function_id = 0;
  std::vector<uint8_t> header;
  std::vector<uint8_t> message;
  bool ack_requested = false;
  bool operator==(const RicControlRequest&) const = default;
};
struct RicControlAck {
  RicRequestId request_id;
  bool operator==(const RicControlAck&) const = default;
};
struct RicControlFailure {
  RicRequestId request_id;
  Cause cause;
  bool operator==(const RicControlFailure&) const = default;
};

using E2apPdu = std::variant<E2SetupRequest, E2SetupResponse, E2SetupFailure, ResetRequest,
                             ResetResponse, RicSubscriptionRequest, RicSubscriptionResponse,
                             RicSubscriptionFailure, RicIndication, RicControlRequest,
                             RicControlAck, RicControlFailure>;

// PDU tags (normative).
namespace tag {
inline constexpr uint8_t kSetupRequest = 0x01;
inline constexpr uint8_t kSetupResponse = 0x02;
inline constexpr uint8_t kSetupFailure = 0x03;
inline constexpr uint8_t kResetRequest = 0x04;
inline constexpr uint8_t kResetResponse = 0x05;
inline constexpr uint8_t kSubscriptionRequest = 0x10;
inline constexpr uint8_t kSubscriptionResponse = 0x11;
inline constexpr uint8_t kSubscriptionFailure = 0x12;
inline constexpr uint8_t kIndication = 0x20;
inline constexpr uint8_t kControlRequest = 0x30;
inline constexpr uint8_t kControlAck = 0x31;
inline constexpr uint8_t kControlFailure = 0x32;
}  // namespace tag

uint8_t pdu_tag(const E2apPdu& pdu);
const char* pdu_name(const E2apPdu& pdu);
const char* tag_name(uint8_t tag);

// Canonical TLV encoding: 1-byte tag, then IEs as (u16 id, u16 len, value),
// ids ascending; repeated ids keep list order. Pure function of the PDU.
Expected<std::vector<uint8_t>> encode_pdu(const E2apPdu& pdu);

// Inverse on encode_pdu's image. Unknown IE ids are skipped; unknown PDU tags
// and missing mandatory IEs are errors. Never throws on arbitrary input.
Expected<E2apPdu> decode_pdu(std::span<const uint8_t> bytes);

// --- Framing: 4-byte BE payload length, 1-byte stream id, payload -----------

inline constexpr size_t kFrameHeaderLen = 5;
inline constexpr size_t kMaxFramePayload = (1u << 24) - 1;

// Stream-id convention: 0 = support procedures, 1+k = service traffic for RAN
// function k (k <= 254; functions beyond that share stream 255).
inline constexpr uint8_t kStreamSupport = 0;
uint8_t stream_for_function(uint16_t function_id);

Expected<std::vector<uint8_t>> frame_write(uint8_t stream_id, std::span<const uint8_t> payload);

struct Frame {
  uint8_t stream_id = 0;
  std::vector<uint8_t> payload;
  bool operator==(const Frame&) const = default;
};

struct FrameReadResult {
  Frame frame;
  size_t consumed = 0;  // bytes of the input used by this frame
};

// Consumes exactly one frame from the front of `bytes`; TruncatedFrame means
// "wait for more input".
Expected<FrameReadResult> frame_read(std::span<const uint8_t> bytes);

// Incremental reassembly for byte-stream transports.
class FrameReassembler {
 public:
  void feed(std::span<const uint8_t> bytes);
  std::optional<Frame> next();
  size_t buffered() const { return buf_.size(); }

 private:
  std::vector<uint8_t> buf_;
};

}  // namespace oran::e2ap
