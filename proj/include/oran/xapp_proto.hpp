#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "oran/e2ap.hpp"
#include "oran/rnib.hpp"
#include "oran/support.hpp"

// The xApp link: the RIC's northbound protocol. Same framing and IE format
// as E2AP, its own PDU tag range (0x40..), and one borrowed PDU: indications
// are delivered to xApps as verbatim E2AP RicIndication messages.
namespace oran::xapp {

inline constexpr size_t kMaxXappNameLen = 64;

struct XappRegister {
  std::string xapp_name;  // <= 64 bytes
  bool operator==(const XappRegister&) const = default;
};
struct XappRegisterAck {
  bool operator==(const XappRegisterAck&) const = default;
};
struct XappSubscribe {
  e2ap::GlobalE2NodeId node;
  uint16_t function_id = 0;
  std::vector<uint8_t> event_trigger;
  std::vector<e2ap::RicAction> actions;
  bool operator==(const XappSubscribe&) const = default;
};

enum class SubscribeOutcome : uint8_t { Active = 0, Failed = 1 };

struct XappSubscribeResult {
  e2ap::RicRequestId request_id;
  SubscribeOutcome outcome = SubscribeOutcome::Active;
  e2ap::Cause cause;  // meaningful when Failed
  std::vector<uint8_t> admitted_action_ids;
  bool operator==(const XappSubscribeResult&) const = default;
};
struct XappControl {
  e2ap::GlobalE2NodeId node;
  uint16_t function_id = 0;
  std::vector<uint8_t> header;
  std::vector<uint8_t> message;
  bool ack_requested = false;
  bool operator==(const XappControl&) const = default;
};

enum class ControlOutcome : uint8_t { Acked = 0, Failed = 1, SentNoAck = 2 };

struct XappControlResult {
  e2ap::RicRequestId request_id;
  ControlOutcome outcome = ControlOutcome::Acked;
  e2ap::Cause cause;  // meaningful when Failed
  bool operator==(const XappControlResult&) const = default;
};
struct RnibQuery {
  bool operator==(const RnibQuery&) const = default;
};
struct RnibResult {
  std::vector<rnib::RnibEntry> entries;
  bool operator==(const RnibResult&) const = default;
};
struct SdlGet {
  std::string ns;
  std::string key;
  bool operator==(const SdlGet&) const = default;
};
struct SdlValue {
  bool found = false;
  uint64_t version = 0;  // meaningful when found
  std::vector<uint8_t> value;
  bool operator==(const SdlValue&) const = default;
};

using XappPdu = std::variant<XappRegister, XappRegisterAck, XappSubscribe, XappSubscribeResult,
                             XappControl, XappControlResult, RnibQuery, RnibResult, SdlGet,
                             SdlValue>;

namespace tag {
inline constexpr uint8_t kRegister = 0x40;
inline constexpr uint8_t kRegisterAck = 0x41;
inline constexpr uint8_t kSubscribe = 0x42;
inline constexpr uint8_t kSubscribeResult = 0x43;
inline constexpr uint8_t kControl = 0x44;
inline constexpr uint8_t kControlResult = 0x45;
inline constexpr uint8_t kRnibQuery = 0x47;
inline constexpr uint8_t kRnibResult = 0x48;
inline constexpr uint8_t kSdlGet = 0x49;
inline constexpr uint8_t kSdlValue = 0x4A;
}  // namespace tag

uint8_t pdu_tag(const XappPdu& pdu);
const char* pdu_name(const XappPdu& pdu);

Expected<std::vector<uint8_t>> encode_pdu(const XappPdu& pdu);
Expected<XappPdu> decode_pdu(std::span<const uint8_t> bytes);

}  // namespace oran::xapp
