#pragma once

#include <span>
#include <string>
#include <vector>

#include "oran/bytes.hpp"
#include "oran/e2ap.hpp"
#include "oran/support.hpp"

// Shared TLV information-element codec used by the E2AP codec and the xApp
// link codec. Both protocols draw IE ids from one registry so values with the
// same meaning have the same layout on either link.
namespace oran::e2ap::ies {

namespace ie {
inline constexpr uint16_t kNodeId = 0x0001;
inline constexpr uint16_t kRanFunction = 0x0002;  // repeatable
inline constexpr uint16_t kRequestId = 0x0003;
inline constexpr uint16_t kFunctionId = 0x0004;
inline constexpr uint16_t kCause = 0x0005;
inline constexpr uint16_t kAcceptedFunctionId = 0x0006;  // repeatable
inline constexpr uint16_t kEventTrigger = 0x0007;
inline constexpr uint16_t kAction = 0x0008;  // repeatable
inline constexpr uint16_t kAdmittedActionId = 0x0009;  // repeatable
inline constexpr uint16_t kActionId = 0x000A;
inline constexpr uint16_t kSequenceNumber = 0x000B;
inline constexpr uint16_t kIndicationHeader = 0x000C;
inline constexpr uint16_t kIndicationMessage = 0x000D;
inline constexpr uint16_t kControlHeader = 0x000E;
inline constexpr uint16_t kControlMessage = 0x000F;
inline constexpr uint16_t kAckRequested = 0x0010;
// xApp-link additions (0x0020..).
inline constexpr uint16_t kXappName = 0x0020;
inline constexpr uint16_t kOutcome = 0x0022;
inline constexpr uint16_t kRnibEntry = 0x0023;  // repeatable
inline constexpr uint16_t kSdlNamespace = 0x0024;
inline constexpr uint16_t kSdlKey = 0x0025;
inline constexpr uint16_t kSdlValue = 0x0026;
inline constexpr uint16_t kSdlVersion = 0x0027;
inline constexpr uint16_t kSdlFound = 0x0028;
}  // namespace ie

Error oversize(const std::string& what);
Error bad_ie(const std::string& what);
Error missing_ie(const char* what);

// ---- encoding --------------------------------------------------------------

void put_ie_header(ByteWriter& w, uint16_t id, uint16_t len);
Status put_opaque_ie(ByteWriter& w, uint16_t id, std::span<const uint8_t> value,
                     const char* field);
void put_u8_ie(ByteWriter& w, uint16_t id, uint8_t v);
void put_u64_ie(ByteWriter& w, uint16_t id, uint64_t v);
void put_node_ie(ByteWriter& w, const GlobalE2NodeId& n);
void put_request_id_ie(ByteWriter& w, const RicRequestId& r);
void put_function_id_ie(ByteWriter& w, uint16_t fid);
void put_cause_ie(ByteWriter& w, const Cause& c);
Status put_ran_function_ie(ByteWriter& w, const RanFunctionItem& f);
Status put_action_ie(ByteWriter& w, const RicAction& a);

Status check_node(const GlobalE2NodeId& n);
Status check_function_id(uint16_t fid);

// ---- decoding --------------------------------------------------------------

struct IeItem {
  uint16_t id;
  std::span<const uint8_t> value;
};

// Parses the IE stream; accepts any id order, keeps arrival order.
Expected<std::vector<IeItem>> parse_ies(std::span<const uint8_t> body);

class IeView {
 public:
  explicit IeView(const std::vector<IeItem>& items) : items_(items) {}

  // Single-occurrence IE; duplicate is a decode error.
  Expected<std::span<const uint8_t>> one(uint16_t id, const char* name) const;
  std::vector<std::span<const uint8_t>> all(uint16_t id) const;

 private:
  const std::vector<IeItem>& items_;
};

Expected<GlobalE2NodeId> read_node(std::span<const uint8_t> v);
Expected<RicRequestId> read_request_id(std::span<const uint8_t> v);
Expected<uint16_t> read_function_id(std::span<const uint8_t> v);
Expected<Cause> read_cause(std::span<const uint8_t> v);
Expected<RanFunctionItem> read_ran_function(std::span<const uint8_t> v);
Expected<RicAction> read_action(std::span<const uint8_t> v);
Expected<uint8_t> read_u8(std::span<const uint8_t> v, const char* name);
Expected<uint64_t> read_u64(std::span<const uint8_t> v, const char* name);

}  // namespace oran::e2ap::ies
