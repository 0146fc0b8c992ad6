#include "oran/rnib.hpp"

namespace oran::rnib {

const char* node_status_name(NodeStatus s) {
  return s == NodeStatus::Connected ? "CONNECTED" : "DISCONNECTED";
}

void write_rnib_entry(ByteWriter& w, const RnibEntry& entry) {
  w.raw(std::span<const uint8_t>(entry.node.plmn.data(), 3));
  w.u8(static_cast<uint8_t>(entry.node.node_type));
  w.u32(entry.node.node_id);
  w.u8(static_cast<uint8_t>(entry.status));
  w.u64(entry.connected_at_ms);
  w.u16(static_cast<uint16_t>(entry.transport_addr.size()));
  w.raw(entry.transport_addr);
  w.u8(static_cast<uint8_t>(entry.functions.size()));
  for (const auto& f : entry.functions) {
    w.u16(f.function_id);
    w.u16(f.revision);
    w.u8(static_cast<uint8_t>(f.sm_name.size()));
    w.raw(f.sm_name);
    w.u16(static_cast<uint16_t>(f.definition.size()));
    w.raw(f.definition);
  }
}

Expected<RnibEntry> read_rnib_entry(ByteReader& r) {
  RnibEntry e;
  std::span<const uint8_t> plmn;
  uint8_t type = 0, status = 0, nfunc = 0;
  uint16_t addr_len = 0;
  if (!r.bytes(3, plmn) || !r.u8(type) || !r.u32(e.node.node_id) || !r.u8(status) ||
      !r.u64(e.connected_at_ms) || !r.u16(addr_len))
    return Error{ErrCode::TruncatedBuffer, "rnib entry"};
  std::copy(plmn.begin(), plmn.end(), e.node.plmn.begin());
  if (type > 2) return Error{ErrCode::InvalidIeValue, "rnib node type"};
  e.node.node_type = static_cast<e2ap::NodeType>(type);
  if (status > 1) return Error{ErrCode::InvalidIeValue, "rnib status"};
  e.status = static_cast<NodeStatus>(status);
  if (!r.str(addr_len, e.transport_addr) || !r.u8(nfunc))
    return Error{ErrCode::TruncatedBuffer, "rnib entry"};
  for (uint8_t i = 0; i < nfunc; ++i) {
    e2ap::RanFunctionItem f;
    uint8_t name_len = 0;
    uint16_t def_len = 0;
    if (!r.u16(f.function_id) || !r.u16(f.revision) || !r.u8(name_len) ||
        !r.str(name_len, f.sm_name) || !r.u16(def_len) || !r.bytes_vec(def_len, f.definition))
      return Error{ErrCode::TruncatedBuffer, "rnib function"};
    if (f.function_id > e2ap::kMaxRanFunctionId)
      return Error{ErrCode::InvalidIeValue, "rnib function id"};
    e.functions.push_back(std::move(f));
  }
  return e;
}

std::vector<uint8_t> encode_rnib_entry(const RnibEntry& entry) {
  ByteWriter w;
  write_rnib_entry(w, entry);
  return w.take();
}

Expected<RnibEntry> decode_rnib_entry(std::span<const uint8_t> buf) {
  ByteReader r(buf);
  auto e = read_rnib_entry(r);
  if (!e) return e;
  if (!r.empty()) return Error{ErrCode::TrailingGarbage, "rnib entry"};
  return e;
}

}  // namespace oran::rnib
