#include "oran/e2ap_ies.hpp"

#include <algorithm>
#include <optional>

namespace oran::e2ap::ies {

Error oversize(const std::string& what) { return Error{ErrCode::OversizeField, what}; }
Error bad_ie(const std::string& what) { return Error{ErrCode::InvalidIeValue, what}; }
Error missing_ie(const char* what) { return Error{ErrCode::MissingMandatoryIe, what}; }

void put_ie_header(ByteWriter& w, uint16_t id, uint16_t len) {
  w.u16(id);
  w.u16(len);
}

Status put_opaque_ie(ByteWriter& w, uint16_t id, std::span<const uint8_t> value,
                     const char* field) {
  if (value.size() > kMaxOpaqueLen) return oversize(field);
  put_ie_header(w, id, static_cast<uint16_t>(value.size()));
  w.raw(value);
  return ok_status();
}

void put_u8_ie(ByteWriter& w, uint16_t id, uint8_t v) {
  put_ie_header(w, id, 1);
  w.u8(v);
}

void put_u64_ie(ByteWriter& w, uint16_t id, uint64_t v) {
  put_ie_header(w, id, 8);
  w.u64(v);
}

void put_node_ie(ByteWriter& w, const GlobalE2NodeId& n) {
  put_ie_header(w, ie::kNodeId, 8);
  w.raw(std::span<const uint8_t>(n.plmn.data(), 3));
  w.u8(static_cast<uint8_t>(n.node_type));
  w.u32(n.node_id);
}

void put_request_id_ie(ByteWriter& w, const RicRequestId& r) {
  put_ie_header(w, ie::kRequestId, 4);
  w.u16(r.requestor_id);
  w.u16(r.instance_id);
}

void put_function_id_ie(ByteWriter& w, uint16_t fid) {
  put_ie_header(w, ie::kFunctionId, 2);
  w.u16(fid);
}

void put_cause_ie(ByteWriter& w, const Cause& c) {
  put_ie_header(w, ie::kCause, 2);
  w.u8(static_cast<uint8_t>(c.category));
  w.u8(c.code);
}

Status check_node(const GlobalE2NodeId& n) {
  if (n.node_id > kMaxNodeId) return oversize("node_id exceeds 20 bits");
  return ok_status();
}

Status check_function_id(uint16_t fid) {
  if (fid > kMaxRanFunctionId) return oversize("function_id exceeds 4095");
  return ok_status();
}

Status put_ran_function_ie(ByteWriter& w, const RanFunctionItem& f) {
  if (auto s = check_function_id(f.function_id); !s.ok()) return s;
  if (f.sm_name.size() > kMaxSmNameLen) return oversize("sm_name exceeds 64 bytes");
  if (f.definition.size() > kMaxSmDefinitionLen) return oversize("sm definition exceeds 4096 bytes");
  uint16_t len = static_cast<uint16_t>(2 + 2 + 1 + f.sm_name.size() + 2 + f.definition.size());
  put_ie_header(w, ie::kRanFunction, len);
  w.u16(f.function_id);
  w.u16(f.revision);
  w.u8(static_cast<uint8_t>(f.sm_name.size()));
  w.raw(f.sm_name);
  w.u16(static_cast<uint16_t>(f.definition.size()));
  w.raw(f.definition);
  return ok_status();
}

Status put_action_ie(ByteWriter& w, const RicAction& a) {
  if (a.definition.size() > kMaxSmDefinitionLen) return oversize("action definition exceeds 4096 bytes");
  uint16_t len = static_cast<uint16_t>(1 + 1 + 2 + a.definition.size());
  put_ie_header(w, ie::kAction, len);
  w.u8(a.action_id);
  w.u8(static_cast<uint8_t>(a.action_type));
  w.u16(static_cast<uint16_t>(a.definition.size()));
  w.raw(a.definition);
  return ok_status();
}

Expected<std::vector<IeItem>> parse_ies(std::span<const uint8_t> body) {
  std::vector<IeItem> out;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t left = body.size() - pos;
    if (left < 4) return Error{ErrCode::TrailingGarbage, "dangling bytes after last IE"};
    uint16_t id = static_cast<uint16_t>(body[pos] << 8 | body[pos + 1]);
    uint16_t len = static_cast<uint16_t>(body[pos + 2] << 8 | body[pos + 3]);
    pos += 4;
    if (body.size() - pos < len) return Error{ErrCode::TruncatedBuffer, "IE value truncated"};
    out.push_back(IeItem{id, body.subspan(pos, len)});
    pos += len;
  }
  return out;
}

Expected<std::span<const uint8_t>> IeView::one(uint16_t id, const char* name) const {
  std::optional<std::span<const uint8_t>> found;
  for (const auto& it : items_) {
    if (it.id != id) continue;
    if (found) return bad_ie(std::string("duplicate IE ") + name);
    found = it.value;
  }
  if (!found) return missing_ie(name);
  return *found;
}

std::vector<std::span<const uint8_t>> IeView::all(uint16_t id) const {
  std::vector<std::span<const uint8_t>> out;
  for (const auto& it : items_)
    if (it.id == id) out.push_back(it.value);
  return out;
}

Expected<GlobalE2NodeId> read_node(std::span<const uint8_t> v) {
  if (v.size() != 8) return bad_ie("node id IE must be 8 bytes");
  GlobalE2NodeId n;
  std::copy(v.begin(), v.begin() + 3, n.plmn.begin());
  if (v[3] > 2) return bad_ie("unknown node_type");
  n.node_type = static_cast<NodeType>(v[3]);
  n.node_id = static_cast<uint32_t>(v[4]) << 24 | static_cast<uint32_t>(v[5]) << 16 |
              static_cast<uint32_t>(v[6]) << 8 | v[7];
  if (n.node_id > kMaxNodeId) return bad_ie("node_id exceeds 20 bits");
  return n;
}

Expected<RicRequestId> read_request_id(std::span<const uint8_t> v) {
  if (v.size() != 4) return bad_ie("request id IE must be 4 bytes");
  RicRequestId r;
  r.requestor_id = static_cast<uint16_t>(v[0] << 8 | v[1]);
  r.instance_id = static_cast<uint16_t>(v[2] << 8 | v[3]);
  return r;
}

Expected<uint16_t> read_function_id(std::span<const uint8_t> v) {
  if (v.size() != 2) return bad_ie("function id IE must be 2 bytes");
  uint16_t fid = static_cast<uint16_t>(v[0] << 8 | v[1]);
  if (fid > kMaxRanFunctionId) return bad_ie("function_id exceeds 4095");
  return fid;
}

Expected<Cause> read_cause(std::span<const uint8_t> v) {
  if (v.size() != 2) return bad_ie("cause IE must be 2 bytes");
  if (v[0] > 4) return bad_ie("unknown cause category");
  return Cause{static_cast<CauseCategory>(v[0]), v[1]};
}

Expected<RanFunctionItem> read_ran_function(std::span<const uint8_t> v) {
  ByteReader r(v);
  RanFunctionItem f;
  uint8_t name_len = 0;
  uint16_t def_len = 0;
  if (!r.u16(f.function_id) || !r.u16(f.revision) || !r.u8(name_len))
    return bad_ie("short RAN function IE");
  if (f.function_id > kMaxRanFunctionId) return bad_ie("function_id exceeds 4095");
  if (name_len > kMaxSmNameLen) return bad_ie("sm_name exceeds 64 bytes");
  if (!r.str(name_len, f.sm_name) || !r.u16(def_len)) return bad_ie("short RAN function IE");
  if (def_len > kMaxSmDefinitionLen) return bad_ie("sm definition exceeds 4096 bytes");
  if (!r.bytes_vec(def_len, f.definition)) return bad_ie("short RAN function IE");
  if (!r.empty()) return bad_ie("excess bytes in RAN function IE");
  return f;
}

Expected<RicAction> read_action(std::span<const uint8_t> v) {
  ByteReader r(v);
  RicAction a;
  uint8_t type = 0;
  uint16_t def_len = 0;
  if (!r.u8(a.action_id) || !r.u8(type) || !r.u16(def_len)) return bad_ie("short action IE");
  if (type > 3) return bad_ie("unknown action type");
  a.action_type = static_cast<ActionType>(type);
  if (!r.bytes_vec(def_len, a.definition)) return bad_ie("short action IE");
  if (!r.empty()) return bad_ie("excess bytes in action IE");
  return a;
}

Expected<uint8_t> read_u8(std::span<const uint8_t> v, const char* name) {
  if (v.size() != 1) return bad_ie(std::string(name) + " IE must be 1 byte");
  return v[0];
}

Expected<uint64_t> read_u64(std::span<const uint8_t> v, const char* name) {
  if (v.size() != 8) return bad_ie(std::string(name) + " IE must be 8 bytes");
  uint64_t out = 0;
  for (uint8_t b : v) out = out << 8 | b;
  return out;
}

}  // namespace oran::e2ap::ies
