#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oran/bytes.hpp"
#include "oran/e2ap.hpp"
#include "oran/support.hpp"

namespace oran::rnib {

enum class NodeStatus : uint8_t { Connected = 0, Disconnected = 1 };

const char* node_status_name(NodeStatus s);

// One row of the RAN network information base: everything the RIC knows
// about an E2 node, persisted in the SDL under namespace "rnib" with the
// node key ("<mcc>/<mnc>/<type>/<id>") as the entry key.
struct RnibEntry {
  e2ap::GlobalE2NodeId node;
  std::string transport_addr;
  NodeStatus status = NodeStatus::Connected;
  std::vector<e2ap::RanFunctionItem> functions;
  uint64_t connected_at_ms = 0;

  bool operator==(const RnibEntry&) const = default;
};

// Compact binary form used both for SDL values and for R-NIB query results
// on the xApp link.
std::vector<uint8_t> encode_rnib_entry(const RnibEntry& entry);
Expected<RnibEntry> decode_rnib_entry(std::span<const uint8_t> buf);

void write_rnib_entry(ByteWriter& w, const RnibEntry& entry);
Expected<RnibEntry> read_rnib_entry(ByteReader& r);

}  // namespace oran::rnib
