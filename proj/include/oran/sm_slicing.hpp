#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "oran/sm_kpm.hpp"
#include "oran/support.hpp"

// Slicing service model: CONTROL payloads that create slices, bind UEs, and
// set shares, plus REPORT payloads with per-slice measurements. Wire layouts
// in docs/wire-format.md; integers big-endian.
namespace oran::slicing {

inline constexpr uint16_t kFunctionId = 1;
inline constexpr const char* kSmName = "ORANSC-SLICE";
inline constexpr uint16_t kRevision = 1;
inline constexpr size_t kMaxSliceNameLen = 32;

// Periodic trigger and indication header share the KPM wire layouts.
using EventTrigger = kpm::EventTrigger;
using IndicationHeader = kpm::IndicationHeader;

struct CreateSlice {
  uint8_t slice_id = 0;
  std::string name;  // <= 32 bytes
  bool operator==(const CreateSlice&) const = default;
};

struct BindUe {
  uint32_t ue_id = 0;
  uint8_t slice_id = 0;
  bool operator==(const BindUe&) const = default;
};

struct SliceShare {
  uint8_t slice_id = 0;
  uint8_t share_percent = 0;  // [0, 100]
  bool operator==(const SliceShare&) const = default;
};

// Full allocation statement: slices not listed fall back to share 0.
struct ConfigureShares {
  std::vector<SliceShare> shares;
  bool operator==(const ConfigureShares&) const = default;
};

using Control = std::variant<CreateSlice, BindUe, ConfigureShares>;

struct SliceRecord {
  uint8_t slice_id = 0;
  uint32_t subframes_allocated = 0;  // within the report period
  uint64_t cum_dl_bytes = 0;         // since slice creation
  uint64_t throughput_bps = 0;       // downlink, averaged over the period
  bool operator==(const SliceRecord&) const = default;
};

struct Report {
  std::vector<SliceRecord> records;
  bool operator==(const Report&) const = default;
};

// Accepts exactly {unique slice ids ∧ sum of share_percent <= 100}.
Status validate_shares(const std::vector<SliceShare>& shares);

Expected<std::vector<uint8_t>> encode_control(const Control& c);
Expected<Control> decode_control(std::span<const uint8_t> bytes);

Expected<std::vector<uint8_t>> encode_report(const Report& r);
Expected<Report> decode_report(std::span<const uint8_t> bytes);

}  // namespace oran::slicing
