#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "oran/support.hpp"

// KPM-style service model: the payloads carried opaquely inside E2AP
// subscriptions and indications. Wire layouts are defined in
// docs/wire-format.md; all integers are big-endian.
namespace oran::kpm {

inline constexpr uint16_t kFunctionId = 0;
inline constexpr const char* kSmName = "ORANSC-KPM";
inline constexpr uint16_t kRevision = 1;

// Periodic report trigger; fires every period_ms of simulated time.
struct EventTrigger {
  uint32_t period_ms = 0;  // must be >= 1
  bool operator==(const EventTrigger&) const = default;
};

struct IndicationHeader {
  std::array<uint8_t, 3> plmn{};
  uint32_t node_id = 0;
  uint64_t timestamp_ms = 0;
  bool operator==(const IndicationHeader&) const = default;
};

// Per-QCI cumulative byte counters for one UE session.
struct QciStat {
  uint8_t qci = 9;
  uint64_t cum_dl_bytes = 0;
  uint64_t cum_ul_bytes = 0;
  bool operator==(const QciStat&) const = default;
};

enum class ContainerType : uint8_t { O_DU = 0, O_CU_CP = 1, O_CU_UP = 2 };
const char* container_type_name(ContainerType t);

struct OduMetrics {
  uint16_t prb_used_dl = 0;   // period-average, rounded half-up
  uint16_t prb_used_ul = 0;
  uint16_t prb_available = 0;
  bool operator==(const OduMetrics&) const = default;
};

struct OcuCpMetrics {
  uint16_t active_ues = 0;
  bool operator==(const OcuCpMetrics&) const = default;
};

struct OcuUpMetrics {
  std::vector<QciStat> stats;  // one entry per UE session
  bool operator==(const OcuUpMetrics&) const = default;
};

struct Container {
  uint8_t container_id = 0;
  std::variant<OduMetrics, OcuCpMetrics, OcuUpMetrics> metrics;
  ContainerType type() const { return static_cast<ContainerType>(metrics.index()); }
  bool operator==(const Container&) const = default;
};

// Exactly three containers, one per type; container ids unique.
struct Report {
  std::vector<Container> containers;
  bool operator==(const Report&) const = default;
};

std::vector<uint8_t> encode_trigger(const EventTrigger& t);
Expected<EventTrigger> decode_trigger(std::span<const uint8_t> bytes);

std::vector<uint8_t> encode_header(const IndicationHeader& h);
Expected<IndicationHeader> decode_header(std::span<const uint8_t> bytes);

Expected<std::vector<uint8_t>> encode_report(const Report& r);
Expected<Report> decode_report(std::span<const uint8_t> bytes);

}  // namespace oran::kpm
