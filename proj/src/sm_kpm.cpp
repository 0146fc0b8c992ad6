#include "oran/sm_kpm.hpp"

#include <algorithm>

#include "oran/bytes.hpp"

namespace oran::kpm {

const char* container_type_name(ContainerType t) {
  switch (t) {
    case ContainerType::O_DU: return "O_DU";
    case ContainerType::O_CU_CP: return "O_CU_CP";
    case ContainerType::O_CU_UP: return "O_CU_UP";
  }
  return "?";
}

std::vector<uint8_t> encode_trigger(const EventTrigger& t) {
  ByteWriter w;
  w.u32(t.period_ms);
  return w.take();
}

Expected<EventTrigger> decode_trigger(std::span<const uint8_t> bytes) {
  if (bytes.size() != 4)
    return Error{ErrCode::TruncatedBuffer, "trigger must be exactly 4 bytes"};
  uint32_t period = static_cast<uint32_t>(bytes[0]) << 24 | static_cast<uint32_t>(bytes[1]) << 16 |
                    static_cast<uint32_t>(bytes[2]) << 8 | bytes[3];
  if (period == 0) return Error{ErrCode::InvalidPeriod, "period_ms must be >= 1"};
  return EventTrigger{period};
}

std::vector<uint8_t> encode_header(const IndicationHeader& h) {
  ByteWriter w;
  w.raw(std::span<const uint8_t>(h.plmn.data(), 3));
  w.u32(h.node_id);
  w.u64(h.timestamp_ms);
  return w.take();
}

Expected<IndicationHeader> decode_header(std::span<const uint8_t> bytes) {
  if (bytes.size() != 15)
    return Error{ErrCode::TruncatedBuffer, "indication header must be exactly 15 bytes"};
  IndicationHeader h;
  std::copy(bytes.begin(), bytes.begin() + 3, h.plmn.begin());
  ByteReader r(bytes.subspan(3));
  r.u32(h.node_id);
  r.u64(h.timestamp_ms);
  return h;
}

namespace {

// One container of each type, ids unique -- shared by encode and decode.
Status check_report_shape(const Report& r) {
  bool seen_type[3] = {false, false, false};
  for (const auto& c : r.containers) {
    size_t t = c.metrics.index();
    if (seen_type[t])
      return Error{ErrCode::DuplicateContainerType,
                   std::string("second ") + container_type_name(c.type()) + " container"};
    seen_type[t] = true;
    for (const auto& other : r.containers) {
      if (&other != &c && other.container_id == c.container_id)
        return Error{ErrCode::DuplicateContainerId,
                     "container id " + std::to_string(c.container_id) + " reused"};
    }
  }
  for (size_t t = 0; t < 3; ++t) {
    if (!seen_type[t])
      return Error{ErrCode::MissingContainer,
                   std::string("no ") + container_type_name(static_cast<ContainerType>(t)) +
                       " container"};
  }
  return ok_status();
}

}  // namespace

Expected<std::vector<uint8_t>> encode_report(const Report& r) {
  if (auto s = check_report_shape(r); !s.ok()) return s.error();
  ByteWriter w;
  w.u8(static_cast<uint8_t>(r.containers.size()));
  for (const auto& c : r.containers) {
    w.u8(static_cast<uint8_t>(c.type()));
    w.u8(c.container_id);
    std::visit(
        [&w](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, OduMetrics>) {
            w.u16(m.prb_used_dl);
            w.u16(m.prb_used_ul);
            w.u16(m.prb_available);
          } else if constexpr (std::is_same_v<T, OcuCpMetrics>) {
            w.u16(m.active_ues);
          } else {
            w.u16(static_cast<uint16_t>(m.stats.size()));
            for (const auto& s : m.stats) {
              w.u8(s.qci);
              w.u64(s.cum_dl_bytes);
              w.u64(s.cum_ul_bytes);
            }
          }
        },
        c.metrics);
  }
  return w.take();
}

Expected<Report> decode_report(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  uint8_t count = 0;
  if (!r.u8(count)) return Error{ErrCode::TruncatedBuffer, "missing container count"};
  Report rep;
  for (uint8_t i = 0; i < count; ++i) {
    uint8_t type = 0;
    Container c;
    if (!r.u8(type) || !r.u8(c.container_id))
      return Error{ErrCode::TruncatedBuffer, "short container header"};
    switch (type) {
      case 0: {
        OduMetrics m;
        if (!r.u16(m.prb_used_dl) || !r.u16(m.prb_used_ul) || !r.u16(m.prb_available))
          return Error{ErrCode::TruncatedBuffer, "short O_DU container"};
        c.metrics = m;
        break;
      }
      case 1: {
        OcuCpMetrics m;
        if (!r.u16(m.active_ues)) return Error{ErrCode::TruncatedBuffer, "short O_CU_CP container"};
        c.metrics = m;
        break;
      }
      case 2: {
        OcuUpMetrics m;
        uint16_t n = 0;
        if (!r.u16(n)) return Error{ErrCode::TruncatedBuffer, "short O_CU_UP container"};
        m.stats.resize(n);
        for (auto& s : m.stats) {
          if (!r.u8(s.qci) || !r.u64(s.cum_dl_bytes) || !r.u64(s.cum_ul_bytes))
            return Error{ErrCode::TruncatedBuffer, "short QCI stat"};
        }
        c.metrics = std::move(m);
        break;
      }
      default:
        return Error{ErrCode::MissingContainer, "unknown container type " + std::to_string(type)};
    }
    rep.containers.push_back(std::move(c));
  }
  if (!r.empty()) return Error{ErrCode::TrailingGarbage, "bytes after last container"};
  if (auto s = check_report_shape(rep); !s.ok()) return s.error();
  return rep;
}

}  // namespace oran::kpm
