#include "oran/sm_slicing.hpp"

#include "oran/bytes.hpp"

namespace oran::slicing {

namespace {
constexpr uint8_t kOpCreateSlice = 0;
constexpr uint8_t kOpBindUe = 1;
constexpr uint8_t kOpConfigureShares = 2;
}  // namespace

Status validate_shares(const std::vector<SliceShare>& shares) {
  unsigned sum = 0;
  for (size_t i = 0; i < shares.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (shares[j].slice_id == shares[i].slice_id)
        return Error{ErrCode::DuplicateSliceId,
                     "slice " + std::to_string(shares[i].slice_id) + " listed twice"};
    }
    sum += shares[i].share_percent;
  }
  if (sum > 100)
    return Error{ErrCode::ShareSumExceeded, "shares sum to " + std::to_string(sum) + "%"};
  return ok_status();
}

Expected<std::vector<uint8_t>> encode_control(const Control& c) {
  ByteWriter w;
  if (const auto* cs = std::get_if<CreateSlice>(&c)) {
    if (cs->name.size() > kMaxSliceNameLen)
      return Error{ErrCode::OversizeField, "slice name exceeds 32 bytes"};
    w.u8(kOpCreateSlice);
    w.u8(cs->slice_id);
    w.u8(static_cast<uint8_t>(cs->name.size()));
    w.raw(cs->name);
  } else if (const auto* b = std::get_if<BindUe>(&c)) {
    w.u8(kOpBindUe);
    w.u32(b->ue_id);
    w.u8(b->slice_id);
  } else {
    const auto& cfg = std::get<ConfigureShares>(c);
    if (auto s = validate_shares(cfg.shares); !s.ok()) return s.error();
    w.u8(kOpConfigureShares);
    w.u8(static_cast<uint8_t>(cfg.shares.size()));
    for (const auto& sh : cfg.shares) {
      w.u8(sh.slice_id);
      w.u8(sh.share_percent);
    }
  }
  return w.take();
}

Expected<Control> decode_control(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  uint8_t op = 0;
  if (!r.u8(op)) return Error{ErrCode::TruncatedBuffer, "missing control opcode"};
  Control out;
  switch (op) {
    case kOpCreateSlice: {
      CreateSlice cs;
      uint8_t name_len = 0;
      if (!r.u8(cs.slice_id) || !r.u8(name_len))
        return Error{ErrCode::TruncatedBuffer, "short CreateSlice"};
      if (name_len > kMaxSliceNameLen)
        return Error{ErrCode::OversizeField, "slice name exceeds 32 bytes"};
      if (!r.str(name_len, cs.name)) return Error{ErrCode::TruncatedBuffer, "short CreateSlice"};
      out = std::move(cs);
      break;
    }
    case kOpBindUe: {
      BindUe b;
      if (!r.u32(b.ue_id) || !r.u8(b.slice_id))
        return Error{ErrCode::TruncatedBuffer, "short BindUe"};
      out = b;
      break;
    }
    case kOpConfigureShares: {
      ConfigureShares cfg;
      uint8_t n = 0;
      if (!r.u8(n)) return Error{ErrCode::TruncatedBuffer, "short ConfigureShares"};
      cfg.shares.resize(n);
      for (auto& sh : cfg.shares) {
        if (!r.u8(sh.slice_id) || !r.u8(sh.share_percent))
          return Error{ErrCode::TruncatedBuffer, "short ConfigureShares"};
      }
      if (auto s = validate_shares(cfg.shares); !s.ok()) return s.error();
      out = std::move(cfg);
      break;
    }
    default:
      return Error{ErrCode::InvalidIeValue, "unknown control opcode " + std::to_string(op)};
  }
  if (!r.empty()) return Error{ErrCode::TrailingGarbage, "bytes after control payload"};
  return out;
}

Expected<std::vector<uint8_t>> encode_report(const Report& rep) {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(rep.records.size()));
  for (const auto& rec : rep.records) {
    w.u8(rec.slice_id);
    w.u32(rec.subframes_allocated);
    w.u64(rec.cum_dl_bytes);
    w.u64(rec.throughput_bps);
  }
  return w.take();
}

Expected<Report> decode_report(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  uint8_t n = 0;
  if (!r.u8(n)) return Error{ErrCode::TruncatedBuffer, "missing record count"};
  Report rep;
  rep.records.resize(n);
  for (auto& rec : rep.records) {
    if (!r.u8(rec.slice_id) || !r.u32(rec.subframes_allocated) || !r.u64(rec.cum_dl_bytes) ||
        !r.u64(rec.throughput_bps))
      return Error{ErrCode::TruncatedBuffer, "short slice record"};
  }
  if (!r.empty()) return Error{ErrCode::TrailingGarbage, "bytes after last record"};
  return rep;
}

}  // namespace oran::slicing
