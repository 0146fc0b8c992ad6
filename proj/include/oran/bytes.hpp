#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace oran {

// Big-endian append-only writer used by all wire encoders.
class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) {
    buf_.push_back(static_cast<uint8_t>(v >> 8));
    buf_.push_back(static_cast<uint8_t>(v));
  }
  void u32(uint32_t v) {
    u16(static_cast<uint16_t>(v >> 16));
    u16(static_cast<uint16_t>(v));
  }
  void u64(uint64_t v) {
    u32(static_cast<uint32_t>(v >> 32));
    u32(static_cast<uint32_t>(v));
  }
  void raw(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void raw(const std::string& s) {
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  // Patches a previously written big-endian u16 at offset.
  void patch_u16(size_t off, uint16_t v) {
    buf_[off] = static_cast<uint8_t>(v >> 8);
    buf_[off + 1] = static_cast<uint8_t>(v);
  }
  size_t size() const { return buf_.size(); }
  std::vector<uint8_t> take() { return std::move(buf_); }
  const std::vector<uint8_t>& data() const { return buf_; }

 private:
  std::vector<uint8_t> buf_;
};

// Bounds-checked big-endian reader. All read_* return false on underrun and
// leave the cursor untouched so callers can map the failure to a typed error.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> b) : b_(b) {}

  size_t remaining() const { return b_.size() - pos_; }
  size_t pos() const { return pos_; }
  bool empty() const { return remaining() == 0; }

  bool u8(uint8_t& out) {
    if (remaining() < 1) return false;
    out = b_[pos_++];
    return true;
  }
  bool u16(uint16_t& out) {
    if (remaining() < 2) return false;
    out = static_cast<uint16_t>(static_cast<uint16_t>(b_[pos_]) << 8 | b_[pos_ + 1]);
    pos_ += 2;
    return true;
  }
  bool u32(uint32_t& out) {
    uint16_t hi = 0, lo = 0;
    if (remaining() < 4) return false;
    u16(hi);
    u16(lo);
    out = static_cast<uint32_t>(hi) << 16 | lo;
    return true;
  }
  bool u64(uint64_t& out) {
    uint32_t hi = 0, lo = 0;
    if (remaining() < 8) return false;
    u32(hi);
    u32(lo);
    out = static_cast<uint64_t>(hi) << 32 | lo;
    return true;
  }
  bool bytes(size_t n, std::span<const uint8_t>& out) {
    if (remaining() < n) return false;
    out = b_.subspan(pos_, n);
    pos_ += n;
    return true;
  }
  bool bytes_vec(size_t n, std::vector<uint8_t>& out) {
    std::span<const uint8_t> s;
    if (!bytes(n, s)) return false;
    out.assign(s.begin(), s.end());
    return true;
  }
  bool str(size_t n, std::string& out) {
    std::span<const uint8_t> s;
    if (!bytes(n, s)) return false;
    out.assign(reinterpret_cast<const char*>(s.data()), s.size());
    return true;
  }

 private:
  std::span<const uint8_t> b_;
  size_t pos_ = 0;
};

}  // namespace oran
