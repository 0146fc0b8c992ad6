#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oran/support.hpp"

namespace oran {

// Flat `key = value` config with `#` comments. Duplicate keys: last one wins.
// Insertion order is preserved for deterministic iteration.
class KvConfig {
 public:
  static Expected<KvConfig> parse_string(const std::string& text, const std::string& origin = "<string>");
  static Expected<KvConfig> parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& def) const;

  Expected<uint64_t> get_u64(const std::string& key) const;
  uint64_t get_u64_or(const std::string& key, uint64_t def) const;
  Expected<double> get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double def) const;
  Expected<bool> get_bool(const std::string& key) const;
  bool get_bool_or(const std::string& key, bool def) const;

  // Comma-separated list value, items trimmed, empty items dropped.
  std::vector<std::string> get_list(const std::string& key) const;

  // Keys starting with `prefix`, in insertion order.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  const std::string& origin() const { return origin_; }
  void set(const std::string& key, const std::string& value);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, size_t> index_;
  std::string origin_;
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// "001/01" <-> 3-octet BCD PLMN (TS 24.008 packing; 2-digit MNC gets 0xF filler).
Expected<std::array<uint8_t, 3>> parse_plmn(const std::string& mcc_slash_mnc);
std::string format_plmn(const std::array<uint8_t, 3>& plmn);

}  // namespace oran
