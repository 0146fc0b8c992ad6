#include "oran/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace oran {

const char* err_name(ErrCode c) {
  switch (c) {
    case ErrCode::UnknownPduTag: return "UnknownPduTag";
    case ErrCode::MissingMandatoryIe: return "MissingMandatoryIe";
    case ErrCode::TruncatedBuffer: return "TruncatedBuffer";
    case ErrCode::TrailingGarbage: return "TrailingGarbage";
    case ErrCode::OversizeField: return "OversizeField";
    case ErrCode::OversizePayload: return "OversizePayload";
    case ErrCode::TruncatedFrame: return "TruncatedFrame";
    case ErrCode::InvalidIeValue: return "InvalidIeValue";
    case ErrCode::InvalidPeriod: return "InvalidPeriod";
    case ErrCode::MissingContainer: return "MissingContainer";
    case ErrCode::DuplicateContainerId: return "DuplicateContainerId";
    case ErrCode::DuplicateContainerType: return "DuplicateContainerType";
    case ErrCode::ShareSumExceeded: return "ShareSumExceeded";
    case ErrCode::DuplicateSliceId: return "DuplicateSliceId";
    case ErrCode::UnknownSlice: return "UnknownSlice";
    case ErrCode::UnknownUe: return "UnknownUe";
    case ErrCode::InvalidWindow: return "InvalidWindow";
    case ErrCode::ConfigError: return "ConfigError";
    case ErrCode::MissingKey: return "MissingKey";
    case ErrCode::UnknownActionType: return "UnknownActionType";
    case ErrCode::TransportError: return "TransportError";
  }
  return "?";
}

std::string to_hex(const uint8_t* data, size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(n * 2);
  for (size_t i = 0; i < n; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xF]);
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

Expected<KvConfig> KvConfig::parse_string(const std::string& text, const std::string& origin) {
  KvConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      return Error{ErrCode::ConfigError,
                   origin + ":" + std::to_string(lineno) + ": expected `key = value`"};
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      return Error{ErrCode::ConfigError, origin + ":" + std::to_string(lineno) + ": empty key"};
    }
    cfg.set(key, value);
  }
  return cfg;
}

Expected<KvConfig> KvConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return Error{ErrCode::ConfigError, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

void KvConfig::set(const std::string& key, const std::string& value) {
  auto it = index_.find(key);
  if (it != index_.end()) {
    entries_[it->second].second = value;
  } else {
    index_[key] = entries_.size();
    entries_.emplace_back(key, value);
  }
}

bool KvConfig::has(const std::string& key) const { return index_.count(key) != 0; }

std::optional<std::string> KvConfig::get(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].second;
}

std::string KvConfig::get_or(const std::string& key, const std::string& def) const {
  auto v = get(key);
  return v ? *v : def;
}

Expected<uint64_t> KvConfig::get_u64(const std::string& key) const {
  auto v = get(key);
  if (!v) return Error{ErrCode::MissingKey, key};
  const std::string s = trim(*v);
  if (s.empty()) return Error{ErrCode::ConfigError, key + ": empty value"};
  uint64_t out = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return Error{ErrCode::ConfigError, key + ": not an unsigned integer: " + s};
    uint64_t d = static_cast<uint64_t>(c - '0');
    if (out > (UINT64_MAX - d) / 10)
      return Error{ErrCode::ConfigError, key + ": integer overflow"};
    out = out * 10 + d;
  }
  return out;
}

uint64_t KvConfig::get_u64_or(const std::string& key, uint64_t def) const {
  if (!has(key)) return def;
  auto v = get_u64(key);
  return v.ok() ? *v : def;
}

Expected<double> KvConfig::get_double(const std::string& key) const {
  auto v = get(key);
  if (!v) return Error{ErrCode::MissingKey, key};
  const std::string s = trim(*v);
  char* end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    return Error{ErrCode::ConfigError, key + ": not a number: " + s};
  return d;
}

double KvConfig::get_double_or(const std::string& key, double def) const {
  if (!has(key)) return def;
  auto v = get_double(key);
  return v.ok() ? *v : def;
}

Expected<bool> KvConfig::get_bool(const std::string& key) const {
  auto v = get(key);
  if (!v) return Error{ErrCode::MissingKey, key};
  std::string s = trim(*v);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return Error{ErrCode::ConfigError, key + ": not a boolean: " + *v};
}

bool KvConfig::get_bool_or(const std::string& key, bool def) const {
  if (!has(key)) return def;
  auto v = get_bool(key);
  return v.ok() ? *v : def;
}

std::vector<std::string> KvConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  auto v = get(key);
  if (!v) return out;
  for (auto& item : split(*v, ',')) {
    std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<std::string> KvConfig::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (auto& [k, v] : entries_) {
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  }
  return out;
}

Expected<std::array<uint8_t, 3>> parse_plmn(const std::string& mcc_slash_mnc) {
  auto parts = split(trim(mcc_slash_mnc), '/');
  if (parts.size() != 2)
    return Error{ErrCode::ConfigError, "plmn must be MCC/MNC, got: " + mcc_slash_mnc};
  const std::string mcc = trim(parts[0]);
  const std::string mnc = trim(parts[1]);
  auto all_digits = [](const std::string& s) {
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  if (mcc.size() != 3 || !all_digits(mcc))
    return Error{ErrCode::ConfigError, "MCC must be 3 digits: " + mcc};
  if ((mnc.size() != 2 && mnc.size() != 3) || !all_digits(mnc))
    return Error{ErrCode::ConfigError, "MNC must be 2 or 3 digits: " + mnc};
  auto d = [](char c) { return static_cast<uint8_t>(c - '0'); };
  std::array<uint8_t, 3> out{};
  out[0] = static_cast<uint8_t>(d(mcc[1]) << 4 | d(mcc[0]));
  uint8_t mnc3 = mnc.size() == 3 ? d(mnc[2]) : 0xF;
  out[1] = static_cast<uint8_t>(mnc3 << 4 | d(mcc[2]));
  out[2] = static_cast<uint8_t>(d(mnc[1]) << 4 | d(mnc[0]));
  return out;
}

std::string format_plmn(const std::array<uint8_t, 3>& p) {
  char mcc[4] = {static_cast<char>('0' + (p[0] & 0xF)), static_cast<char>('0' + (p[0] >> 4)),
                 static_cast<char>('0' + (p[1] & 0xF)), 0};
  std::string out(mcc);
  out.push_back('/');
  out.push_back(static_cast<char>('0' + (p[2] & 0xF)));
  out.push_back(static_cast<char>('0' + (p[2] >> 4)));
  uint8_t mnc3 = p[1] >> 4;
  if (mnc3 != 0xF) out.push_back(static_cast<char>('0' + mnc3));
  return out;
}

}  // namespace oran
