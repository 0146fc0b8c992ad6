#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace oran {

// Error taxonomy shared by the codecs and the config/scenario loaders.
enum class ErrCode : uint8_t {
  UnknownPduTag,
  MissingMandatoryIe,
  TruncatedBuffer,
  TrailingGarbage,
  OversizeField,
  OversizePayload,
  TruncatedFrame,   // need more bytes; not fatal for stream readers
  InvalidIeValue,   // malformed value inside a known IE (bad enum, bad length, dup IE)
  InvalidPeriod,
  MissingContainer,
  DuplicateContainerId,
  DuplicateContainerType,
  ShareSumExceeded,
  DuplicateSliceId,
  UnknownSlice,
  UnknownUe,
  InvalidWindow,
  ConfigError,
  MissingKey,
  UnknownActionType,
  TransportError,  // socket-level failure: resolve, bind, connect
};

const char* err_name(ErrCode c);

struct Error {
  ErrCode code;
  std::string detail;
};

// Minimal expected-like carrier; gcc 11 has no std::expected.
template <typename T>
class Expected {
 public:
  Expected(T v) : v_(std::move(v)) {}
  Expected(Error e) : v_(std::move(e)) {}
  Expected(ErrCode c, std::string detail = {}) : v_(Error{c, std::move(detail)}) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  T& operator*() { return std::get<T>(v_); }
  const T& operator*() const { return std::get<T>(v_); }
  T* operator->() { return &std::get<T>(v_); }
  const T* operator->() const { return &std::get<T>(v_); }

  const Error& error() const { return std::get<Error>(v_); }
  ErrCode code() const { return error().code; }

 private:
  std::variant<T, Error> v_;
};

using Status = Expected<std::monostate>;
inline Status ok_status() { return Status(std::monostate{}); }

std::string to_hex(const uint8_t* data, size_t n);

}  // namespace oran
