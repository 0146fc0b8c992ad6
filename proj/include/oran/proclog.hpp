#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "oran/e2ap.hpp"

namespace oran {

// One line per protocol procedure, identical between deterministic and
// real-time execution so runs can be diffed: logical timestamp, direction,
// PDU name, peer identity, request id.
class ProcLog {
 public:
  explicit ProcLog(bool echo_stderr = false) : echo_(echo_stderr) {}

  void log(uint64_t t_ms, const char* dir, const char* pdu, const std::string& peer,
           std::optional<e2ap::RicRequestId> req = std::nullopt) {
    std::string line = "t=" + std::to_string(t_ms) + " dir=" + dir + " pdu=" + pdu +
                       " peer=" + peer + " req=";
    if (req)
      line += std::to_string(req->requestor_id) + "/" + std::to_string(req->instance_id);
    else
      line += "-";
    if (echo_) std::fprintf(stderr, "%s\n", line.c_str());
    lines_.push_back(std::move(line));
  }

  const std::vector<std::string>& lines() const { return lines_; }
  void set_echo(bool on) { echo_ = on; }

 private:
  bool echo_;
  std::vector<std::string> lines_;
};

}  // namespace oran
