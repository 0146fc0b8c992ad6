#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oran/clock.hpp"
#include "oran/e2ap.hpp"

namespace oran::net {

using ConnId = uint64_t;

// Services a runtime offers to a protocol component.  Components never touch
// sockets or clocks directly; they ask the runtime to send, close, and wake
// them later, which keeps every component byte-for-byte replayable.
class Services {
 public:
  virtual ~Services() = default;
  virtual uint64_t now_ms() const = 0;
  virtual void send_frame(ConnId conn, uint8_t stream_id,
                          std::span<const uint8_t> payload) = 0;
  virtual void close(ConnId conn) = 0;
  // One-shot timer at an absolute virtual time; returns a cancellable id.
  virtual uint64_t schedule(uint64_t at_ms, std::function<void()> fn) = 0;
  virtual void cancel(uint64_t timer_id) = 0;
  // Opens a connection to a listening address.  Delivery of the outcome is
  // asynchronous: on_connected() on success, on_closed() if nobody listens.
  virtual ConnId connect(const std::string& addr, class Handler& handler) = 0;
  virtual void listen(const std::string& addr, class Handler& handler) = 0;
  virtual std::string peer_desc(ConnId conn) const = 0;
};

// Passive protocol component.  All I/O arrives through these callbacks.
class Handler {
 public:
  virtual ~Handler() = default;
  virtual void on_connected(ConnId) {}
  virtual void on_accept(ConnId) {}
  virtual void on_frame(ConnId, const e2ap::Frame&) {}
  virtual void on_closed(ConnId) {}
};

// In-memory runtime: every link has zero latency and infinite bandwidth, all
// components share one virtual clock, and frames arrive in send order.  Two
// runs with the same wiring produce the same event sequence.
class DetRuntime : public Services {
 public:
  void listen(const std::string& addr, Handler& handler) override;
  ConnId connect(const std::string& addr, Handler& handler) override;

  uint64_t now_ms() const override { return queue_.now(); }
  void send_frame(ConnId conn, uint8_t stream_id,
                  std::span<const uint8_t> payload) override;
  void close(ConnId conn) override;
  uint64_t schedule(uint64_t at_ms, std::function<void()> fn) override;
  void cancel(uint64_t timer_id) override;
  std::string peer_desc(ConnId conn) const override;

  EventQueue& queue() { return queue_; }
  // Runs events until the queue is empty or the next event is later than
  // `until_ms` (inclusive).
  void run_until(uint64_t until_ms);
  void run_all();

 private:
  struct Conn {
    Handler* local = nullptr;
    ConnId peer = 0;
    bool open = false;
    std::string peer_addr;
  };

  Conn* find(ConnId id);
  const Conn* find(ConnId id) const;

  std::map<std::string, Handler*> listeners_;
  std::map<ConnId, Conn> conns_;
  ConnId next_conn_ = 1;
  EventQueue queue_;
};

}  // namespace oran::net
