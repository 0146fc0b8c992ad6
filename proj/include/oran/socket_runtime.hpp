#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oran/support.hpp"
#include "oran/transport.hpp"

namespace oran::net {

// Single-threaded poll(2) runtime: the same framed streams as the in-memory
// runtime, carried over real TCP sockets.  Addresses look like
// tcp://host:port; port 0 asks the OS for a free port (listen_checked reports
// the one actually bound).  All callbacks fire on the thread that calls
// poll_once()/run(), so components need no locking here either.
class SocketRuntime : public Services {
 public:
  SocketRuntime();
  ~SocketRuntime() override;

  SocketRuntime(const SocketRuntime&) = delete;
  SocketRuntime& operator=(const SocketRuntime&) = delete;

  // Milliseconds of wall time since this runtime was constructed.
  uint64_t now_ms() const override;
  void send_frame(ConnId conn, uint8_t stream_id,
                  std::span<const uint8_t> payload) override;
  // Flushes buffered output for the connection, then closes it.  The local
  // handler is not called back; the peer observes the close.
  void close(ConnId conn) override;
  uint64_t schedule(uint64_t at_ms, std::function<void()> fn) override;
  void cancel(uint64_t timer_id) override;
  ConnId connect(const std::string& addr, Handler& handler) override;
  void listen(const std::string& addr, Handler& handler) override;
  std::string peer_desc(ConnId conn) const override;

  // Like listen(), but reports bind errors and the bound port.
  Expected<uint16_t> listen_checked(const std::string& addr, Handler& handler);

  // First error recorded by listen()/connect() since the last call; ok when
  // everything stuck so far has succeeded.
  Status take_error();

  // Waits at most timeout_ms for socket activity, then dispatches whatever is
  // ready: due timers, new connections, readable frames, drained writes.
  void poll_once(int timeout_ms);
  // Polls until stop() is called or, when until_ms is set, until now_ms()
  // passes it.
  void run(std::optional<uint64_t> until_ms = std::nullopt);
  void stop() { stopping_ = true; }

  size_t open_conns() const;

 private:
  struct Listener {
    int fd = -1;
    Handler* handler = nullptr;
    std::string addr;
  };
  struct Conn {
    int fd = -1;
    Handler* handler = nullptr;
    std::vector<uint8_t> rx;
    std::vector<uint8_t> tx;  // unsent bytes start at tx_off
    size_t tx_off = 0;
    bool connecting = false;  // nonblocking connect() still in flight
    bool closing = false;     // local close requested; flush tx, then close
    std::string peer;
  };
  struct Timer {
    uint64_t at_ms = 0;
    std::function<void()> fn;
  };

  Conn* find(ConnId id);
  const Conn* find(ConnId id) const;
  void destroy(ConnId id);
  void fail_async(ConnId id, Handler& handler);
  void handle_accept(Listener& l);
  void handle_readable(ConnId id);
  void handle_writable(ConnId id);
  void deliver_frames(ConnId id);
  void flush(ConnId id);
  void fire_due_timers();
  int next_timer_gap(int timeout_ms) const;

  std::vector<Listener> listeners_;
  std::map<ConnId, Conn> conns_;
  std::map<uint64_t, Timer> timers_;
  ConnId next_conn_ = 1;
  uint64_t next_timer_ = 1;
  uint64_t t0_ms_ = 0;
  Status error_ = ok_status();
  bool stopping_ = false;
};

}  // namespace oran::net
