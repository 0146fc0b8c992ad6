#include "oran/transport.hpp"

namespace oran::net {

DetRuntime::Conn* DetRuntime::find(ConnId id) {
  auto it = conns_.find(id);
  return it == conns_.end() ? nullptr : &it->second;
}

const DetRuntime::Conn* DetRuntime::find(ConnId id) const {
  auto it = conns_.find(id);
  return it == conns_.end() ? nullptr : &it->second;
}

void DetRuntime::listen(const std::string& addr, Handler& handler) {
  listeners_[addr] = &handler;
}

ConnId DetRuntime::connect(const std::string& addr, Handler& handler) {
  ConnId client_id = next_conn_++;
  auto lit = listeners_.find(addr);
  if (lit == listeners_.end()) {
    // Connection refused: the client learns asynchronously, like a failed
    // TCP handshake.
    conns_[client_id] = Conn{&handler, 0, false, addr};
    queue_.schedule(queue_.now(), EventClass::Transport, [this, client_id] {
      if (Conn* c = find(client_id)) {
        Handler* h = c->local;
        conns_.erase(client_id);
        h->on_closed(client_id);
      }
    });
    return client_id;
  }
  ConnId server_id = next_conn_++;
  Handler* server = lit->second;
  conns_[client_id] = Conn{&handler, server_id, true, addr};
  conns_[server_id] = Conn{server, client_id, true, addr};
  queue_.schedule(queue_.now(), EventClass::Transport, [this, client_id, server_id, server] {
    server->on_accept(server_id);
    if (Conn* c = find(client_id); c && c->open) c->local->on_connected(client_id);
  });
  return client_id;
}

void DetRuntime::send_frame(ConnId conn, uint8_t stream_id,
                            std::span<const uint8_t> payload) {
  Conn* c = find(conn);
  if (!c || !c->open) return;
  e2ap::Frame frame{stream_id, std::vector<uint8_t>(payload.begin(), payload.end())};
  ConnId peer = c->peer;
  queue_.schedule(queue_.now(), EventClass::Transport,
                  [this, peer, frame = std::move(frame)] {
                    if (Conn* p = find(peer); p && p->open)
                      p->local->on_frame(peer, frame);
                  });
}

void DetRuntime::close(ConnId conn) {
  Conn* c = find(conn);
  if (!c || !c->open) return;
  c->open = false;
  ConnId peer = c->peer;
  conns_.erase(conn);
  queue_.schedule(queue_.now(), EventClass::Transport, [this, peer] {
    if (Conn* p = find(peer); p && p->open) {
      Handler* h = p->local;
      conns_.erase(peer);
      h->on_closed(peer);
    }
  });
}

uint64_t DetRuntime::schedule(uint64_t at_ms, std::function<void()> fn) {
  return queue_.schedule(at_ms, EventClass::Timer, std::move(fn));
}

void DetRuntime::cancel(uint64_t timer_id) { queue_.cancel(timer_id); }

std::string DetRuntime::peer_desc(ConnId conn) const {
  const Conn* c = find(conn);
  return c ? c->peer_addr : "?";
}

void DetRuntime::run_until(uint64_t until_ms) {
  while (!queue_.empty() && queue_.next_at() <= until_ms) queue_.run_next();
}

void DetRuntime::run_all() {
  while (queue_.run_next()) {
  }
}

}  // namespace oran::net
