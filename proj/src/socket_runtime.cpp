#include "oran/socket_runtime.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "oran/e2ap.hpp"

namespace oran::net {

namespace {

uint64_t steady_ms() {
  using namespace std::chrono;
  return static_cast<uint64_t>(
      duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count());
}

struct TcpAddr {
  std::string host;
  std::string port;
};

// Accepts tcp://host:port; the host may be a name, an IPv4 literal, or a
// bracketed IPv6 literal (tcp://[::1]:36421).
Expected<TcpAddr> parse_tcp_addr(const std::string& addr) {
  constexpr std::string_view kScheme = "tcp://";
  if (addr.rfind(kScheme, 0) != 0)
    return Error{ErrCode::ConfigError, "address must start with tcp:// : " + addr};
  std::string rest = addr.substr(kScheme.size());
  TcpAddr out;
  if (!rest.empty() && rest.front() == '[') {
    size_t close = rest.find(']');
    if (close == std::string::npos || close + 1 >= rest.size() || rest[close + 1] != ':')
      return Error{ErrCode::ConfigError, "malformed tcp address: " + addr};
    out.host = rest.substr(1, close - 1);
    out.port = rest.substr(close + 2);
  } else {
    size_t colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= rest.size())
      return Error{ErrCode::ConfigError, "tcp address needs host:port: " + addr};
    out.host = rest.substr(0, colon);
    out.port = rest.substr(colon + 1);
  }
  for (char c : out.port)
    if (c < '0' || c > '9') return Error{ErrCode::ConfigError, "bad port in address: " + addr};
  return out;
}

void set_nonblocking(int fd) {
  int flags = ::fcntl(fd, F_GETFL, 0);
  if (flags >= 0) ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

std::string describe_sockaddr(const sockaddr* sa, socklen_t len) {
  char host[NI_MAXHOST] = {0};
  char port[NI_MAXSERV] = {0};
  if (::getnameinfo(sa, len, host, sizeof host, port, sizeof port,
                    NI_NUMERICHOST | NI_NUMERICSERV) != 0)
    return "tcp://?";
  std::string h = host;
  if (h.find(':') != std::string::npos) h = "[" + h + "]";
  return "tcp://" + h + ":" + port;
}

}  // namespace

SocketRuntime::SocketRuntime() : t0_ms_(steady_ms()) {}

SocketRuntime::~SocketRuntime() {
  for (auto& l : listeners_)
    if (l.fd >= 0) ::close(l.fd);
  for (auto& [id, c] : conns_)
    if (c.fd >= 0) ::close(c.fd);
}

uint64_t SocketRuntime::now_ms() const { return steady_ms() - t0_ms_; }

SocketRuntime::Conn* SocketRuntime::find(ConnId id) {
  auto it = conns_.find(id);
  return it == conns_.end() ? nullptr : &it->second;
}

const SocketRuntime::Conn* SocketRuntime::find(ConnId id) const {
  auto it = conns_.find(id);
  return it == conns_.end() ? nullptr : &it->second;
}

void SocketRuntime::destroy(ConnId id) {
  auto it = conns_.find(id);
  if (it == conns_.end()) return;
  if (it->second.fd >= 0) ::close(it->second.fd);
  conns_.erase(it);
}

// Ends a connection and tells its owner, mirroring the in-memory runtime's
// rule that failure outcomes always arrive asynchronously.
void SocketRuntime::fail_async(ConnId id, Handler& handler) {
  schedule(now_ms(), [this, id, &handler] {
    destroy(id);
    handler.on_closed(id);
  });
}

Expected<uint16_t> SocketRuntime::listen_checked(const std::string& addr, Handler& handler) {
  auto parsed = parse_tcp_addr(addr);
  if (!parsed.ok()) return parsed.error();
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  int rc = ::getaddrinfo(parsed->host.c_str(), parsed->port.c_str(), &hints, &res);
  if (rc != 0)
    return Error{ErrCode::TransportError,
                 "cannot resolve " + addr + ": " + ::gai_strerror(rc)};
  int fd = -1;
  std::string last_err = "no usable address";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_err = std::strerror(errno);
      continue;
    }
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) break;
    last_err = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0)
    return Error{ErrCode::TransportError, "cannot listen on " + addr + ": " + last_err};
  set_nonblocking(fd);
  sockaddr_storage ss{};
  socklen_t sl = sizeof ss;
  uint16_t port = 0;
  if (::getsockname(fd, reinterpret_cast<sockaddr*>(&ss), &sl) == 0) {
    if (ss.ss_family == AF_INET)
      port = ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
    else if (ss.ss_family == AF_INET6)
      port = ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port);
  }
  listeners_.push_back({fd, &handler, addr});
  return port;
}

void SocketRuntime::listen(const std::string& addr, Handler& handler) {
  auto r = listen_checked(addr, handler);
  if (!r.ok() && error_.ok()) error_ = r.error();
}

ConnId SocketRuntime::connect(const std::string& addr, Handler& handler) {
  ConnId id = next_conn_++;
  auto parsed = parse_tcp_addr(addr);
  if (!parsed.ok()) {
    if (error_.ok()) error_ = parsed.error();
    fail_async(id, handler);
    return id;
  }
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  int rc = ::getaddrinfo(parsed->host.c_str(), parsed->port.c_str(), &hints, &res);
  if (rc != 0) {
    if (error_.ok())
      error_ = Error{ErrCode::TransportError,
                     "cannot resolve " + addr + ": " + ::gai_strerror(rc)};
    fail_async(id, handler);
    return id;
  }
  int fd = -1;
  bool in_progress = false;
  std::string last_err = "no usable address";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_err = std::strerror(errno);
      continue;
    }
    set_nonblocking(fd);
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      in_progress = false;
      break;
    }
    if (errno == EINPROGRESS) {
      in_progress = true;
      break;
    }
    last_err = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    if (error_.ok())
      error_ = Error{ErrCode::TransportError, "cannot connect to " + addr + ": " + last_err};
    fail_async(id, handler);
    return id;
  }
  set_nodelay(fd);
  Conn c;
  c.fd = fd;
  c.handler = &handler;
  c.connecting = in_progress;
  c.peer = addr;
  conns_.emplace(id, std::move(c));
  if (!in_progress)
    schedule(now_ms(), [this, id] {
      Conn* cc = find(id);
      if (cc && !cc->closing) cc->handler->on_connected(id);
    });
  return id;
}

void SocketRuntime::send_frame(ConnId conn, uint8_t stream_id,
                               std::span<const uint8_t> payload) {
  Conn* c = find(conn);
  if (!c || c->closing) return;
  auto framed = e2ap::frame_write(stream_id, payload);
  if (!framed.ok()) return;
  c->tx.insert(c->tx.end(), framed->begin(), framed->end());
  if (!c->connecting) flush(conn);
}

void SocketRuntime::flush(ConnId id) {
  Conn* c = find(id);
  if (!c || c->connecting) return;
  while (c->tx_off < c->tx.size()) {
    ssize_t n = ::send(c->fd, c->tx.data() + c->tx_off, c->tx.size() - c->tx_off,
                       MSG_NOSIGNAL);
    if (n > 0) {
      c->tx_off += static_cast<size_t>(n);
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return;
    if (n < 0 && errno == EINTR) continue;
    Handler* h = c->handler;
    bool closing = c->closing;
    destroy(id);
    if (!closing) h->on_closed(id);
    return;
  }
  c->tx.clear();
  c->tx_off = 0;
  if (c->closing) destroy(id);
}

void SocketRuntime::close(ConnId conn) {
  Conn* c = find(conn);
  if (!c || c->closing) return;
  c->closing = true;
  if (c->connecting || (c->tx_off >= c->tx.size())) {
    destroy(conn);
    return;
  }
  flush(conn);  // destroys once drained; otherwise POLLOUT finishes the job
}

uint64_t SocketRuntime::schedule(uint64_t at_ms, std::function<void()> fn) {
  uint64_t id = next_timer_++;
  timers_.emplace(id, Timer{at_ms, std::move(fn)});
  return id;
}

void SocketRuntime::cancel(uint64_t timer_id) { timers_.erase(timer_id); }

std::string SocketRuntime::peer_desc(ConnId conn) const {
  const Conn* c = find(conn);
  return c ? c->peer : "closed";
}

Status SocketRuntime::take_error() {
  Status s = error_;
  error_ = ok_status();
  return s;
}

size_t SocketRuntime::open_conns() const {
  size_t n = 0;
  for (const auto& [id, c] : conns_)
    if (!c.closing) ++n;
  return n;
}

void SocketRuntime::handle_accept(Listener& l) {
  for (;;) {
    sockaddr_storage ss{};
    socklen_t sl = sizeof ss;
    int fd = ::accept(l.fd, reinterpret_cast<sockaddr*>(&ss), &sl);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;  // EAGAIN or a transient accept error: try again next poll
    }
    set_nonblocking(fd);
    set_nodelay(fd);
    ConnId id = next_conn_++;
    Conn c;
    c.fd = fd;
    c.handler = l.handler;
    c.peer = describe_sockaddr(reinterpret_cast<sockaddr*>(&ss), sl);
    conns_.emplace(id, std::move(c));
    l.handler->on_accept(id);
  }
}

void SocketRuntime::deliver_frames(ConnId id) {
  for (;;) {
    Conn* c = find(id);
    if (!c || c->closing) return;
    auto r = e2ap::frame_read(c->rx);
    if (!r.ok()) {
      if (r.error().code == ErrCode::TruncatedFrame) return;  // wait for more
      // A stream carrying an unparseable frame length cannot resynchronize.
      Handler* h = c->handler;
      destroy(id);
      h->on_closed(id);
      return;
    }
    c->rx.erase(c->rx.begin(), c->rx.begin() + static_cast<long>(r->consumed));
    c->handler->on_frame(id, r->frame);
  }
}

void SocketRuntime::handle_readable(ConnId id) {
  bool eof = false;
  for (;;) {
    Conn* c = find(id);
    if (!c || c->closing) return;
    uint8_t buf[16384];
    ssize_t n = ::recv(c->fd, buf, sizeof buf, 0);
    if (n > 0) {
      c->rx.insert(c->rx.end(), buf, buf + n);
      if (static_cast<size_t>(n) < sizeof buf) break;
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) break;
    if (n < 0 && errno == EINTR) continue;
    eof = true;  // orderly shutdown or a hard error: either way the link is gone
    break;
  }
  deliver_frames(id);
  if (eof) {
    Conn* c = find(id);
    if (!c) return;
    Handler* h = c->handler;
    bool closing = c->closing;
    destroy(id);
    if (!closing) h->on_closed(id);
  }
}

void SocketRuntime::handle_writable(ConnId id) {
  Conn* c = find(id);
  if (!c) return;
  if (c->connecting) {
    int err = 0;
    socklen_t el = sizeof err;
    if (::getsockopt(c->fd, SOL_SOCKET, SO_ERROR, &err, &el) != 0) err = errno;
    if (err != 0) {
      Handler* h = c->handler;
      bool closing = c->closing;
      destroy(id);
      if (!closing) h->on_closed(id);
      return;
    }
    c->connecting = false;
    if (!c->closing) c->handler->on_connected(id);
    c = find(id);
    if (!c) return;
  }
  flush(id);
}

void SocketRuntime::fire_due_timers() {
  for (;;) {
    uint64_t now = now_ms();
    uint64_t best_id = 0;
    uint64_t best_at = 0;
    bool found = false;
    for (const auto& [id, t] : timers_) {
      if (t.at_ms > now) continue;
      if (!found || t.at_ms < best_at || (t.at_ms == best_at && id < best_id)) {
        best_id = id;
        best_at = t.at_ms;
        found = true;
      }
    }
    if (!found) return;
    auto it = timers_.find(best_id);
    std::function<void()> fn = std::move(it->second.fn);
    timers_.erase(it);
    fn();
  }
}

int SocketRuntime::next_timer_gap(int timeout_ms) const {
  uint64_t now = now_ms();
  int gap = timeout_ms;
  for (const auto& [id, t] : timers_) {
    uint64_t wait = t.at_ms <= now ? 0 : t.at_ms - now;
    if (wait < static_cast<uint64_t>(gap)) gap = static_cast<int>(wait);
  }
  return gap;
}

void SocketRuntime::poll_once(int timeout_ms) {
  fire_due_timers();

  std::vector<pollfd> fds;
  std::vector<ConnId> conn_ids;
  fds.reserve(listeners_.size() + conns_.size());
  for (const auto& l : listeners_) fds.push_back({l.fd, POLLIN, 0});
  for (const auto& [id, c] : conns_) {
    short events = 0;
    if (c.connecting) {
      events = POLLOUT;
    } else {
      if (!c.closing) events |= POLLIN;
      if (c.tx_off < c.tx.size()) events |= POLLOUT;
    }
    if (events == 0) continue;
    fds.push_back({c.fd, events, 0});
    conn_ids.push_back(id);
  }

  int rc = ::poll(fds.data(), fds.size(), next_timer_gap(timeout_ms));
  if (rc < 0 && errno != EINTR) return;
  if (rc > 0) {
    for (size_t i = 0; i < listeners_.size(); ++i)
      if (fds[i].revents & POLLIN) handle_accept(listeners_[i]);
    for (size_t i = 0; i < conn_ids.size(); ++i) {
      short re = fds[listeners_.size() + i].revents;
      if (re == 0) continue;
      ConnId id = conn_ids[i];
      Conn* c = find(id);
      if (!c) continue;  // closed by an earlier callback in this same pass
      if (c->connecting) {
        if (re & (POLLOUT | POLLERR | POLLHUP)) handle_writable(id);
        continue;
      }
      if (re & POLLOUT) handle_writable(id);
      if (re & (POLLIN | POLLERR | POLLHUP)) handle_readable(id);
    }
  }

  fire_due_timers();
}

void SocketRuntime::run(std::optional<uint64_t> until_ms) {
  stopping_ = false;
  while (!stopping_) {
    if (until_ms && now_ms() > *until_ms) return;
    int timeout = 50;
    if (until_ms) {
      uint64_t now = now_ms();
      uint64_t left = *until_ms >= now ? *until_ms - now + 1 : 0;
      if (left < static_cast<uint64_t>(timeout)) timeout = static_cast<int>(left);
    }
    poll_once(timeout);
  }
}

}  // namespace oran::net
