#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <tuple>

namespace oran::net {

// Tie-break classes for events at the same virtual millisecond: the RAN
// subframe completes first, then timer expiries, then transport deliveries.
enum class EventClass : uint8_t { SubframeStep = 0, Timer = 1, Transport = 2 };

// Virtual-clock event queue: strict (time, class, insertion-seq) order.
class EventQueue {
 public:
  using EventId = uint64_t;

  EventId schedule(uint64_t at_ms, EventClass cls, std::function<void()> fn) {
    EventId id = next_seq_++;
    events_.emplace(Key{at_ms, static_cast<uint8_t>(cls), id}, std::move(fn));
    return id;
  }

  bool cancel(EventId id) {
    for (auto it = events_.begin(); it != events_.end(); ++it) {
      if (std::get<2>(it->first) == id) {
        events_.erase(it);
        return true;
      }
    }
    return false;
  }

  // Pops and runs the earliest event, advancing the clock to its timestamp.
  bool run_next() {
    if (events_.empty()) return false;
    auto it = events_.begin();
    auto fn = std::move(it->second);
    now_ = std::get<0>(it->first);
    events_.erase(it);
    fn();
    return true;
  }

  uint64_t now() const { return now_; }
  bool empty() const { return events_.empty(); }
  size_t pending() const { return events_.size(); }
  // Timestamp of the next event; only valid when not empty.
  uint64_t next_at() const { return std::get<0>(events_.begin()->first); }

 private:
  using Key = std::tuple<uint64_t, uint8_t, EventId>;
  std::map<Key, std::function<void()>> events_;
  uint64_t now_ = 0;
  EventId next_seq_ = 1;
};

}  // namespace oran::net
