#pragma once

#include <cstdint>
#include <queue>
#include <vector>

namespace wsnsim {

/// Min-queue on (time, tiebreaker). Tiebreakers are handed out in scheduling
/// order, so equal-time events pop first-scheduled-first.
template <typename Payload>
class EventQueue {
 public:
  struct Entry {
    double time = 0.0;
    std::uint64_t tiebreaker = 0;
    Payload payload;
  };

  std::uint64_t push(double time, Payload payload) {
    const std::uint64_t tb = next_++;
    heap_.push(Entry{time, tb, std::move(payload)});
    return tb;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Entry& top() const { return heap_.top(); }

  Entry pop() {
    Entry e = heap_.top();
    heap_.pop();
    return e;
  }

 private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.tiebreaker > b.tiebreaker;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t next_ = 0;
};

}  // namespace wsnsim
