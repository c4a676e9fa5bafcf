#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "breachsim/sim/event.hpp"
#include "breachsim/sim/rng.hpp"

namespace breachsim::sim {

class PastTime : public std::logic_error {
 public:
  PastTime(Minutes requested, Minutes now);
};

/// Single-threaded discrete-event loop.
///
/// The queue holds two kinds of items, ordered together by (time, insertion):
/// scheduled events, which are committed to the log verbatim when reached, and
/// actions, which run model code that may emit further events at the current
/// time. Logged events get a fresh, strictly increasing seq at commit.
///
/// After the last queued item of a time instant is processed, instant hooks
/// run with the events committed since the previous hook call (detectors,
/// phase tracking). Hooks may emit events or schedule more work at `now`.
class Engine {
 public:
  using Action = std::function<void()>;
  using InstantHook = std::function<void(Minutes now, std::span<const Event> delta)>;

  explicit Engine(std::uint64_t seed);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Minutes now() const noexcept { return now_; }
  Rng& rng() noexcept { return rng_; }

  /// Queues `payload` for commit at `time`. Throws PastTime if time < now.
  void schedule_event(Minutes time, EventPayload payload);
  void schedule_event(Event e) { schedule_event(e.time, std::move(e.payload)); }

  /// Queues model code to run at `time`. Throws PastTime if time < now.
  void schedule_at(Minutes time, Action action);

  /// Commits an event at the current time.
  const Event& emit(EventPayload payload);

  void add_instant_hook(InstantHook hook) { hooks_.push_back(std::move(hook)); }

  /// Processes everything with time <= t, then sets the clock to t.
  /// Returns the events committed by this call.
  EventLog run_until(Minutes t);

  const EventLog& log() const noexcept { return log_; }

  bool idle() const noexcept { return queue_.empty(); }
  std::optional<Minutes> next_time() const;
  /// The event at the head of the queue, if the head is a scheduled event.
  const EventPayload* peek_event() const;

 private:
  struct Item {
    Minutes time;
    std::uint64_t order;
    std::variant<EventPayload, Action> work;
  };
  struct Later {
    bool operator()(const Item& a, const Item& b) const {
      return a.time != b.time ? a.time > b.time : a.order > b.order;
    }
  };

  void run_hooks();

  Minutes now_ = 0;
  std::uint64_t next_order_ = 0;
  std::uint64_t next_seq_ = 0;
  std::size_t hook_cursor_ = 0;
  std::priority_queue<Item, std::vector<Item>, Later> queue_;
  EventLog log_;
  Rng rng_;
  std::vector<InstantHook> hooks_;
};

}  // namespace breachsim::sim
