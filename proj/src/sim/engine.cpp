#include "breachsim/sim/engine.hpp"

#include <string>

namespace breachsim::sim {

namespace {
constexpr int kMaxHookRoundsPerInstant = 10'000;
}

PastTime::PastTime(Minutes requested, Minutes now)
    : std::logic_error("cannot schedule at t=" + std::to_string(requested) + " before now=" + std::to_string(now)) {}

Engine::Engine(std::uint64_t seed) : rng_(seed) {}

void Engine::schedule_event(Minutes time, EventPayload payload) {
  if (time < now_) throw PastTime(time, now_);
  queue_.push(Item{time, next_order_++, std::move(payload)});
}

void Engine::schedule_at(Minutes time, Action action) {
  if (time < now_) throw PastTime(time, now_);
  queue_.push(Item{time, next_order_++, std::move(action)});
}

const Event& Engine::emit(EventPayload payload) {
  log_.push_back(Event{now_, next_seq_++, std::move(payload)});
  return log_.back();
}

std::optional<Minutes> Engine::next_time() const {
  if (queue_.empty()) return std::nullopt;
  return queue_.top().time;
}

const EventPayload* Engine::peek_event() const {
  if (queue_.empty()) return nullptr;
  return std::get_if<EventPayload>(&queue_.top().work);
}

void Engine::run_hooks() {
  // Hooks may append to the log, so hand them a copy of the index range.
  const std::size_t begin = hook_cursor_;
  const std::size_t end = log_.size();
  hook_cursor_ = end;
  if (hooks_.empty()) return;
  const EventLog delta(log_.begin() + static_cast<std::ptrdiff_t>(begin), log_.begin() + static_cast<std::ptrdiff_t>(end));
  for (auto& hook : hooks_) hook(now_, delta);
}

EventLog Engine::run_until(Minutes t) {
  if (t < now_) throw PastTime(t, now_);
  const std::size_t start = log_.size();

  while (!queue_.empty() && queue_.top().time <= t) {
    now_ = queue_.top().time;
    int rounds = 0;
    // Drain this instant, letting hooks add same-instant work until quiescent.
    while (true) {
      while (!queue_.empty() && queue_.top().time == now_) {
        Item item = queue_.top();
        queue_.pop();
        if (auto* payload = std::get_if<EventPayload>(&item.work)) {
          emit(std::move(*payload));
        } else {
          std::get<Action>(item.work)();
        }
      }
      run_hooks();
      if (queue_.empty() || queue_.top().time != now_) break;
      if (++rounds > kMaxHookRoundsPerInstant) {
        throw std::runtime_error("instant at t=" + std::to_string(now_) + " did not quiesce");
      }
    }
  }
  now_ = t;
  return EventLog(log_.begin() + static_cast<std::ptrdiff_t>(start), log_.end());
}

}  // namespace breachsim::sim
