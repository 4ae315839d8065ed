#include "ifgen/sim/clock.hpp"

#include <chrono>

#include "ifgen/error.hpp"

namespace ifgen::sim {

Timestamp SimClock::now() const {
  if (mode_ == Mode::real) {
    auto since = std::chrono::system_clock::now().time_since_epoch();
    return Timestamp{std::chrono::duration_cast<std::chrono::milliseconds>(since).count()};
  }
  return Timestamp{current_.load()};
}

void SimClock::advance(std::int64_t ms) {
  if (mode_ != Mode::manual) throw Error(ErrorCode::precondition, "cannot advance a real clock");
  if (ms < 0) throw Error(ErrorCode::precondition, "clock cannot move backwards");
  current_ += ms;
}

void SimClock::set(Timestamp t) {
  if (mode_ != Mode::manual) throw Error(ErrorCode::precondition, "cannot set a real clock");
  auto cur = current_.load();
  while (true) {
    if (t.ms < cur) throw Error(ErrorCode::precondition, "clock cannot move backwards");
    if (current_.compare_exchange_weak(cur, t.ms)) return;
  }
}

}  // namespace ifgen::sim
