#pragma once

#include <atomic>
#include <cstdint>

#include "ifgen/value.hpp"

namespace ifgen::sim {

/// Injectable time source. Manual clocks only move when told to and never
/// move backwards; real clocks read the system wall clock.
class SimClock {
 public:
  enum class Mode { real, manual };

  static SimClock manual(std::int64_t start_ms = 1'700'000'000'000) { return SimClock(Mode::manual, start_ms); }
  static SimClock real() { return SimClock(Mode::real, 0); }

  SimClock(const SimClock& other) : mode_(other.mode_), current_(other.current_.load()) {}
  SimClock& operator=(const SimClock& other) {
    mode_ = other.mode_;
    current_ = other.current_.load();
    return *this;
  }

  Mode mode() const { return mode_; }
  Timestamp now() const;

  /// Manual mode only; throws Error(precondition) if `ms` is negative.
  void advance(std::int64_t ms);
  /// Manual mode only; throws Error(precondition) when `t` is in the past.
  void set(Timestamp t);

 private:
  SimClock(Mode mode, std::int64_t start) : mode_(mode), current_(start) {}

  Mode mode_;
  std::atomic<std::int64_t> current_;
};

}  // namespace ifgen::sim
