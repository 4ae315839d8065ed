#pragma once

#include <memory>
#include <mutex>

#include "ifgen/sim/clock.hpp"
#include "ifgen/sim/variant.hpp"

namespace ifgen::sim {

/// Owns one NF's state and serializes every internal invocation on it.
class VendorExecutor {
 public:
  VendorExecutor(std::shared_ptr<const VendorProfile> profile, std::shared_ptr<SimClock> clock);
  /// Starts from `state` instead of the class default.
  VendorExecutor(std::shared_ptr<const VendorProfile> profile, std::shared_ptr<SimClock> clock, NfState state);

  /// Invokes at the clock's current time.
  ArgMap invoke(std::string_view function, const ArgMap& args);
  /// Invokes with an explicit time reading, so a caller that already read
  /// the clock for the same call stays consistent with it.
  ArgMap invoke_at(std::string_view function, const ArgMap& args, Timestamp now);

  NfState state() const;
  std::size_t invocation_count() const;
  const VendorProfile& profile() const { return *profile_; }
  std::shared_ptr<const VendorProfile> profile_ptr() const { return profile_; }
  SimClock& clock() const { return *clock_; }

 private:
  std::shared_ptr<const VendorProfile> profile_;
  std::shared_ptr<SimClock> clock_;
  mutable std::mutex mu_;
  NfState state_;
};

}  // namespace ifgen::sim
