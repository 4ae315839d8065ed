#include "ifgen/sim/executor.hpp"

namespace ifgen::sim {

VendorExecutor::VendorExecutor(std::shared_ptr<const VendorProfile> profile, std::shared_ptr<SimClock> clock)
    : profile_(std::move(profile)), clock_(std::move(clock)) {
  state_ = initial_state(profile_->nf_class, clock_->now());
}

VendorExecutor::VendorExecutor(std::shared_ptr<const VendorProfile> profile, std::shared_ptr<SimClock> clock, NfState state)
    : profile_(std::move(profile)), clock_(std::move(clock)), state_(std::move(state)) {}

ArgMap VendorExecutor::invoke(std::string_view function, const ArgMap& args) {
  return invoke_at(function, args, clock_->now());
}

ArgMap VendorExecutor::invoke_at(std::string_view function, const ArgMap& args, Timestamp now) {
  std::lock_guard lock(mu_);
  return invoke_internal(*profile_, state_, function, args, now);
}

NfState VendorExecutor::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::size_t VendorExecutor::invocation_count() const {
  std::lock_guard lock(mu_);
  return state_.log.size();
}

}  // namespace ifgen::sim
