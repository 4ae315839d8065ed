#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ifgen/codegen/binding.hpp"
#include "ifgen/doc/documents.hpp"
#include "ifgen/sim/executor.hpp"

namespace ifgen::codegen {

/// Outcome of one call through a binding, also used as the status of control
/// responses on the wire.
enum class CallStatus {
  ok,
  guard_rejected,
  domain_error,
  decode_error,
  adaptation_error,
  invoke_error,
  encode_error,
  not_provisioned,
  unknown_function,
};
std::string_view to_string(CallStatus s);
std::optional<CallStatus> parse_call_status(std::string_view s);

struct CallResult {
  CallStatus status = CallStatus::ok;
  ArgMap results;
  std::string message;
};

/// Checks decoded arguments against a declared signature: same names, same
/// types. Returns an empty string when they conform.
std::string signature_mismatch(const std::vector<doc::ParamSpec>& declared, const ArgMap& args);

/// Runs one pipeline over a slot map. Throws Error(domain) for values that
/// cannot be converted (non-numeric text, non-integral casts) and
/// Error(invariant) or Error(unit_mismatch) for malformed steps.
void run_steps(const std::vector<Step>& steps, ArgMap& slots, Timestamp now);

/// Interprets a binding against a vendor executor. The clock is read once
/// per call; guards and timestamps see the same reading as the internal
/// invocation.
class BindingRuntime {
 public:
  BindingRuntime(BindingSpec spec, doc::CfrDocument cfr, std::shared_ptr<sim::VendorExecutor> executor);

  CallResult call(std::string_view function, const ArgMap& args) const;
  CallResult call_at(std::string_view function, const ArgMap& args, Timestamp now) const;

  const BindingSpec& spec() const { return spec_; }
  const doc::CfrDocument& cfr() const { return cfr_; }
  sim::VendorExecutor& executor() const { return *executor_; }

 private:
  BindingSpec spec_;
  doc::CfrDocument cfr_;
  std::shared_ptr<sim::VendorExecutor> executor_;
};

}  // namespace ifgen::codegen
