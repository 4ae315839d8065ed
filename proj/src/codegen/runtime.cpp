#include "ifgen/codegen/runtime.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "ifgen/error.hpp"
#include "ifgen/sim/units.hpp"

namespace ifgen::codegen {

namespace {

constexpr std::pair<CallStatus, std::string_view> kStatuses[] = {
    {CallStatus::ok, "ok"},
    {CallStatus::guard_rejected, "guard_rejected"},
    {CallStatus::domain_error, "domain_error"},
    {CallStatus::decode_error, "decode_error"},
    {CallStatus::adaptation_error, "adaptation_error"},
    {CallStatus::invoke_error, "invoke_error"},
    {CallStatus::encode_error, "encode_error"},
    {CallStatus::not_provisioned, "not_provisioned"},
    {CallStatus::unknown_function, "unknown_function"},
};

double parse_number(const std::string& s) {
  double v = 0;
  auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) throw Error(ErrorCode::domain, "\"" + s + "\" is not a number");
  return v;
}

std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::int64_t to_integer(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::domain, "non-finite value");
  double r = std::round(v);
  if (std::fabs(v - r) > 1e-6 * std::max(1.0, std::fabs(v))) {
    throw Error(ErrorCode::domain, format_number(v) + " is not integral");
  }
  if (std::fabs(r) > 9.0e18) throw Error(ErrorCode::domain, "value out of integer range");
  return static_cast<std::int64_t>(r);
}

double numeric(const Value& v) {
  switch (v.type()) {
    case SemanticType::integer:
    case SemanticType::real: return v.as_number();
    case SemanticType::text: return parse_number(v.as_text());
    default: throw Error(ErrorCode::invariant, "value of type " + std::string(to_string(v.type())) + " is not numeric");
  }
}

Value cast(const Value& v, SemanticType to) {
  if (v.type() == to) return v;
  switch (to) {
    case SemanticType::integer:
      if (v.type() == SemanticType::boolean) return Value(static_cast<std::int64_t>(v.as_boolean()));
      return Value(to_integer(numeric(v)));
    case SemanticType::real:
      if (v.type() == SemanticType::boolean) return Value(v.as_boolean() ? 1.0 : 0.0);
      return Value(numeric(v));
    case SemanticType::text:
      if (v.type() == SemanticType::integer) return Value(std::to_string(v.as_integer()));
      if (v.type() == SemanticType::real) return Value(format_number(v.as_real()));
      if (v.type() == SemanticType::boolean) return Value(std::string(v.as_boolean() ? "true" : "false"));
      break;
    case SemanticType::boolean:
      if (v.type() == SemanticType::integer) return Value(v.as_integer() != 0);
      if (v.type() == SemanticType::text) {
        if (v.as_text() == "true") return Value(true);
        if (v.as_text() == "false") return Value(false);
      }
      break;
    default: break;
  }
  throw Error(ErrorCode::invariant, "cannot cast " + std::string(to_string(v.type())) + " to " + std::string(to_string(to)));
}

const Value& slot(const ArgMap& slots, const std::string& name) {
  auto it = slots.find(name);
  if (it == slots.end()) throw Error(ErrorCode::invariant, "slot " + name + " is undefined");
  return it->second;
}

ArgMap collect(const ArgMap& slots, std::string_view prefix) {
  ArgMap out;
  for (const auto& [k, v] : slots) {
    if (k.rfind(prefix, 0) == 0) out[k.substr(prefix.size())] = v;
  }
  return out;
}

}  // namespace

std::string_view to_string(CallStatus s) {
  for (auto [k, name] : kStatuses) {
    if (k == s) return name;
  }
  return "invoke_error";
}

std::optional<CallStatus> parse_call_status(std::string_view s) {
  for (auto [k, name] : kStatuses) {
    if (name == s) return k;
  }
  return std::nullopt;
}

std::string signature_mismatch(const std::vector<doc::ParamSpec>& declared, const ArgMap& args) {
  if (args.size() != declared.size()) {
    return "expected " + std::to_string(declared.size()) + " arguments, got " + std::to_string(args.size());
  }
  for (const auto& p : declared) {
    auto it = args.find(p.name);
    if (it == args.end()) return "missing argument " + p.name;
    if (it->second.type() != p.type) {
      return p.name + " must be " + std::string(to_string(p.type)) + ", got " + std::string(to_string(it->second.type()));
    }
  }
  return {};
}

void run_steps(const std::vector<Step>& steps, ArgMap& slots, Timestamp now) {
  for (const auto& s : steps) {
    switch (s.op) {
      case OpKind::rename:
      case OpKind::append_field: slots[s.out] = slot(slots, s.in.at(0)); break;
      case OpKind::unit_convert:
        slots[s.out] = Value(sim::convert_unit(numeric(slot(slots, s.in.at(0))), s.from.value_or(""), s.to.value_or("")));
        break;
      case OpKind::type_cast: {
        auto t = parse_semantic_type(s.to.value_or(""));
        if (!t) throw Error(ErrorCode::invariant, "unknown cast target " + s.to.value_or(""));
        slots[s.out] = cast(slot(slots, s.in.at(0)), *t);
        break;
      }
      case OpKind::clock_read: slots[s.out] = Value(now); break;
      case OpKind::compare_timestamps: {
        const auto& a = slot(slots, s.in.at(0));
        const auto& b = slot(slots, s.in.at(1));
        if (a.type() != SemanticType::timestamp || b.type() != SemanticType::timestamp) {
          throw Error(ErrorCode::invariant, "compare_timestamps needs timestamps");
        }
        slots[s.out] = Value(a.as_timestamp() >= b.as_timestamp());
        break;
      }
      case OpKind::constant:
        if (!s.value) throw Error(ErrorCode::invariant, "constant without a value");
        slots[s.out] = *s.value;
        break;
    }
  }
}

BindingRuntime::BindingRuntime(BindingSpec spec, doc::CfrDocument cfr, std::shared_ptr<sim::VendorExecutor> executor)
    : spec_(std::move(spec)), cfr_(std::move(cfr)), executor_(std::move(executor)) {
  if (!executor_) throw Error(ErrorCode::precondition, "binding runtime needs an executor");
}

CallResult BindingRuntime::call(std::string_view function, const ArgMap& args) const {
  return call_at(function, args, executor_->clock().now());
}

CallResult BindingRuntime::call_at(std::string_view function, const ArgMap& args, Timestamp now) const {
  const auto* entry = cfr_.find(function);
  const auto* binding = spec_.find(function);
  if (!entry || !binding) return {CallStatus::unknown_function, {}, "no binding for " + std::string(function)};
  if (auto why = signature_mismatch(entry->requirement.params, args); !why.empty()) {
    return {CallStatus::decode_error, {}, why};
  }
  ArgMap slots;
  for (const auto& [k, v] : args) slots["in." + k] = v;
  const auto& aug = binding->augmentation;
  try {
    if (aug.kind == AugmentationKind::aoi_guard) {
      run_steps(aug.steps, slots, now);
      const auto& g = slot(slots, std::string(kGuardSlot));
      if (g.type() != SemanticType::boolean) throw Error(ErrorCode::invariant, "guard is not boolean");
      if (!g.as_boolean()) return {CallStatus::guard_rejected, {}, "deadline has passed"};
    }
    run_steps(binding->param_pipeline, slots, now);
  } catch (const Error& e) {
    // A value the pipeline cannot represent is the caller's domain problem;
    // anything else is a broken binding.
    return {e.code() == ErrorCode::domain ? CallStatus::domain_error : CallStatus::adaptation_error, {}, e.what()};
  }
  ArgMap returned;
  try {
    returned = executor_->invoke_at(binding->target, collect(slots, "arg."), now);
  } catch (const Error& e) {
    return {e.code() == ErrorCode::domain ? CallStatus::domain_error : CallStatus::invoke_error, {}, e.what()};
  }
  for (const auto& [k, v] : returned) slots["ret." + k] = v;
  try {
    run_steps(binding->return_pipeline, slots, now);
    if (aug.kind == AugmentationKind::telemetry_timestamp) run_steps(aug.steps, slots, now);
  } catch (const Error& e) {
    return {CallStatus::adaptation_error, {}, e.what()};
  }
  auto out = collect(slots, "out.");
  if (auto why = signature_mismatch(entry->requirement.returns, out); !why.empty()) {
    return {CallStatus::encode_error, {}, why};
  }
  return {CallStatus::ok, std::move(out), {}};
}

}  // namespace ifgen::codegen
