#include "ifgen/codegen/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "ifgen/codegen/generator.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/hash.hpp"
#include "ifgen/sim/catalog.hpp"
#include "ifgen/sim/units.hpp"

namespace ifgen::codegen {

namespace {

Value nominal(const doc::ParamSpec& p, Timestamp now) {
  switch (p.type) {
    case SemanticType::text: return p.unit ? Value("7") : Value("t0");
    case SemanticType::integer: return Value(std::int64_t{7});
    case SemanticType::real: return Value(7.0);
    case SemanticType::boolean: return Value(true);
    case SemanticType::timestamp: return Value(Timestamp{now.ms + 60'000});
    case SemanticType::text_list: return Value(TextList{"t0"});
  }
  return Value();
}

Value boundary(const doc::ParamSpec& p, Timestamp now) {
  switch (p.type) {
    case SemanticType::text: return p.unit ? Value("0") : Value("t1");
    case SemanticType::integer: return Value(std::int64_t{0});
    case SemanticType::real: return Value(0.0);
    case SemanticType::boolean: return Value(false);
    case SemanticType::timestamp: return Value(now);
    case SemanticType::text_list: return Value(TextList{});
  }
  return Value();
}

Value random_value(const doc::ParamSpec& p, Timestamp now, std::uint64_t h) {
  switch (p.type) {
    case SemanticType::text: return p.unit ? Value(std::to_string(1 + h % 100)) : Value(h % 2 ? "t1" : "t0");
    case SemanticType::integer: return Value(static_cast<std::int64_t>(1 + h % 100));
    case SemanticType::real: return Value(static_cast<double>(1 + h % 100) / 4.0);
    case SemanticType::boolean: return Value(h % 2 == 0);
    case SemanticType::timestamp: return Value(Timestamp{now.ms - 1 - static_cast<std::int64_t>(h % 10'000)});
    case SemanticType::text_list: return Value(TextList{"t0", "t1"});
  }
  return Value();
}

// Oracle-side conversions, kept apart from the binding runtime's.
double oracle_number(const Value& v) {
  if (v.type() == SemanticType::integer || v.type() == SemanticType::real) return v.as_number();
  if (v.type() == SemanticType::text) {
    const auto& s = v.as_text();
    char* end = nullptr;
    double d = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw Error(ErrorCode::domain, "not a number: " + s);
    return d;
  }
  throw Error(ErrorCode::domain, "not numeric");
}

Value oracle_convert(const Value& v, const doc::ParamSpec& from, const doc::ParamSpec& to) {
  bool numeric_to = to.type == SemanticType::integer || to.type == SemanticType::real;
  bool numeric_from = from.type == SemanticType::integer || from.type == SemanticType::real ||
                      (from.type == SemanticType::text && from.unit);
  if (!numeric_to && !(to.type == SemanticType::text && to.unit)) {
    if (v.type() != to.type) throw Error(ErrorCode::domain, "type " + std::string(to_string(v.type())) + " for " + to.name);
    return v;
  }
  if (!numeric_from) throw Error(ErrorCode::domain, "non-numeric value for " + to.name);
  double x = oracle_number(v);
  if (from.unit && to.unit && *from.unit != *to.unit) {
    auto fi = sim::unit_info(*from.unit);
    auto ti = sim::unit_info(*to.unit);
    if (!fi || !ti || fi->dimension != ti->dimension) throw Error(ErrorCode::unit_mismatch, *from.unit + " to " + *to.unit);
    double base = fi->logarithmic ? std::pow(10.0, x / 10.0) : x * fi->to_base;
    x = ti->logarithmic ? 10.0 * std::log10(base) : base / ti->to_base;
  }
  if (to.type == SemanticType::real) return Value(x);
  if (to.type == SemanticType::text) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return Value(std::string(buf));
  }
  if (!std::isfinite(x)) throw Error(ErrorCode::domain, "non-finite value for " + to.name);
  double r = std::nearbyint(x);
  if (std::fabs(x - r) > 1e-6 * std::max(1.0, std::fabs(x))) throw Error(ErrorCode::domain, to.name + " is not integral");
  return Value(static_cast<std::int64_t>(r));
}

const doc::ParamSpec* find_param(const std::vector<doc::ParamSpec>& ps, std::string_view name) {
  for (const auto& p : ps) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

VectorOutcome classify(CallStatus s) {
  switch (s) {
    case CallStatus::decode_error: return VectorOutcome::decode_error;
    case CallStatus::adaptation_error: return VectorOutcome::adaptation_error;
    case CallStatus::encode_error: return VectorOutcome::encode_error;
    case CallStatus::invoke_error:
    case CallStatus::domain_error:
    case CallStatus::unknown_function:
    case CallStatus::not_provisioned: return VectorOutcome::invoke_error;
    default: return VectorOutcome::wrong_result;
  }
}

std::string render_args(const ArgMap& args) {
  std::string out;
  for (const auto& [k, v] : args) {
    if (!out.empty()) out += ", ";
    out += k + "=" + to_display(v);
  }
  return "{" + out + "}";
}

}  // namespace

std::vector<TestVector> make_test_vectors(const doc::ControlFunctionRequirement& req, Timestamp now, std::uint64_t seed) {
  std::vector<TestVector> out;
  auto add = [&](std::string name, ArgMap args) {
    bool dup = std::any_of(out.begin(), out.end(), [&](const TestVector& v) { return v.args == args; });
    if (!dup) out.push_back({std::move(name), std::move(args)});
  };
  ArgMap n, b, r;
  std::uint64_t h = gen::mix(gen::fnv1a64(req.name), seed);
  for (const auto& p : req.params) {
    n[p.name] = nominal(p, now);
    b[p.name] = boundary(p, now);
    h = gen::splitmix64(h ^ gen::fnv1a64(p.name));
    r[p.name] = random_value(p, now, h);
  }
  add("nominal", std::move(n));
  add("boundary", std::move(b));
  add("random", std::move(r));
  return out;
}

CallResult oracle_call(sim::NfState& state, const doc::CfrEntry& entry, const ReferenceMapping& ref, const ArgMap& args,
                       Timestamp now) {
  const auto& req = entry.requirement;
  const auto* logical = sim::find_logical(state.nf_class, ref.label);
  if (!logical) return {CallStatus::unknown_function, {}, "no logical function " + ref.label};
  const auto& base = logical->capability;
  bool augmented = entry.match_kind == doc::MatchKind::augmented && req.augmentation_hint;
  if (augmented && req.augmentation_hint->kind == "guard_on_timestamp") {
    auto it = args.find(req.augmentation_hint->target);
    if (it == args.end() || it->second.type() != SemanticType::timestamp) return {CallStatus::decode_error, {}, "no deadline"};
    if (it->second.as_timestamp() < now) return {CallStatus::guard_rejected, {}, "deadline has passed"};
  }
  ArgMap logical_args;
  try {
    for (const auto& [from, to] : ref.param_map) {
      const auto* rp = find_param(req.params, from);
      const auto* bp = find_param(base.params, to);
      auto it = args.find(from);
      if (!rp || !bp || it == args.end()) return {CallStatus::decode_error, {}, "unmapped parameter " + from};
      logical_args[to] = oracle_convert(it->second, *rp, *bp);
    }
  } catch (const Error& e) {
    return {CallStatus::domain_error, {}, e.what()};
  }
  ArgMap results;
  try {
    results = sim::invoke_logical(state, ref.label, logical_args, now);
  } catch (const Error& e) {
    return {e.code() == ErrorCode::domain ? CallStatus::domain_error : CallStatus::invoke_error, {}, e.what()};
  }
  ArgMap out;
  try {
    for (const auto& [from, to] : ref.return_map) {
      const auto* rp = find_param(req.returns, from);
      const auto* bp = find_param(base.returns, to);
      if (!rp || !bp || !results.count(to)) return {CallStatus::encode_error, {}, "unmapped return " + from};
      out[from] = oracle_convert(results.at(to), *bp, *rp);
    }
  } catch (const Error& e) {
    return {CallStatus::encode_error, {}, e.what()};
  }
  if (augmented && req.augmentation_hint->kind == "timestamp_returns") out[req.augmentation_hint->target] = Value(now);
  return {CallStatus::ok, std::move(out), {}};
}

std::string_view to_string(VectorOutcome o) {
  switch (o) {
    case VectorOutcome::pass: return "pass";
    case VectorOutcome::decode_error: return "decode_error";
    case VectorOutcome::adaptation_error: return "adaptation_error";
    case VectorOutcome::invoke_error: return "invoke_error";
    case VectorOutcome::encode_error: return "encode_error";
    case VectorOutcome::wrong_result: return "wrong_result";
  }
  return "wrong_result";
}

bool ValidationReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const VectorResult& r) { return r.outcome == VectorOutcome::pass; });
}

std::vector<std::string> ValidationReport::failing() const {
  std::vector<std::string> out;
  for (const auto& r : results) {
    if (r.outcome != VectorOutcome::pass && std::find(out.begin(), out.end(), r.function) == out.end()) {
      out.push_back(r.function);
    }
  }
  return out;
}

std::string ValidationReport::render() const {
  std::string out;
  for (const auto& r : results) {
    if (r.outcome == VectorOutcome::pass) continue;
    out += r.function + " [" + r.vector + "] " + std::string(to_string(r.outcome));
    if (!r.detail.empty()) out += ": " + r.detail;
    out += "\n";
  }
  return out.empty() ? "all vectors pass\n" : out;
}

ReferenceMapping derive_reference(const doc::CfrEntry& entry, const sim::VendorProfile& profile) {
  const auto* rewrite = profile.by_capability(entry.matched_capability_name);
  const auto* cap = profile.capability_doc.find(entry.matched_capability_name);
  if (!rewrite || !cap) {
    throw Error(ErrorCode::precondition, entry.matched_capability_name + " is not a capability of " + profile.vendor);
  }
  const auto& syn = match::SynonymTable::standard();
  const auto& req = entry.requirement;
  ReferenceMapping ref;
  ref.label = rewrite->logical;
  auto logical_of = [](const std::vector<sim::ParamRewrite>& rw, const std::string& cap_name) -> std::string {
    for (const auto& p : rw) {
      if (p.capability_name == cap_name) return p.logical;
    }
    return cap_name;
  };
  auto params = align_params(req.params, cap->params, syn);
  for (std::size_t j = 0; j < params.size(); ++j) {
    if (params[j]) ref.param_map[req.params[*params[j]].name] = logical_of(rewrite->params, cap->params[j].name);
  }
  auto returns = align_params(cap->returns, req.returns, syn);
  for (std::size_t i = 0; i < returns.size(); ++i) {
    if (returns[i]) ref.return_map[req.returns[i].name] = logical_of(rewrite->returns, cap->returns[*returns[i]].name);
  }
  return ref;
}

ReferenceMap complete_references(const doc::CfrDocument& cfr, const sim::VendorProfile& profile, const ReferenceMap& refs) {
  ReferenceMap out = refs;
  for (const auto& e : cfr.entries) {
    if (!out.count(e.requirement.name)) out.emplace(e.requirement.name, derive_reference(e, profile));
  }
  return out;
}

ValidationReport validate_binding(const BindingSpec& spec, const doc::CfrDocument& cfr, const sim::VendorProfile& profile,
                                  const ReferenceMap& refs, const ValidationOptions& options) {
  ValidationReport report;
  std::map<std::string, std::string> static_issues;
  for (const auto& issue : check_binding(spec, cfr, profile.api)) {
    auto& s = static_issues[issue.function];
    if (!s.empty()) s += "; ";
    s += issue.message;
  }
  if (auto it = static_issues.find(""); it != static_issues.end()) {
    for (const auto& e : cfr.entries) report.results.push_back({e.requirement.name, "static", VectorOutcome::adaptation_error, it->second});
    return report;
  }
  auto profile_ptr = std::make_shared<const sim::VendorProfile>(profile);
  Timestamp now{options.clock_start_ms};
  Timestamp boot{options.clock_start_ms - 3'600'000};
  for (const auto& entry : cfr.entries) {
    const auto& name = entry.requirement.name;
    if (auto it = static_issues.find(name); it != static_issues.end()) {
      report.results.push_back({name, "static", VectorOutcome::adaptation_error, it->second});
      continue;
    }
    auto ref = refs.find(name);
    if (ref == refs.end()) throw Error(ErrorCode::precondition, "no reference mapping for " + name);
    for (const auto& vec : make_test_vectors(entry.requirement, now, options.vector_seed)) {
      auto initial = sim::initial_state(profile.nf_class, boot);
      auto clock = std::make_shared<sim::SimClock>(sim::SimClock::manual(now.ms));
      auto executor = std::make_shared<sim::VendorExecutor>(profile_ptr, clock, initial);
      BindingRuntime runtime(spec, cfr, executor);
      auto got = runtime.call_at(name, vec.args, now);
      auto oracle_state = initial;
      auto want = oracle_call(oracle_state, entry, ref->second, vec.args, now);

      VectorResult r{name, vec.name, VectorOutcome::pass, {}};
      auto where = " for " + render_args(vec.args);
      bool got_err = got.status != CallStatus::ok;
      bool want_err = want.status != CallStatus::ok;
      if (got_err || want_err) {
        bool same_class = got_err && want_err &&
                          (got.status == want.status ||
                           (got.status == CallStatus::domain_error || got.status == CallStatus::invoke_error) ==
                               (want.status == CallStatus::domain_error || want.status == CallStatus::invoke_error));
        if (!same_class) {
          r.outcome = got_err ? classify(got.status) : VectorOutcome::wrong_result;
          r.detail = "binding " + std::string(to_string(got.status)) + (got.message.empty() ? "" : " (" + got.message + ")") +
                     ", reference " + std::string(to_string(want.status)) + where;
        }
      } else {
        bool same = got.results.size() == want.results.size();
        for (const auto& [k, v] : want.results) {
          auto it = got.results.find(k);
          if (it == got.results.end() || !sim::approx_equal(it->second, v, 1e-9)) {
            same = false;
            r.detail = k + ": got " + (it == got.results.end() ? "nothing" : to_display(it->second)) + ", want " +
                       to_display(v) + where;
            break;
          }
        }
        std::string diff;
        if (same && !sim::equivalent(executor->state(), oracle_state, 1e-9, &diff)) {
          same = false;
          r.detail = "state differs at " + diff + where;
        }
        if (!same) r.outcome = VectorOutcome::wrong_result;
      }
      report.results.push_back(std::move(r));
    }
  }
  return report;
}

RepairResult repair_loop(const doc::CfrDocument& cfr, const sim::VendorProfile& profile, const ReferenceMap& refs,
                         gen::Backend& backend, const RepairOptions& options) {
  if (options.max_attempts < 1) throw Error(ErrorCode::precondition, "max_attempts must be at least 1");
  RepairResult result;
  auto started = std::chrono::steady_clock::now();
  std::chrono::milliseconds synthetic{0};
  std::optional<BindingSpec> current;
  ValidationReport last;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    result.attempts = attempt;
    std::optional<RepairInput> repair;
    if (current) repair = RepairInput{*current, last.failing(), last.render(), attempt};
    try {
      auto call = generate_binding(cfr, profile.api, profile.capability_doc, backend, repair ? &*repair : nullptr);
      result.usage += call.usage;
      synthetic += call.latency;
      result.faults_injected += call.fault_injected ? 1 : 0;
      current = std::move(call.spec);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::malformed_response && e.code() != ErrorCode::token_limit) throw;
      ValidationReport bad;
      for (const auto& en : cfr.entries) bad.results.push_back({en.requirement.name, "reply", VectorOutcome::decode_error, e.what()});
      result.reports.push_back(bad);
      if (!current) last = bad;
      continue;
    }
    last = validate_binding(*current, cfr, profile, refs, options.validation);
    result.reports.push_back(last);
    if (last.passed()) {
      result.converged = true;
      break;
    }
  }
  if (current) result.binding = *current;
  result.wall_time = backend.deterministic()
                         ? synthetic
                         : std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  return result;
}

}  // namespace ifgen::codegen
