#pragma once

// Reference path for end-to-end checks: requirement arguments converted by
// hand and handed straight to the vendor's internal function.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "ifgen/bench/corpus.hpp"
#include "ifgen/error.hpp"
#include "ifgen/sim/variant.hpp"

namespace ifgen::testing {

inline double hand_convert(double v, const std::optional<std::string>& from, const std::optional<std::string>& to) {
  if (!from || !to || *from == *to) return v;
  if (*from == "dBm" && *to == "mW") return std::pow(10.0, v / 10.0);
  if (*from == "mW" && *to == "dBm") return 10.0 * std::log10(v);
  static const std::map<std::string, double> factor = {{"Mbps", 1e6}, {"kbps", 1e3}, {"ms", 1e-3}, {"s", 1.0}};
  return v * factor.at(*from) / factor.at(*to);
}

inline std::optional<double> as_number(const Value& v) {
  if (v.type() == SemanticType::integer) return static_cast<double>(v.as_integer());
  if (v.type() == SemanticType::real) return v.as_real();
  if (v.type() == SemanticType::text) {
    char* end = nullptr;
    const auto& s = v.as_text();
    double d = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size()) return d;
  }
  return std::nullopt;
}

// nullopt: the value cannot be carried (non-numeric text, fractional integer).
inline std::optional<Value> hand_adapt(const Value& v, SemanticType from_type, const std::optional<std::string>& from_unit,
                                       SemanticType to_type, const std::optional<std::string>& to_unit) {
  bool numeric_from = from_type == SemanticType::integer || from_type == SemanticType::real ||
                      (from_type == SemanticType::text && from_unit);
  bool numeric_to = to_type == SemanticType::integer || to_type == SemanticType::real ||
                    (to_type == SemanticType::text && to_unit);
  if (!(numeric_from && numeric_to)) {
    if (from_type == to_type) return v;
    if (from_type == SemanticType::boolean && to_type == SemanticType::integer) return Value(std::int64_t{v.as_boolean()});
    if (from_type == SemanticType::integer && to_type == SemanticType::boolean) return Value(v.as_integer() != 0);
    return v;
  }
  auto n = as_number(v);
  if (!n) return std::nullopt;
  double d = hand_convert(*n, from_unit, to_unit);
  switch (to_type) {
    case SemanticType::integer: {
      double r = std::nearbyint(d);
      if (std::fabs(d - r) > 1e-6 * std::max(1.0, std::fabs(d))) return std::nullopt;
      return Value(static_cast<std::int64_t>(r));
    }
    case SemanticType::real: return Value(d);
    default: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      return Value(std::string(buf));
    }
  }
}

enum class HandOutcome { ok, guard_rejected, error };

struct HandResult {
  HandOutcome outcome = HandOutcome::ok;
  ArgMap results;
};

inline HandResult hand_call(const sim::VendorProfile& profile, sim::NfState& state, const bench::CorpusEntry& entry,
                            const ArgMap& args, Timestamp now) {
  const auto& req = entry.requirement;
  const auto* fn = profile.by_logical(entry.label);
  HandResult out;
  if (req.augmentation_hint && req.augmentation_hint->kind == "guard_on_timestamp" &&
      args.at(req.augmentation_hint->target).as_timestamp() < now) {
    out.outcome = HandOutcome::guard_rejected;
    return out;
  }
  ArgMap vendor_args;
  for (const auto& p : req.params) {
    auto m = entry.param_map.find(p.name);
    if (m == entry.param_map.end()) continue;
    for (const auto& vp : fn->params) {
      if (vp.logical != m->second) continue;
      auto v = hand_adapt(args.at(p.name), p.type, p.unit, vp.vendor_type, vp.vendor_unit);
      if (!v) {
        out.outcome = HandOutcome::error;
        return out;
      }
      vendor_args.emplace(vp.internal_name, *v);
    }
  }
  ArgMap vendor_results;
  try {
    vendor_results = sim::invoke_internal(profile, state, fn->internal_name, vendor_args, now);
  } catch (const Error&) {
    out.outcome = HandOutcome::error;
    return out;
  }
  for (const auto& r : req.returns) {
    auto m = entry.return_map.find(r.name);
    if (m == entry.return_map.end()) continue;
    for (const auto& vr : fn->returns) {
      if (vr.logical != m->second) continue;
      out.results.emplace(r.name, *hand_adapt(vendor_results.at(vr.internal_name), vr.vendor_type, vr.vendor_unit, r.type, r.unit));
    }
  }
  if (req.augmentation_hint && req.augmentation_hint->kind == "timestamp_returns") {
    out.results.emplace(req.augmentation_hint->target, Value(now));
  }
  return out;
}

// Equal up to 1e-9 relative; numeric text compares by value.
inline bool same_value(const Value& a, const Value& b) {
  if (a.type() == SemanticType::text && b.type() == SemanticType::text) {
    auto x = as_number(a), y = as_number(b);
    if (x && y) return std::fabs(*x - *y) <= 1e-9 * std::max({1.0, std::fabs(*x), std::fabs(*y)});
    return a == b;
  }
  if (a.type() == SemanticType::real && b.type() == SemanticType::real) {
    return std::fabs(a.as_real() - b.as_real()) <= 1e-9 * std::max({1e-300, std::fabs(a.as_real()), std::fabs(b.as_real())});
  }
  return a == b;
}

inline bool same_results(const ArgMap& a, const ArgMap& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it == b.end() || !same_value(v, it->second)) return false;
  }
  return true;
}

}  // namespace ifgen::testing
