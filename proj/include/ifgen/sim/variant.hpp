#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ifgen/doc/documents.hpp"
#include "ifgen/sim/catalog.hpp"
#include "ifgen/sim/state.hpp"

namespace ifgen::sim {

enum class Casing { snake, camel, pascal, compact };

/// How a vendor spells identifiers. `verb_variant` picks an entry of the
/// verb synonym table (0 keeps the base verb).
struct NameStyle {
  Casing casing = Casing::snake;
  int verb_variant = 0;
  bool abbreviate = false;
  bool expand = false;  // spell out base abbreviations (tx -> transmit)
  std::string prefix;
  bool unit_suffix = false;  // power -> power_mw when a unit is attached

  bool operator==(const NameStyle&) const = default;
};

/// Unit and type rewrites applied to every parameter of a variant.
struct UnitPolicy {
  std::string power = "dBm";
  std::string rate = "Mbps";
  std::string time = "ms";
  bool widen_integers = false;

  bool operator==(const UnitPolicy&) const = default;
};

struct VariantRules {
  NameStyle internal;
  NameStyle capability;
  UnitPolicy units;
  int description_variant = 0;

  bool operator==(const VariantRules&) const = default;
};

/// Rules for a seed. Seed 0 is the identity; seeds 1-5 are authored; larger
/// seeds are mixed deterministically from the same tables.
VariantRules rules_for_seed(std::uint64_t seed);

std::string apply_style(const std::vector<std::string>& tokens, const NameStyle& style, bool is_function,
                        const std::optional<std::string>& unit = std::nullopt);

struct ParamRewrite {
  std::string logical;
  std::string internal_name;
  std::string capability_name;
  SemanticType base_type = SemanticType::text;
  SemanticType vendor_type = SemanticType::text;
  std::optional<std::string> base_unit;
  std::optional<std::string> vendor_unit;

  bool operator==(const ParamRewrite&) const = default;
};

struct FunctionRewrite {
  std::string logical;
  std::string internal_name;
  std::string capability_name;
  std::vector<ParamRewrite> params;
  std::vector<ParamRewrite> returns;

  bool operator==(const FunctionRewrite&) const = default;
};

struct VendorProfile {
  std::string vendor;  // also the NF id, e.g. "ap-vendor3"
  doc::NfClass nf_class = doc::NfClass::other;
  std::uint64_t seed = 0;
  doc::VendorApiDoc api;
  doc::CapabilityDocument capability_doc;
  std::vector<FunctionRewrite> rewrites;

  const FunctionRewrite* by_internal(std::string_view name) const;
  const FunctionRewrite* by_logical(std::string_view name) const;
  const FunctionRewrite* by_capability(std::string_view name) const;
  bool operator==(const VendorProfile&) const = default;
};

/// Encodings each NF class accepts on its control port.
std::vector<std::string> default_encodings(doc::NfClass nf_class);

/// Rule-driven rewrite of the base catalog. Same (class, seed, vendor)
/// always yields the same profile.
VendorProfile derive_vendor_variant(doc::NfClass nf_class, std::uint64_t seed, const std::string& vendor);

/// The ten simulated NFs: ap-vendor1..5 (seeds 1-5) then gnb-vendor1..5.
const std::vector<std::shared_ptr<const VendorProfile>>& standard_profiles();
std::shared_ptr<const VendorProfile> standard_profile(std::string_view nf_id);

std::string serialize(const VendorProfile& profile);
VendorProfile parse_vendor_profile(std::string_view text);

/// Calls a vendor internal function: checks args against the vendor
/// signature, converts to base units/types, runs the logical behavior and
/// converts results back. Throws Error(unknown_function / arity_mismatch /
/// domain).
ArgMap invoke_internal(const VendorProfile& profile, NfState& state, std::string_view function, const ArgMap& args,
                       Timestamp now);

}  // namespace ifgen::sim
