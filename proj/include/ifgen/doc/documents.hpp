#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifgen/value.hpp"

namespace ifgen::doc {

inline constexpr std::string_view kSchemaVersion = "1.0.0";

/// `[a-zA-Z_][a-zA-Z0-9_]*`: function, parameter and encoding names.
bool is_identifier(std::string_view s);
/// Identifier grammar plus '-' after the first character; NF and vendor ids
/// such as "ap-vendor3".
bool is_nf_identifier(std::string_view s);

struct ParamSpec {
  std::string name;
  SemanticType type = SemanticType::text;
  // Allowed on integer, real, and numeric-in-text parameters.
  std::optional<std::string> unit;
  std::string description;

  bool operator==(const ParamSpec&) const = default;
};

struct ControlCapability {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  std::vector<ParamSpec> returns;
  std::vector<std::string> tags;

  bool operator==(const ControlCapability&) const = default;
};

enum class NfClass { gnb, wlan_ap, other };
std::string_view to_string(NfClass c);
std::optional<NfClass> parse_nf_class(std::string_view s);

struct CapabilityDocument {
  std::string nf_id;
  NfClass nf_class = NfClass::other;
  std::string vendor;
  std::vector<ControlCapability> capabilities;
  std::vector<std::string> supported_encodings;

  const ControlCapability* find(std::string_view name) const;
  bool operator==(const CapabilityDocument&) const = default;
};

/// Structured augmentation request. Recognised kinds are
/// "guard_on_timestamp" (target = the deadline parameter) and
/// "timestamp_returns" (target = the appended return field). A hint written
/// as free text keeps `kind` empty and stores the prose in `text`.
struct AugmentationHint {
  std::string kind;
  std::string target;
  std::string text;

  bool structured() const { return !kind.empty(); }
  bool operator==(const AugmentationHint&) const = default;
};

struct ControlFunctionRequirement {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  std::vector<ParamSpec> returns;
  std::optional<AugmentationHint> augmentation_hint;

  bool operator==(const ControlFunctionRequirement&) const = default;
};

struct RequirementSet {
  std::vector<ControlFunctionRequirement> requirements;
  bool operator==(const RequirementSet&) const = default;
};

enum class MatchKind { exact, closest, augmented };
std::string_view to_string(MatchKind k);
std::optional<MatchKind> parse_match_kind(std::string_view s);

struct CfrEntry {
  ControlFunctionRequirement requirement;
  std::string matched_capability_name;
  MatchKind match_kind = MatchKind::exact;
  double match_score = 1.0;
  std::string notes;

  bool operator==(const CfrEntry&) const = default;
};

struct CfrDocument {
  std::string source_nf;
  std::string dest_nf;
  std::vector<CfrEntry> entries;
  std::string encoding_scheme;
  std::string schema_version{kSchemaVersion};

  const CfrEntry* find(std::string_view requirement_name) const;
  bool operator==(const CfrDocument&) const = default;
};

/// One function of a vendor's internal (non-published) API.
struct InternalFunction {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  std::vector<ParamSpec> returns;

  bool operator==(const InternalFunction&) const = default;
};

/// Developer documentation for a vendor's internal API. Only the
/// destination-side code generator reads it.
struct VendorApiDoc {
  std::string vendor;
  NfClass nf_class = NfClass::other;
  std::vector<InternalFunction> functions;
  std::string prose;

  const InternalFunction* find(std::string_view name) const;
  bool operator==(const VendorApiDoc&) const = default;
};

struct Violation {
  std::string path;
  std::string message;
  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Invariant checks. Each returns every violation found, with field paths
// relative to the document root.
ValidationReport validate(const CapabilityDocument& doc);
ValidationReport validate(const CfrDocument& doc);
ValidationReport validate_requirements(const RequirementSet& reqs);
ValidationReport validate(const VendorApiDoc& api);

/// The single-line signature form, e.g.
/// `func setpower (radioID string, pow string dBm)(response boolean): <desc>: <matched>`.
std::string render_signature(const CfrEntry& entry);

/// Type name used in signatures ("string", "int", "float", "boolean", ...).
std::string_view signature_type_name(SemanticType type);

}  // namespace ifgen::doc
