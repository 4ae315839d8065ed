#pragma once

#include <string>
#include <string_view>

#include "ifgen/doc/documents.hpp"

namespace ifgen::doc {

// Canonical document format: UTF-8 JSON, object keys sorted, two-space
// indentation, trailing newline, shortest round-trip number formatting.
// Every document carries "kind" and "schema_version" so files can be loaded
// without relying on their extension.

enum class DocumentKind {
  capability_document,
  requirement_set,
  cfr_document,
  vendor_api,
  binding_spec,
  vendor_profile,
  benchmark_corpus,
  unknown,
};

std::string_view to_string(DocumentKind kind);

/// Peeks at the "kind" field. Throws Error(syntax) on malformed input.
DocumentKind detect_kind(std::string_view text);

/// Canonical re-rendering of any well-formed JSON text.
std::string normalize(std::string_view text);

std::string serialize(const CapabilityDocument& doc);
CapabilityDocument parse_capability_document(std::string_view text);

std::string serialize(const RequirementSet& reqs);
/// Structural parse only; run validate_requirements() for invariant checks.
RequirementSet parse_requirement_set(std::string_view text);

std::string serialize_cfr(const CfrDocument& doc);
CfrDocument parse_cfr(std::string_view text);

std::string serialize(const VendorApiDoc& api);
VendorApiDoc parse_vendor_api(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace ifgen::doc
