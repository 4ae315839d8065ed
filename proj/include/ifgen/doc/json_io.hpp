#pragma once

// JSON field helpers shared by every document codec. Readers throw
// Error(schema) carrying the offending field path.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ifgen/doc/documents.hpp"
#include "ifgen/value.hpp"

namespace ifgen::doc::json_io {

using Json = nlohmann::json;

Json parse_text(std::string_view text);
std::string dump_canonical(const Json& j);

std::string join_path(const std::string& base, std::string_view key);
std::string index_path(const std::string& base, std::size_t index);

const Json& require(const Json& obj, std::string_view key, const std::string& path);
void require_object(const Json& j, const std::string& path);
std::string read_string(const Json& obj, std::string_view key, const std::string& path);
std::string read_identifier(const Json& obj, std::string_view key, const std::string& path);
double read_number(const Json& obj, std::string_view key, const std::string& path);
std::vector<std::string> read_string_list(const Json& obj, std::string_view key, const std::string& path);

void check_kind(const Json& obj, std::string_view expected, const std::string& path = "");
/// Rejects unknown major versions; returns the version text.
std::string check_schema_version(const Json& obj, const std::string& path = "");

Json write(const ParamSpec& p);
ParamSpec read_param(const Json& j, const std::string& path);
Json write_params(const std::vector<ParamSpec>& ps);
std::vector<ParamSpec> read_params(const Json& obj, std::string_view key, const std::string& path);

Json write(const ControlCapability& c);
ControlCapability read_capability(const Json& j, const std::string& path);

Json write(const ControlFunctionRequirement& r);
ControlFunctionRequirement read_requirement(const Json& j, const std::string& path);

Json write(const CapabilityDocument& d);
CapabilityDocument read_capability_document(const Json& j, const std::string& path = "");

Json write(const InternalFunction& f);
InternalFunction read_internal_function(const Json& j, const std::string& path);
Json write(const VendorApiDoc& d);
VendorApiDoc read_vendor_api(const Json& j, const std::string& path = "");

Json write(const CfrDocument& d);
CfrDocument read_cfr(const Json& j, const std::string& path = "");

// Typed value codec: the JSON shape is fixed by the declared type.
Json write_value(const Value& v);
Value read_value(const Json& j, SemanticType type, const std::string& path);
/// Best-effort typing used when no declaration is at hand.
Value read_untyped_value(const Json& j, const std::string& path);

}  // namespace ifgen::doc::json_io
