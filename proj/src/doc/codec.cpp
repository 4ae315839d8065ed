#include "ifgen/doc/codec.hpp"

#include <fstream>
#include <sstream>

#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"

namespace ifgen::doc {

using json_io::Json;

std::string_view to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::capability_document: return "capability_document";
    case DocumentKind::requirement_set: return "requirement_set";
    case DocumentKind::cfr_document: return "cfr_document";
    case DocumentKind::vendor_api: return "vendor_api";
    case DocumentKind::binding_spec: return "binding_spec";
    case DocumentKind::vendor_profile: return "vendor_profile";
    case DocumentKind::benchmark_corpus: return "benchmark_corpus";
    case DocumentKind::unknown: return "unknown";
  }
  return "unknown";
}

DocumentKind detect_kind(std::string_view text) {
  auto j = json_io::parse_text(text);
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) return DocumentKind::unknown;
  auto kind = j["kind"].get<std::string>();
  for (auto k : {DocumentKind::capability_document, DocumentKind::requirement_set, DocumentKind::cfr_document,
                 DocumentKind::vendor_api, DocumentKind::binding_spec, DocumentKind::vendor_profile,
                 DocumentKind::benchmark_corpus}) {
    if (to_string(k) == kind) return k;
  }
  return DocumentKind::unknown;
}

std::string normalize(std::string_view text) { return json_io::dump_canonical(json_io::parse_text(text)); }

namespace {

[[noreturn]] void raise_first(const ValidationReport& report) {
  const auto& v = report.violations.front();
  throw Error(ErrorCode::schema, v.message, v.path);
}

}  // namespace

std::string serialize(const CapabilityDocument& doc) {
  auto report = validate(doc);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::invariant, v.message, v.path);
  }
  return json_io::dump_canonical(json_io::write(doc));
}

CapabilityDocument parse_capability_document(std::string_view text) {
  auto doc = json_io::read_capability_document(json_io::parse_text(text));
  auto report = validate(doc);
  if (!report.ok()) raise_first(report);
  return doc;
}

std::string serialize(const RequirementSet& reqs) {
  Json arr = Json::array();
  for (const auto& r : reqs.requirements) arr.push_back(json_io::write(r));
  Json j = {{"kind", "requirement_set"}, {"schema_version", std::string(kSchemaVersion)}, {"requirements", arr}};
  return json_io::dump_canonical(j);
}

RequirementSet parse_requirement_set(std::string_view text) {
  auto j = json_io::parse_text(text);
  json_io::require_object(j, "");
  json_io::check_kind(j, "requirement_set");
  json_io::check_schema_version(j);
  const auto& arr = json_io::require(j, "requirements", "");
  if (!arr.is_array()) throw Error(ErrorCode::schema, "expected an array", "requirements");
  RequirementSet out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.requirements.push_back(json_io::read_requirement(arr[i], json_io::index_path("requirements", i)));
  }
  return out;
}

std::string serialize_cfr(const CfrDocument& doc) {
  auto report = validate(doc);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::invariant, v.message, v.path);
  }
  return json_io::dump_canonical(json_io::write(doc));
}

CfrDocument parse_cfr(std::string_view text) {
  auto doc = json_io::read_cfr(json_io::parse_text(text));
  auto report = validate(doc);
  if (!report.ok()) raise_first(report);
  return doc;
}

std::string serialize(const VendorApiDoc& api) {
  auto report = validate(api);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::invariant, v.message, v.path);
  }
  return json_io::dump_canonical(json_io::write(api));
}

VendorApiDoc parse_vendor_api(std::string_view text) {
  auto api = json_io::read_vendor_api(json_io::parse_text(text));
  auto report = validate(api);
  if (!report.ok()) raise_first(report);
  return api;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io, "write failed for " + path);
}

}  // namespace ifgen::doc
