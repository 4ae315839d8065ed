#include "ifgen/doc/json_io.hpp"

#include <charconv>

#include "ifgen/error.hpp"

namespace ifgen::doc::json_io {

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::syntax, e.what(), "byte " + std::to_string(e.byte));
  }
}

std::string dump_canonical(const Json& j) {
  return j.dump(2, ' ', false, Json::error_handler_t::strict) + "\n";
}

std::string join_path(const std::string& base, std::string_view key) {
  if (base.empty()) return std::string(key);
  return base + "." + std::string(key);
}

std::string index_path(const std::string& base, std::size_t index) {
  return base + "[" + std::to_string(index) + "]";
}

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorCode::schema, "expected an object", path.empty() ? "$" : path);
}

const Json& require(const Json& obj, std::string_view key, const std::string& path) {
  require_object(obj, path);
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::schema, "missing field", join_path(path, key));
  return *it;
}

std::string read_string(const Json& obj, std::string_view key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw Error(ErrorCode::schema, "expected a string", join_path(path, key));
  return v.get<std::string>();
}

std::string read_identifier(const Json& obj, std::string_view key, const std::string& path) {
  auto s = read_string(obj, key, path);
  if (!is_identifier(s)) throw Error(ErrorCode::schema, "not an identifier: '" + s + "'", join_path(path, key));
  return s;
}

double read_number(const Json& obj, std::string_view key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number()) throw Error(ErrorCode::schema, "expected a number", join_path(path, key));
  return v.get<double>();
}

std::vector<std::string> read_string_list(const Json& obj, std::string_view key, const std::string& path) {
  const auto& v = require(obj, key, path);
  auto p = join_path(path, key);
  if (!v.is_array()) throw Error(ErrorCode::schema, "expected an array", p);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw Error(ErrorCode::schema, "expected a string", index_path(p, i));
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

void check_kind(const Json& obj, std::string_view expected, const std::string& path) {
  auto kind = read_string(obj, "kind", path);
  if (kind != expected) {
    throw Error(ErrorCode::schema, "expected kind '" + std::string(expected) + "', got '" + kind + "'",
                join_path(path, "kind"));
  }
}

std::string check_schema_version(const Json& obj, const std::string& path) {
  auto version = read_string(obj, "schema_version", path);
  auto p = join_path(path, "schema_version");
  // MAJOR.MINOR.PATCH, numeric components.
  int parts[3] = {0, 0, 0};
  const char* cur = version.data();
  const char* end = version.data() + version.size();
  for (int i = 0; i < 3; ++i) {
    auto [next, ec] = std::from_chars(cur, end, parts[i]);
    if (ec != std::errc{} || next == cur) throw Error(ErrorCode::schema, "malformed version '" + version + "'", p);
    cur = next;
    if (i < 2) {
      if (cur == end || *cur != '.') throw Error(ErrorCode::schema, "malformed version '" + version + "'", p);
      ++cur;
    }
  }
  if (cur != end) throw Error(ErrorCode::schema, "malformed version '" + version + "'", p);
  if (parts[0] != 1) {
    throw Error(ErrorCode::unsupported_version, "unsupported schema major version " + std::to_string(parts[0]), p);
  }
  return version;
}

Json write(const ParamSpec& p) {
  Json j = {{"name", p.name}, {"type", std::string(to_string(p.type))}, {"description", p.description}};
  if (p.unit) j["unit"] = *p.unit;
  return j;
}

ParamSpec read_param(const Json& j, const std::string& path) {
  require_object(j, path);
  ParamSpec p;
  p.name = read_identifier(j, "name", path);
  auto type_name = read_string(j, "type", path);
  auto type = parse_semantic_type(type_name);
  if (!type) throw Error(ErrorCode::schema, "unknown type '" + type_name + "'", join_path(path, "type"));
  p.type = *type;
  if (j.contains("unit")) p.unit = read_string(j, "unit", path);
  p.description = read_string(j, "description", path);
  return p;
}

Json write_params(const std::vector<ParamSpec>& ps) {
  Json arr = Json::array();
  for (const auto& p : ps) arr.push_back(write(p));
  return arr;
}

std::vector<ParamSpec> read_params(const Json& obj, std::string_view key, const std::string& path) {
  const auto& arr = require(obj, key, path);
  auto p = join_path(path, key);
  if (!arr.is_array()) throw Error(ErrorCode::schema, "expected an array", p);
  std::vector<ParamSpec> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_param(arr[i], index_path(p, i)));
  return out;
}

Json write(const ControlCapability& c) {
  return {{"name", c.name},
          {"description", c.description},
          {"params", write_params(c.params)},
          {"returns", write_params(c.returns)},
          {"tags", c.tags}};
}

ControlCapability read_capability(const Json& j, const std::string& path) {
  require_object(j, path);
  ControlCapability c;
  c.name = read_identifier(j, "name", path);
  c.description = read_string(j, "description", path);
  c.params = read_params(j, "params", path);
  c.returns = read_params(j, "returns", path);
  c.tags = read_string_list(j, "tags", path);
  return c;
}

namespace {

Json write_hint(const AugmentationHint& h) {
  if (!h.structured()) return h.text;
  return {{"kind", h.kind}, {"target", h.target}};
}

AugmentationHint read_hint(const Json& j, const std::string& path) {
  AugmentationHint h;
  if (j.is_string()) {
    h.text = j.get<std::string>();
    return h;
  }
  require_object(j, path);
  h.kind = read_identifier(j, "kind", path);
  h.target = read_identifier(j, "target", path);
  return h;
}

}  // namespace

Json write(const ControlFunctionRequirement& r) {
  Json j = {{"name", r.name},
            {"description", r.description},
            {"params", write_params(r.params)},
            {"returns", write_params(r.returns)}};
  if (r.augmentation_hint) j["augmentation_hint"] = write_hint(*r.augmentation_hint);
  return j;
}

ControlFunctionRequirement read_requirement(const Json& j, const std::string& path) {
  require_object(j, path);
  ControlFunctionRequirement r;
  // Requirement names are checked by validate_requirements, which reports
  // every violation instead of stopping at the first.
  r.name = read_string(j, "name", path);
  r.description = read_string(j, "description", path);
  r.params = read_params(j, "params", path);
  r.returns = read_params(j, "returns", path);
  if (j.contains("augmentation_hint")) {
    r.augmentation_hint = read_hint(j.at("augmentation_hint"), join_path(path, "augmentation_hint"));
  }
  return r;
}

Json write(const CapabilityDocument& d) {
  Json caps = Json::array();
  for (const auto& c : d.capabilities) caps.push_back(write(c));
  return {{"kind", "capability_document"},
          {"schema_version", std::string(kSchemaVersion)},
          {"nf_id", d.nf_id},
          {"nf_class", std::string(to_string(d.nf_class))},
          {"vendor", d.vendor},
          {"capabilities", caps},
          {"supported_encodings", d.supported_encodings}};
}

CapabilityDocument read_capability_document(const Json& j, const std::string& path) {
  require_object(j, path);
  check_kind(j, "capability_document", path);
  check_schema_version(j, path);
  CapabilityDocument d;
  d.nf_id = read_string(j, "nf_id", path);
  auto cls = read_string(j, "nf_class", path);
  auto parsed = parse_nf_class(cls);
  if (!parsed) throw Error(ErrorCode::schema, "unknown nf_class '" + cls + "'", join_path(path, "nf_class"));
  d.nf_class = *parsed;
  d.vendor = read_string(j, "vendor", path);
  const auto& caps = require(j, "capabilities", path);
  auto cp = join_path(path, "capabilities");
  if (!caps.is_array()) throw Error(ErrorCode::schema, "expected an array", cp);
  for (std::size_t i = 0; i < caps.size(); ++i) d.capabilities.push_back(read_capability(caps[i], index_path(cp, i)));
  d.supported_encodings = read_string_list(j, "supported_encodings", path);
  return d;
}

Json write(const InternalFunction& f) {
  return {{"name", f.name},
          {"description", f.description},
          {"params", write_params(f.params)},
          {"returns", write_params(f.returns)}};
}

InternalFunction read_internal_function(const Json& j, const std::string& path) {
  require_object(j, path);
  InternalFunction f;
  f.name = read_identifier(j, "name", path);
  f.description = read_string(j, "description", path);
  f.params = read_params(j, "params", path);
  f.returns = read_params(j, "returns", path);
  return f;
}

Json write(const VendorApiDoc& d) {
  Json fns = Json::array();
  for (const auto& f : d.functions) fns.push_back(write(f));
  return {{"kind", "vendor_api"},
          {"schema_version", std::string(kSchemaVersion)},
          {"vendor", d.vendor},
          {"nf_class", std::string(to_string(d.nf_class))},
          {"functions", fns},
          {"prose", d.prose}};
}

VendorApiDoc read_vendor_api(const Json& j, const std::string& path) {
  require_object(j, path);
  check_kind(j, "vendor_api", path);
  check_schema_version(j, path);
  VendorApiDoc d;
  d.vendor = read_string(j, "vendor", path);
  auto cls = read_string(j, "nf_class", path);
  auto parsed = parse_nf_class(cls);
  if (!parsed) throw Error(ErrorCode::schema, "unknown nf_class '" + cls + "'", join_path(path, "nf_class"));
  d.nf_class = *parsed;
  const auto& fns = require(j, "functions", path);
  auto fp = join_path(path, "functions");
  if (!fns.is_array()) throw Error(ErrorCode::schema, "expected an array", fp);
  for (std::size_t i = 0; i < fns.size(); ++i) d.functions.push_back(read_internal_function(fns[i], index_path(fp, i)));
  d.prose = read_string(j, "prose", path);
  return d;
}

Json write(const CfrDocument& d) {
  Json entries = Json::array();
  for (const auto& e : d.entries) {
    entries.push_back({{"requirement", write(e.requirement)},
                       {"matched_capability_name", e.matched_capability_name},
                       {"match_kind", std::string(to_string(e.match_kind))},
                       {"match_score", e.match_score},
                       {"notes", e.notes}});
  }
  return {{"kind", "cfr_document"},
          {"schema_version", d.schema_version},
          {"source_nf", d.source_nf},
          {"dest_nf", d.dest_nf},
          {"encoding_scheme", d.encoding_scheme},
          {"entries", entries}};
}

CfrDocument read_cfr(const Json& j, const std::string& path) {
  require_object(j, path);
  check_kind(j, "cfr_document", path);
  CfrDocument d;
  d.schema_version = check_schema_version(j, path);
  d.source_nf = read_string(j, "source_nf", path);
  d.dest_nf = read_string(j, "dest_nf", path);
  d.encoding_scheme = read_string(j, "encoding_scheme", path);
  const auto& entries = require(j, "entries", path);
  auto ep = join_path(path, "entries");
  if (!entries.is_array()) throw Error(ErrorCode::schema, "expected an array", ep);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto p = index_path(ep, i);
    const auto& e = entries[i];
    require_object(e, p);
    CfrEntry entry;
    entry.requirement = read_requirement(require(e, "requirement", p), join_path(p, "requirement"));
    entry.matched_capability_name = read_string(e, "matched_capability_name", p);
    auto kind = read_string(e, "match_kind", p);
    auto mk = parse_match_kind(kind);
    if (!mk) throw Error(ErrorCode::schema, "unknown match_kind '" + kind + "'", join_path(p, "match_kind"));
    entry.match_kind = *mk;
    entry.match_score = read_number(e, "match_score", p);
    entry.notes = read_string(e, "notes", p);
    d.entries.push_back(std::move(entry));
  }
  return d;
}

Json write_value(const Value& v) {
  switch (v.type()) {
    case SemanticType::text: return v.as_text();
    case SemanticType::integer: return v.as_integer();
    case SemanticType::real: return v.as_real();
    case SemanticType::boolean: return v.as_boolean();
    case SemanticType::timestamp: return v.as_timestamp().ms;
    case SemanticType::text_list: return v.as_text_list();
  }
  return nullptr;
}

Value read_value(const Json& j, SemanticType type, const std::string& path) {
  auto fail = [&]() -> Value {
    throw Error(ErrorCode::schema, "expected " + std::string(to_string(type)), path);
  };
  switch (type) {
    case SemanticType::text:
      if (!j.is_string()) return fail();
      return Value(j.get<std::string>());
    case SemanticType::integer:
      if (!j.is_number_integer()) return fail();
      return Value(j.get<std::int64_t>());
    case SemanticType::real:
      if (!j.is_number()) return fail();
      return Value(j.get<double>());
    case SemanticType::boolean:
      if (!j.is_boolean()) return fail();
      return Value(j.get<bool>());
    case SemanticType::timestamp:
      if (!j.is_number_integer()) return fail();
      return Value(Timestamp{j.get<std::int64_t>()});
    case SemanticType::text_list: {
      if (!j.is_array()) return fail();
      TextList out;
      for (const auto& item : j) {
        if (!item.is_string()) return fail();
        out.push_back(item.get<std::string>());
      }
      return Value(std::move(out));
    }
  }
  return fail();
}

Value read_untyped_value(const Json& j, const std::string& path) {
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_number_float()) return Value(j.get<double>());
  if (j.is_array()) return read_value(j, SemanticType::text_list, path);
  throw Error(ErrorCode::schema, "unsupported value shape", path);
}

}  // namespace ifgen::doc::json_io
