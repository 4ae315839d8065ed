#include "ifgen/doc/documents.hpp"

#include <map>
#include <set>

#include "ifgen/sim/units.hpp"

namespace ifgen::doc {

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void check_params(const std::vector<ParamSpec>& params, const std::string& path, ValidationReport& report) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    auto pp = idx(path, i);
    if (!is_identifier(p.name)) report.violations.push_back({pp + ".name", "not an identifier: '" + p.name + "'"});
    if (!seen.insert(p.name).second) report.violations.push_back({pp + ".name", "duplicate parameter '" + p.name + "'"});
    if (p.unit) {
      bool unit_ok = p.type == SemanticType::integer || p.type == SemanticType::real || p.type == SemanticType::text;
      if (!unit_ok) {
        report.violations.push_back({pp + ".unit", "unit not allowed on " + std::string(to_string(p.type))});
      } else if (!sim::is_known_unit(*p.unit)) {
        report.violations.push_back({pp + ".unit", "unknown unit '" + *p.unit + "'"});
      }
    }
  }
}

void check_requirement(const ControlFunctionRequirement& r, const std::string& path, ValidationReport& report) {
  if (r.name.empty()) {
    report.violations.push_back({path + ".name", "name is empty"});
  } else if (!is_identifier(r.name)) {
    report.violations.push_back({path + ".name", "not an identifier: '" + r.name + "'"});
  }
  if (r.description.empty()) report.violations.push_back({path + ".description", "description is empty"});
  check_params(r.params, path + ".params", report);
  check_params(r.returns, path + ".returns", report);
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s.front())) return false;
  for (char c : s) {
    if (!ident_char(c)) return false;
  }
  return true;
}

bool is_nf_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s.front())) return false;
  for (char c : s) {
    if (!ident_char(c) && c != '-') return false;
  }
  return true;
}

std::string_view to_string(NfClass c) {
  switch (c) {
    case NfClass::gnb: return "gNB";
    case NfClass::wlan_ap: return "WLAN-AP";
    case NfClass::other: return "other";
  }
  return "other";
}

std::optional<NfClass> parse_nf_class(std::string_view s) {
  if (s == "gNB") return NfClass::gnb;
  if (s == "WLAN-AP") return NfClass::wlan_ap;
  if (s == "other") return NfClass::other;
  return std::nullopt;
}

std::string_view to_string(MatchKind k) {
  switch (k) {
    case MatchKind::exact: return "exact";
    case MatchKind::closest: return "closest";
    case MatchKind::augmented: return "augmented";
  }
  return "exact";
}

std::optional<MatchKind> parse_match_kind(std::string_view s) {
  if (s == "exact") return MatchKind::exact;
  if (s == "closest") return MatchKind::closest;
  if (s == "augmented") return MatchKind::augmented;
  return std::nullopt;
}

const ControlCapability* CapabilityDocument::find(std::string_view name) const {
  for (const auto& c : capabilities) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const InternalFunction* VendorApiDoc::find(std::string_view name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const CfrEntry* CfrDocument::find(std::string_view requirement_name) const {
  for (const auto& e : entries) {
    if (e.requirement.name == requirement_name) return &e;
  }
  return nullptr;
}

ValidationReport validate(const CapabilityDocument& doc) {
  ValidationReport report;
  if (!is_nf_identifier(doc.nf_id)) report.violations.push_back({"nf_id", "not an NF identifier: '" + doc.nf_id + "'"});
  if (!is_nf_identifier(doc.vendor)) report.violations.push_back({"vendor", "not an identifier: '" + doc.vendor + "'"});
  if (doc.capabilities.empty()) report.violations.push_back({"capabilities", "capability list is empty"});
  if (doc.supported_encodings.empty()) report.violations.push_back({"supported_encodings", "no encodings listed"});
  for (std::size_t i = 0; i < doc.supported_encodings.size(); ++i) {
    if (!is_identifier(doc.supported_encodings[i])) {
      report.violations.push_back({idx("supported_encodings", i), "not an identifier"});
    }
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc.capabilities.size(); ++i) {
    const auto& c = doc.capabilities[i];
    auto p = idx("capabilities", i);
    if (!is_identifier(c.name)) report.violations.push_back({p + ".name", "not an identifier: '" + c.name + "'"});
    if (!names.insert(c.name).second) report.violations.push_back({p + ".name", "duplicate capability '" + c.name + "'"});
    if (c.description.empty()) report.violations.push_back({p + ".description", "description is empty"});
    check_params(c.params, p + ".params", report);
    check_params(c.returns, p + ".returns", report);
  }
  return report;
}

ValidationReport validate(const CfrDocument& doc) {
  ValidationReport report;
  if (!is_nf_identifier(doc.source_nf)) report.violations.push_back({"source_nf", "not an NF identifier"});
  if (!is_nf_identifier(doc.dest_nf)) report.violations.push_back({"dest_nf", "not an NF identifier"});
  if (!is_identifier(doc.encoding_scheme)) report.violations.push_back({"encoding_scheme", "not an identifier"});
  if (doc.entries.empty()) report.violations.push_back({"entries", "CFR has no entries"});
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc.entries.size(); ++i) {
    const auto& e = doc.entries[i];
    auto p = idx("entries", i);
    check_requirement(e.requirement, p + ".requirement", report);
    if (!names.insert(e.requirement.name).second) {
      report.violations.push_back({p + ".requirement.name", "duplicate requirement '" + e.requirement.name + "'"});
    }
    if (!is_identifier(e.matched_capability_name)) {
      report.violations.push_back({p + ".matched_capability_name", "not an identifier"});
    }
    if (!(e.match_score >= 0.0 && e.match_score <= 1.0)) {
      report.violations.push_back({p + ".match_score", "match_score outside [0,1]"});
    } else if (e.match_kind == MatchKind::exact && e.match_score != 1.0) {
      report.violations.push_back({p + ".match_score", "exact match requires match_score 1.0"});
    } else if (e.match_kind != MatchKind::exact && !(e.match_score > 0.0 && e.match_score < 1.0)) {
      report.violations.push_back({p + ".match_score", "closest/augmented match requires 0 < match_score < 1"});
    }
  }
  return report;
}

ValidationReport validate_requirements(const RequirementSet& reqs) {
  ValidationReport report;
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < reqs.requirements.size(); ++i) {
    const auto& r = reqs.requirements[i];
    auto p = idx("requirements", i);
    check_requirement(r, p, report);
    if (!r.name.empty() && seen.contains(r.name)) {
      report.violations.push_back({p + ".name", "duplicate requirement name '" + r.name + "' (first at index " +
                                                    std::to_string(seen[r.name]) + ")"});
    } else {
      seen.emplace(r.name, i);
    }
  }
  return report;
}

std::string_view signature_type_name(SemanticType type) {
  switch (type) {
    case SemanticType::text: return "string";
    case SemanticType::integer: return "int";
    case SemanticType::real: return "float";
    case SemanticType::boolean: return "boolean";
    case SemanticType::timestamp: return "timestamp";
    case SemanticType::text_list: return "[]string";
  }
  return "string";
}

namespace {

std::string render_params(const std::vector<ParamSpec>& params) {
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].name;
    out += ' ';
    out += signature_type_name(params[i].type);
    if (params[i].unit) {
      out += ' ';
      out += *params[i].unit;
    }
  }
  return out + ")";
}

}  // namespace

std::string render_signature(const CfrEntry& entry) {
  const auto& r = entry.requirement;
  return "func " + r.name + " " + render_params(r.params) + render_params(r.returns) + ": " + r.description + ": " +
         entry.matched_capability_name;
}

ValidationReport validate(const VendorApiDoc& api) {
  ValidationReport report;
  if (!is_nf_identifier(api.vendor)) report.violations.push_back({"vendor", "not an identifier: '" + api.vendor + "'"});
  if (api.functions.empty()) report.violations.push_back({"functions", "function list is empty"});
  std::set<std::string> names;
  for (std::size_t i = 0; i < api.functions.size(); ++i) {
    const auto& f = api.functions[i];
    auto p = idx("functions", i);
    if (!is_identifier(f.name)) report.violations.push_back({p + ".name", "not an identifier: '" + f.name + "'"});
    if (!names.insert(f.name).second) report.violations.push_back({p + ".name", "duplicate function '" + f.name + "'"});
    check_params(f.params, p + ".params", report);
    check_params(f.returns, p + ".returns", report);
  }
  return report;
}

}  // namespace ifgen::doc
