#include "ifgen/sim/variant.hpp"

#include <cmath>
#include <map>
#include <regex>
#include <set>

#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/hash.hpp"
#include "ifgen/sim/units.hpp"
#include "ifgen/text.hpp"

namespace ifgen::sim {

namespace {

using Json = nlohmann::json;

const std::map<std::string, std::vector<std::string>>& verb_table() {
  static const std::map<std::string, std::vector<std::string>> t = {
      {"set", {"set", "configure", "update", "apply", "assign"}},
      {"get", {"get", "fetch", "query", "read", "retrieve"}},
      {"list", {"list", "enumerate", "show", "dump", "collect"}},
      {"enable", {"enable", "activate", "start", "enable", "activate"}},
      {"disable", {"disable", "deactivate", "stop", "disable", "deactivate"}},
      {"activate", {"activate", "enable", "start", "activate", "enable"}},
      {"deactivate", {"deactivate", "disable", "stop", "deactivate", "disable"}},
      {"release", {"release", "drop", "free", "release", "remove"}},
      {"disassociate", {"disassociate", "disconnect", "kick", "deauth", "disconnect"}},
      {"block", {"block", "deny", "ban", "block", "deny"}},
      {"unblock", {"unblock", "allow", "unban", "unblock", "allow"}},
      {"reboot", {"reboot", "restart", "reset", "reload", "reboot"}},
      {"restart", {"restart", "reboot", "reset", "reload", "restart"}},
      {"handover", {"handover", "migrate", "move", "handoff", "transfer"}},
      {"bar", {"bar", "block", "bar", "lock", "bar"}},
      {"unbar", {"unbar", "unblock", "unbar", "unlock", "unbar"}},
      {"add", {"add", "insert", "register", "append", "add"}},
  };
  return t;
}

const std::map<std::string, std::string>& abbreviations() {
  static const std::map<std::string, std::string> t = {
      {"channel", "chn"},   {"power", "pwr"},      {"bandwidth", "bw"},     {"interval", "intvl"},
      {"threshold", "thresh"}, {"priority", "prio"}, {"utilization", "util"}, {"capabilities", "caps"},
      {"neighbor", "nbr"},  {"scheduler", "sched"},  {"policy", "pol"},       {"cycle", "cyc"},
      {"timer", "tmr"},     {"beacon", "bcn"},       {"status", "sts"},       {"target", "tgt"},
      {"limit", "lim"},     {"stations", "stas"},    {"period", "per"},       {"link", "lnk"},
  };
  return t;
}

const std::map<std::string, std::vector<std::string>>& expansions() {
  static const std::map<std::string, std::vector<std::string>> t = {
      {"tx", {"transmit"}},     {"sta", {"station"}},     {"stats", {"statistics"}},
      {"ue", {"user", "equipment"}}, {"dl", {"downlink"}}, {"ul", {"uplink"}},
      {"max", {"maximum"}},     {"du", {"distributed", "unit"}}, {"info", {"information"}},
  };
  return t;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string unit_token(const std::string& unit) { return text::to_lower(unit); }

std::string rewrite_description(const std::string& desc, int variant) {
  static const std::vector<std::vector<std::pair<std::string, std::string>>> table = {
      {},
      {{"Set", "Configure"}, {"Get", "Retrieve"}, {"current", "present"}},
      {{"Set", "Update"}, {"Get", "Fetch"}, {"of a radio", "of a radio interface"}},
      {{"Set", "Change"}, {"Get", "Read"}, {"transmit", "transmission"}},
      {{"Set", "Apply"}, {"Get", "Query"}, {"List", "Enumerate"}},
      {{"Set", "Adjust"}, {"Get", "Return"}, {"List", "Show"}, {"station", "client"}},
  };
  if (variant <= 0) return desc;
  const auto& rules = table[static_cast<std::size_t>(variant - 1) % (table.size() - 1) + 1];
  std::string out = desc;
  for (const auto& [from, to] : rules) {
    std::regex re("\\b" + from + "\\b");
    out = std::regex_replace(out, re, to);
  }
  return out;
}

ParamRewrite rewrite_param(const doc::ParamSpec& p, const VariantRules& rules) {
  ParamRewrite r;
  r.logical = p.name;
  r.base_type = p.type;
  r.vendor_type = p.type;
  r.base_unit = p.unit;
  r.vendor_unit = p.unit;
  if (p.unit) {
    auto dim = dimension_of(*p.unit);
    if (dim == "power") r.vendor_unit = rules.units.power;
    if (dim == "rate") r.vendor_unit = rules.units.rate;
    if (dim == "time") r.vendor_unit = rules.units.time;
    // A coarser unit cannot hold integral values of the finer one.
    if (r.base_type == SemanticType::integer && r.vendor_unit != r.base_unit) r.vendor_type = SemanticType::real;
  }
  if (rules.units.widen_integers && r.base_type == SemanticType::integer) r.vendor_type = SemanticType::real;
  auto tokens = text::split_identifier(p.name);
  r.internal_name = apply_style(tokens, rules.internal, false, r.vendor_unit);
  r.capability_name = apply_style(tokens, rules.capability, false, r.vendor_unit);
  return r;
}

doc::ParamSpec vendor_param(const doc::ParamSpec& base, const ParamRewrite& r, bool capability_side) {
  doc::ParamSpec p = base;
  p.name = capability_side ? r.capability_name : r.internal_name;
  p.type = r.vendor_type;
  p.unit = r.vendor_unit;
  return p;
}

std::string render_params(const std::vector<doc::ParamSpec>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += ps[i].name + " " + std::string(to_string(ps[i].type));
    if (ps[i].unit) out += " [" + *ps[i].unit + "]";
  }
  return out;
}

std::string api_prose(const doc::VendorApiDoc& api) {
  std::string out = "## " + api.vendor + " internal control API\n";
  out += "Functions are invoked in-process. Arguments are passed by name; units are given in brackets.\n";
  for (const auto& f : api.functions) {
    out += "func " + f.name + "(" + render_params(f.params) + ") -> (" + render_params(f.returns) + ")\n";
    out += "  " + f.description + "\n";
    for (const auto& p : f.params) {
      if (!p.description.empty()) out += "  " + p.name + ": " + p.description + "\n";
    }
  }
  return out;
}

Json write_rewrite_param(const ParamRewrite& r) {
  Json j = {{"logical", r.logical},
            {"internal_name", r.internal_name},
            {"capability_name", r.capability_name},
            {"base_type", std::string(to_string(r.base_type))},
            {"vendor_type", std::string(to_string(r.vendor_type))}};
  if (r.base_unit) j["base_unit"] = *r.base_unit;
  if (r.vendor_unit) j["vendor_unit"] = *r.vendor_unit;
  return j;
}

SemanticType read_type(const Json& j, std::string_view key, const std::string& path) {
  auto name = doc::json_io::read_string(j, key, path);
  auto t = parse_semantic_type(name);
  if (!t) throw Error(ErrorCode::schema, "unknown type '" + name + "'", doc::json_io::join_path(path, key));
  return *t;
}

ParamRewrite read_rewrite_param(const Json& j, const std::string& path) {
  using namespace doc::json_io;
  require_object(j, path);
  ParamRewrite r;
  r.logical = read_identifier(j, "logical", path);
  r.internal_name = read_identifier(j, "internal_name", path);
  r.capability_name = read_identifier(j, "capability_name", path);
  r.base_type = read_type(j, "base_type", path);
  r.vendor_type = read_type(j, "vendor_type", path);
  if (j.contains("base_unit")) r.base_unit = read_string(j, "base_unit", path);
  if (j.contains("vendor_unit")) r.vendor_unit = read_string(j, "vendor_unit", path);
  return r;
}

std::vector<ParamRewrite> read_rewrite_list(const Json& obj, std::string_view key, const std::string& path) {
  using namespace doc::json_io;
  const auto& arr = require(obj, key, path);
  auto p = join_path(path, key);
  if (!arr.is_array()) throw Error(ErrorCode::schema, "expected an array", p);
  std::vector<ParamRewrite> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_rewrite_param(arr[i], index_path(p, i)));
  return out;
}

// Vendor value -> base value for one parameter.
Value to_base(const Value& v, const ParamRewrite& r) {
  if (r.vendor_type == SemanticType::text || r.vendor_type == SemanticType::boolean ||
      r.vendor_type == SemanticType::text_list || r.vendor_type == SemanticType::timestamp) {
    return v;
  }
  double x = v.as_number();
  if (r.vendor_unit && r.base_unit && *r.vendor_unit != *r.base_unit) {
    x = convert_unit(x, *r.vendor_unit, *r.base_unit);
  }
  if (!std::isfinite(x)) throw Error(ErrorCode::domain, r.internal_name + " converts to a non-finite value");
  if (r.base_type == SemanticType::integer) {
    double rounded = std::round(x);
    if (std::fabs(x - rounded) > 1e-6 * std::max(1.0, std::fabs(x))) {
      throw Error(ErrorCode::domain, r.internal_name + " must be a whole number of " + r.base_unit.value_or("units"));
    }
    if (std::fabs(rounded) > 9.0e15) throw Error(ErrorCode::domain, r.internal_name + " out of range");
    return Value(static_cast<std::int64_t>(rounded));
  }
  return Value(x);
}

// Base result -> vendor result.
Value to_vendor(const Value& v, const ParamRewrite& r) {
  if (r.base_type != SemanticType::integer && r.base_type != SemanticType::real) return v;
  double x = v.as_number();
  bool converted = false;
  if (r.vendor_unit && r.base_unit && *r.vendor_unit != *r.base_unit) {
    x = convert_unit(x, *r.base_unit, *r.vendor_unit);
    converted = true;
  }
  if (r.vendor_type == SemanticType::integer) return converted ? Value(static_cast<std::int64_t>(std::llround(x))) : v;
  return Value(x);
}

}  // namespace

std::string apply_style(const std::vector<std::string>& base_tokens, const NameStyle& style, bool is_function,
                        const std::optional<std::string>& unit) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < base_tokens.size(); ++i) {
    auto tok = base_tokens[i];
    if (is_function && i == 0 && style.verb_variant > 0) {
      auto it = verb_table().find(tok);
      if (it != verb_table().end()) tok = it->second[static_cast<std::size_t>(style.verb_variant) % it->second.size()];
    }
    if (style.abbreviate) {
      auto it = abbreviations().find(tok);
      if (it != abbreviations().end()) tok = it->second;
    }
    if (style.expand) {
      auto it = expansions().find(tok);
      if (it != expansions().end()) {
        tokens.insert(tokens.end(), it->second.begin(), it->second.end());
        continue;
      }
    }
    tokens.push_back(tok);
  }
  if (style.unit_suffix && unit && !is_function) tokens.push_back(unit_token(*unit));
  if (is_function && !style.prefix.empty()) tokens.insert(tokens.begin(), style.prefix);

  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    switch (style.casing) {
      case Casing::snake:
        if (i) out += '_';
        out += tokens[i];
        break;
      case Casing::camel: out += i == 0 ? tokens[i] : capitalize(tokens[i]); break;
      case Casing::pascal: out += capitalize(tokens[i]); break;
      case Casing::compact: out += tokens[i]; break;
    }
  }
  return out;
}

VariantRules rules_for_seed(std::uint64_t seed) {
  using C = Casing;
  switch (seed) {
    case 0: return {};
    case 1:
      return {{C::camel, 0, true, false, "", true}, {C::snake, 1, false, false, "", false}, {"mW", "Mbps", "s", false}, 1};
    case 2:
      return {{C::snake, 3, false, true, "drv", false}, {C::camel, 2, true, false, "", false}, {"dBm", "kbps", "ms", true}, 2};
    case 3:
      return {{C::pascal, 1, false, true, "", false}, {C::compact, 0, true, false, "", false}, {"mW", "kbps", "ms", false}, 3};
    case 4:
      return {{C::snake, 4, true, false, "hal", true}, {C::pascal, 3, false, true, "", false}, {"dBm", "Mbps", "s", true}, 4};
    case 5:
      return {{C::camel, 2, false, true, "", true}, {C::snake, 4, true, false, "", false}, {"mW", "kbps", "s", true}, 5};
    default: break;
  }
  auto h = gen::mix(seed, 0x5eed);
  auto bit = [&](int i) { return ((h >> i) & 1u) != 0; };
  auto pick = [&](int shift, int n) { return static_cast<int>((h >> shift) % static_cast<std::uint64_t>(n)); };
  VariantRules r;
  r.internal = {static_cast<C>(pick(0, 4)), pick(8, 5), bit(16), !bit(16) && bit(17), bit(18) ? "hal" : "", bit(19)};
  r.capability = {static_cast<C>(pick(20, 4)), pick(24, 5), bit(28), !bit(28) && bit(29), "", false};
  if (r.capability.casing == r.internal.casing) r.capability.casing = static_cast<C>((static_cast<int>(r.internal.casing) + 1) % 4);
  r.units = {bit(30) ? "mW" : "dBm", bit(31) ? "kbps" : "Mbps", bit(32) ? "s" : "ms", bit(33)};
  r.description_variant = pick(34, 5) + 1;
  return r;
}

std::vector<std::string> default_encodings(doc::NfClass nf_class) {
  if (nf_class == doc::NfClass::gnb) return {"flatbin", "json"};
  return {"json"};
}

VendorProfile derive_vendor_variant(doc::NfClass nf_class, std::uint64_t seed, const std::string& vendor) {
  const auto& catalog = base_catalog(nf_class);
  auto rules = rules_for_seed(seed);
  VendorProfile p;
  p.vendor = vendor;
  p.nf_class = nf_class;
  p.seed = seed;
  p.api.vendor = vendor;
  p.api.nf_class = nf_class;
  p.capability_doc.nf_id = vendor;
  p.capability_doc.vendor = vendor;
  p.capability_doc.nf_class = nf_class;
  p.capability_doc.supported_encodings = default_encodings(nf_class);

  std::set<std::string> internal_names, capability_names;
  for (const auto& entry : catalog) {
    const auto& base = entry.capability;
    FunctionRewrite fr;
    fr.logical = base.name;
    auto tokens = text::split_identifier(base.name);
    fr.internal_name = apply_style(tokens, rules.internal, true);
    fr.capability_name = apply_style(tokens, rules.capability, true);
    if (!internal_names.insert(fr.internal_name).second || !capability_names.insert(fr.capability_name).second) {
      throw Error(ErrorCode::invariant, "seed " + std::to_string(seed) + " maps two functions to '" + fr.internal_name + "'");
    }
    doc::InternalFunction fn{fr.internal_name, base.description, {}, {}};
    doc::ControlCapability cap{fr.capability_name, rewrite_description(base.description, rules.description_variant), {}, {},
                               base.tags};
    for (const auto& bp : base.params) {
      auto r = rewrite_param(bp, rules);
      fn.params.push_back(vendor_param(bp, r, false));
      cap.params.push_back(vendor_param(bp, r, true));
      fr.params.push_back(std::move(r));
    }
    for (const auto& bp : base.returns) {
      auto r = rewrite_param(bp, rules);
      fn.returns.push_back(vendor_param(bp, r, false));
      cap.returns.push_back(vendor_param(bp, r, true));
      fr.returns.push_back(std::move(r));
    }
    p.api.functions.push_back(std::move(fn));
    p.capability_doc.capabilities.push_back(std::move(cap));
    p.rewrites.push_back(std::move(fr));
  }
  p.api.prose = api_prose(p.api);
  return p;
}

const FunctionRewrite* VendorProfile::by_internal(std::string_view name) const {
  for (const auto& r : rewrites) {
    if (r.internal_name == name) return &r;
  }
  return nullptr;
}

const FunctionRewrite* VendorProfile::by_logical(std::string_view name) const {
  for (const auto& r : rewrites) {
    if (r.logical == name) return &r;
  }
  return nullptr;
}

const FunctionRewrite* VendorProfile::by_capability(std::string_view name) const {
  for (const auto& r : rewrites) {
    if (r.capability_name == name) return &r;
  }
  return nullptr;
}

const std::vector<std::shared_ptr<const VendorProfile>>& standard_profiles() {
  static const auto profiles = [] {
    std::vector<std::shared_ptr<const VendorProfile>> out;
    for (auto cls : {doc::NfClass::wlan_ap, doc::NfClass::gnb}) {
      std::string prefix = cls == doc::NfClass::gnb ? "gnb-vendor" : "ap-vendor";
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        out.push_back(std::make_shared<const VendorProfile>(derive_vendor_variant(cls, seed, prefix + std::to_string(seed))));
      }
    }
    return out;
  }();
  return profiles;
}

std::shared_ptr<const VendorProfile> standard_profile(std::string_view nf_id) {
  for (const auto& p : standard_profiles()) {
    if (p->vendor == nf_id) return p;
  }
  throw Error(ErrorCode::unknown_nf, "no simulated NF '" + std::string(nf_id) + "'");
}

std::string serialize(const VendorProfile& profile) {
  Json rewrites = Json::array();
  for (const auto& r : profile.rewrites) {
    Json params = Json::array(), returns = Json::array();
    for (const auto& p : r.params) params.push_back(write_rewrite_param(p));
    for (const auto& p : r.returns) returns.push_back(write_rewrite_param(p));
    rewrites.push_back({{"logical", r.logical},
                        {"internal_name", r.internal_name},
                        {"capability_name", r.capability_name},
                        {"params", params},
                        {"returns", returns}});
  }
  Json j = {{"kind", "vendor_profile"},
            {"schema_version", std::string(doc::kSchemaVersion)},
            {"vendor", profile.vendor},
            {"nf_class", std::string(doc::to_string(profile.nf_class))},
            {"seed", profile.seed},
            {"api", doc::json_io::write(profile.api)},
            {"capability_doc", doc::json_io::write(profile.capability_doc)},
            {"rewrites", rewrites}};
  return doc::json_io::dump_canonical(j);
}

VendorProfile parse_vendor_profile(std::string_view text) {
  using namespace doc::json_io;
  auto j = parse_text(text);
  require_object(j, "");
  check_kind(j, "vendor_profile");
  check_schema_version(j);
  VendorProfile p;
  p.vendor = read_string(j, "vendor", "");
  auto cls = doc::parse_nf_class(read_string(j, "nf_class", ""));
  if (!cls) throw Error(ErrorCode::schema, "unknown nf_class", "nf_class");
  p.nf_class = *cls;
  const auto& seed = require(j, "seed", "");
  if (!seed.is_number_unsigned()) throw Error(ErrorCode::schema, "seed must be a non-negative integer", "seed");
  p.seed = seed.get<std::uint64_t>();
  p.api = read_vendor_api(require(j, "api", ""), "api");
  p.capability_doc = read_capability_document(require(j, "capability_doc", ""), "capability_doc");
  const auto& rw = require(j, "rewrites", "");
  if (!rw.is_array()) throw Error(ErrorCode::schema, "expected an array", "rewrites");
  for (std::size_t i = 0; i < rw.size(); ++i) {
    auto path = index_path("rewrites", i);
    FunctionRewrite r;
    r.logical = read_identifier(rw[i], "logical", path);
    r.internal_name = read_identifier(rw[i], "internal_name", path);
    r.capability_name = read_identifier(rw[i], "capability_name", path);
    r.params = read_rewrite_list(rw[i], "params", path);
    r.returns = read_rewrite_list(rw[i], "returns", path);
    p.rewrites.push_back(std::move(r));
  }
  return p;
}

ArgMap invoke_internal(const VendorProfile& profile, NfState& state, std::string_view function, const ArgMap& args,
                       Timestamp now) {
  const auto* rw = profile.by_internal(function);
  const auto* fn = profile.api.find(function);
  if (!rw || !fn) throw Error(ErrorCode::unknown_function, "no internal function '" + std::string(function) + "'");
  if (args.size() != fn->params.size()) {
    throw Error(ErrorCode::arity_mismatch, fn->name + " expects " + std::to_string(fn->params.size()) +
                                               " arguments, got " + std::to_string(args.size()));
  }
  ArgMap base_args;
  for (std::size_t i = 0; i < fn->params.size(); ++i) {
    const auto& spec = fn->params[i];
    auto it = args.find(spec.name);
    if (it == args.end()) throw Error(ErrorCode::arity_mismatch, fn->name + ": missing argument '" + spec.name + "'");
    if (it->second.type() != spec.type) {
      throw Error(ErrorCode::arity_mismatch, fn->name + ": argument '" + spec.name + "' must be " +
                                                 std::string(to_string(spec.type)) + ", got " +
                                                 std::string(to_string(it->second.type())));
    }
    base_args[rw->params[i].logical] = to_base(it->second, rw->params[i]);
  }
  auto base_result = invoke_logical(state, rw->logical, base_args, now);
  ArgMap out;
  for (const auto& r : rw->returns) out[r.internal_name] = to_vendor(base_result.at(r.logical), r);
  return out;
}

}  // namespace ifgen::sim
