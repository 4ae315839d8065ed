#include "ifgen/codegen/binding.hpp"

#include <map>

#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/sim/units.hpp"

namespace ifgen::codegen {

namespace json_io = doc::json_io;
using json_io::Json;

namespace {

constexpr std::pair<OpKind, std::string_view> kOps[] = {
    {OpKind::rename, "rename"},
    {OpKind::unit_convert, "unit_convert"},
    {OpKind::type_cast, "type_cast"},
    {OpKind::clock_read, "clock_read"},
    {OpKind::compare_timestamps, "compare_timestamps"},
    {OpKind::append_field, "append_field"},
    {OpKind::constant, "constant"},
};

constexpr std::pair<AugmentationKind, std::string_view> kAugs[] = {
    {AugmentationKind::none, "none"},
    {AugmentationKind::aoi_guard, "aoi_guard"},
    {AugmentationKind::telemetry_timestamp, "telemetry_timestamp"},
};

Json write_step(const Step& s) {
  Json j = {{"op", to_string(s.op)}, {"in", s.in}, {"out", s.out}};
  if (s.from) j["from"] = *s.from;
  if (s.to) j["to"] = *s.to;
  if (s.value) {
    j["value"] = json_io::write_value(*s.value);
    j["value_type"] = to_string(s.value->type());
  }
  return j;
}

Step read_step(const Json& j, const std::string& path) {
  json_io::require_object(j, path);
  Step s;
  auto op = json_io::read_string(j, "op", path);
  auto parsed = parse_op(op);
  if (!parsed) throw Error(ErrorCode::schema, "unknown op \"" + op + "\"", json_io::join_path(path, "op"));
  s.op = *parsed;
  s.in = json_io::read_string_list(j, "in", path);
  s.out = json_io::read_string(j, "out", path);
  if (j.contains("from")) s.from = json_io::read_string(j, "from", path);
  if (j.contains("to")) s.to = json_io::read_string(j, "to", path);
  if (j.contains("value")) {
    auto tname = json_io::read_string(j, "value_type", path);
    auto t = parse_semantic_type(tname);
    if (!t) throw Error(ErrorCode::schema, "unknown type \"" + tname + "\"", json_io::join_path(path, "value_type"));
    s.value = json_io::read_value(j["value"], *t, json_io::join_path(path, "value"));
  }
  return s;
}

Json write_steps(const std::vector<Step>& steps) {
  Json arr = Json::array();
  for (const auto& s : steps) arr.push_back(write_step(s));
  return arr;
}

std::vector<Step> read_steps(const Json& obj, std::string_view key, const std::string& path) {
  const auto& arr = json_io::require(obj, key, path);
  auto p = json_io::join_path(path, key);
  if (!arr.is_array()) throw Error(ErrorCode::schema, "expected an array", p);
  std::vector<Step> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_step(arr[i], json_io::index_path(p, i)));
  return out;
}

// Static slot typing.
struct SlotInfo {
  SemanticType type;
  std::optional<std::string> unit;
};

struct Checker {
  std::string function;
  std::vector<BindingIssue>& issues;
  std::map<std::string, SlotInfo> slots;

  void issue(const std::string& msg) { issues.push_back({function, msg}); }

  const SlotInfo* read(const std::string& slot, std::string_view where) {
    auto it = slots.find(slot);
    if (it == slots.end()) {
      issue(std::string(where) + " reads undefined slot " + slot);
      return nullptr;
    }
    return &it->second;
  }

  bool writable(const std::string& slot, std::string_view allowed_prefix) {
    if (slot.rfind("tmp.", 0) == 0 || slot.rfind(allowed_prefix, 0) == 0) return true;
    issue("step writes " + slot + " outside " + std::string(allowed_prefix) + "* and tmp.*");
    return false;
  }

  void run(const std::vector<Step>& steps, std::string_view out_prefix) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& s = steps[i];
      auto where = std::string(to_string(s.op)) + " step " + std::to_string(i);
      std::size_t arity = s.op == OpKind::compare_timestamps ? 2 : (s.op == OpKind::clock_read || s.op == OpKind::constant) ? 0 : 1;
      if (s.in.size() != arity) {
        issue(where + " takes " + std::to_string(arity) + " inputs");
        continue;
      }
      if (!writable(s.out, out_prefix)) continue;
      std::vector<const SlotInfo*> ins;
      bool ok = true;
      for (const auto& in : s.in) {
        ins.push_back(read(in, where));
        ok = ok && ins.back();
      }
      if (!ok) continue;
      switch (s.op) {
        case OpKind::rename:
        case OpKind::append_field: slots[s.out] = *ins[0]; break;
        case OpKind::unit_convert: {
          auto t = ins[0]->type;
          if (t != SemanticType::integer && t != SemanticType::real && t != SemanticType::text) {
            issue(where + " converts a non-numeric slot");
            break;
          }
          if (!s.from || !s.to || !sim::same_dimension(*s.from, *s.to)) {
            issue(where + " needs units of one dimension");
            break;
          }
          if (ins[0]->unit && *ins[0]->unit != *s.from) issue(where + " expects " + *s.from + " but slot is " + *ins[0]->unit);
          slots[s.out] = {SemanticType::real, s.to};
          break;
        }
        case OpKind::type_cast: {
          auto t = s.to ? parse_semantic_type(*s.to) : std::nullopt;
          if (!t || *t == SemanticType::text_list || *t == SemanticType::timestamp) {
            issue(where + " has an unsupported target type");
            break;
          }
          slots[s.out] = {*t, ins[0]->unit};
          break;
        }
        case OpKind::clock_read: slots[s.out] = {SemanticType::timestamp, std::nullopt}; break;
        case OpKind::compare_timestamps:
          if (ins[0]->type != SemanticType::timestamp || ins[1]->type != SemanticType::timestamp) {
            issue(where + " compares non-timestamp slots");
            break;
          }
          slots[s.out] = {SemanticType::boolean, std::nullopt};
          break;
        case OpKind::constant:
          if (!s.value) {
            issue(where + " has no value");
            break;
          }
          slots[s.out] = {s.value->type(), std::nullopt};
          break;
      }
    }
  }

  void expect(const std::string& slot, const doc::ParamSpec& p) {
    auto it = slots.find(slot);
    if (it == slots.end()) {
      issue(slot + " is never produced");
      return;
    }
    if (it->second.type != p.type) {
      issue(slot + " is " + std::string(to_string(it->second.type)) + ", expected " + std::string(to_string(p.type)));
    }
    if (it->second.unit && p.unit && *it->second.unit != *p.unit) {
      issue(slot + " carries " + *it->second.unit + ", expected " + *p.unit);
    }
  }
};

}  // namespace

std::string_view to_string(OpKind op) {
  for (auto [k, s] : kOps) {
    if (k == op) return s;
  }
  return "rename";
}

std::optional<OpKind> parse_op(std::string_view s) {
  for (auto [k, name] : kOps) {
    if (name == s) return k;
  }
  return std::nullopt;
}

std::string_view to_string(AugmentationKind k) {
  for (auto [kind, s] : kAugs) {
    if (kind == k) return s;
  }
  return "none";
}

const FunctionBinding* BindingSpec::find(std::string_view function) const {
  for (const auto& f : functions) {
    if (f.function == function) return &f;
  }
  return nullptr;
}

FunctionBinding* BindingSpec::find(std::string_view function) {
  for (auto& f : functions) {
    if (f.function == function) return &f;
  }
  return nullptr;
}

std::string serialize(const BindingSpec& spec) {
  Json fns = Json::array();
  for (const auto& f : spec.functions) {
    fns.push_back({{"function", f.function},
                   {"target", f.target},
                   {"param_pipeline", write_steps(f.param_pipeline)},
                   {"return_pipeline", write_steps(f.return_pipeline)},
                   {"augmentation",
                    {{"kind", to_string(f.augmentation.kind)},
                     {"on_guard_fail", f.augmentation.on_guard_fail},
                     {"steps", write_steps(f.augmentation.steps)}}}});
  }
  Json root = {{"kind", "binding_spec"},
               {"schema_version", doc::kSchemaVersion},
               {"encoding_scheme", spec.encoding_scheme},
               {"functions", fns}};
  return json_io::dump_canonical(root);
}

BindingSpec parse_binding_spec(std::string_view text) {
  auto root = json_io::parse_text(text);
  json_io::require_object(root, "");
  json_io::check_kind(root, "binding_spec");
  json_io::check_schema_version(root);
  BindingSpec spec;
  spec.encoding_scheme = json_io::read_identifier(root, "encoding_scheme", "");
  const auto& fns = json_io::require(root, "functions", "");
  if (!fns.is_array()) throw Error(ErrorCode::schema, "expected an array", "functions");
  for (std::size_t i = 0; i < fns.size(); ++i) {
    auto p = json_io::index_path("functions", i);
    const auto& j = fns[i];
    json_io::require_object(j, p);
    FunctionBinding f;
    f.function = json_io::read_identifier(j, "function", p);
    f.target = json_io::read_identifier(j, "target", p);
    f.param_pipeline = read_steps(j, "param_pipeline", p);
    f.return_pipeline = read_steps(j, "return_pipeline", p);
    const auto& aug = json_io::require(j, "augmentation", p);
    auto ap = json_io::join_path(p, "augmentation");
    json_io::require_object(aug, ap);
    auto kind = json_io::read_string(aug, "kind", ap);
    bool known = false;
    for (auto [k, s] : kAugs) {
      if (s == kind) {
        f.augmentation.kind = k;
        known = true;
      }
    }
    if (!known) throw Error(ErrorCode::schema, "unknown augmentation kind \"" + kind + "\"", json_io::join_path(ap, "kind"));
    f.augmentation.on_guard_fail = json_io::read_string(aug, "on_guard_fail", ap);
    f.augmentation.steps = read_steps(aug, "steps", ap);
    spec.functions.push_back(std::move(f));
  }
  return spec;
}

std::vector<BindingIssue> check_binding(const BindingSpec& spec, const doc::CfrDocument& cfr, const doc::VendorApiDoc& api) {
  std::vector<BindingIssue> issues;
  if (spec.encoding_scheme != cfr.encoding_scheme) {
    issues.push_back({"", "encoding " + spec.encoding_scheme + " differs from the CFR's " + cfr.encoding_scheme});
  }
  for (const auto& f : spec.functions) {
    if (!cfr.find(f.function)) issues.push_back({f.function, "not requested by the CFR"});
  }
  for (const auto& entry : cfr.entries) {
    const auto& req = entry.requirement;
    const auto* f = spec.find(req.name);
    if (!f) {
      issues.push_back({req.name, "no binding"});
      continue;
    }
    const auto* target = api.find(f->target);
    if (!target) {
      issues.push_back({req.name, "target " + f->target + " is not in the vendor API"});
      continue;
    }
    Checker c{req.name, issues, {}};
    for (const auto& p : req.params) c.slots["in." + p.name] = {p.type, p.unit};

    const auto& aug = f->augmentation;
    bool wants_guard = entry.match_kind == doc::MatchKind::augmented && req.augmentation_hint &&
                       req.augmentation_hint->kind == "guard_on_timestamp";
    bool wants_stamp = entry.match_kind == doc::MatchKind::augmented && req.augmentation_hint &&
                       req.augmentation_hint->kind == "timestamp_returns";
    if (wants_guard != (aug.kind == AugmentationKind::aoi_guard) ||
        wants_stamp != (aug.kind == AugmentationKind::telemetry_timestamp)) {
      c.issue("augmentation " + std::string(to_string(aug.kind)) + " does not fit the CFR entry");
    }
    if (aug.kind == AugmentationKind::aoi_guard) {
      c.run(aug.steps, "tmp.");
      auto it = c.slots.find(std::string(kGuardSlot));
      if (it == c.slots.end() || it->second.type != SemanticType::boolean) c.issue("guard does not produce a boolean tmp.guard");
      if (aug.on_guard_fail != "reject_with_error") c.issue("unsupported on_guard_fail " + aug.on_guard_fail);
    }
    c.run(f->param_pipeline, "arg.");
    for (const auto& q : target->params) c.expect("arg." + q.name, q);
    for (const auto& [slot, info] : c.slots) {
      if (slot.rfind("arg.", 0) != 0) continue;
      auto name = slot.substr(4);
      bool known = false;
      for (const auto& q : target->params) known = known || q.name == name;
      if (!known) c.issue(slot + " is not a parameter of " + f->target);
    }
    for (const auto& q : target->returns) c.slots["ret." + q.name] = {q.type, q.unit};
    c.run(f->return_pipeline, "out.");
    if (aug.kind == AugmentationKind::telemetry_timestamp) c.run(aug.steps, "out.");
    for (const auto& p : req.returns) c.expect("out." + p.name, p);
  }
  return issues;
}

}  // namespace ifgen::codegen
