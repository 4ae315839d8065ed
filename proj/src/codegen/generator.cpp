#include "ifgen/codegen/generator.hpp"

#include <algorithm>
#include <set>

#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/hash.hpp"
#include "ifgen/sim/units.hpp"
#include "ifgen/text.hpp"

namespace ifgen::codegen {

namespace json_io = doc::json_io;
using json_io::Json;

namespace {

constexpr const char* kSystemPrompt =
    "You write adaptation code that lets a destination network function serve control functions requested by a "
    "source network function. For each CFR entry pick the internal API function that implements it and give the "
    "parameter and return pipelines using only these operations: rename, unit_convert, type_cast, clock_read, "
    "compare_timestamps, append_field, constant. Reply with a binding_spec JSON document and nothing else.";

const doc::ParamSpec* find_param(const std::vector<doc::ParamSpec>& ps, std::string_view name) {
  for (const auto& p : ps) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

std::string hint_target(const doc::ControlFunctionRequirement& req) {
  return req.augmentation_hint && req.augmentation_hint->structured() ? req.augmentation_hint->target : "";
}

std::vector<doc::ParamSpec> without(const std::vector<doc::ParamSpec>& ps, const std::string& name) {
  std::vector<doc::ParamSpec> out;
  for (const auto& p : ps) {
    if (p.name != name) out.push_back(p);
  }
  return out;
}

doc::ControlFunctionRequirement as_requirement(const doc::ControlCapability& cap) {
  return {cap.name, cap.description, cap.params, cap.returns, std::nullopt};
}

std::string render(const doc::ControlFunctionRequirement& r) {
  auto ps = [](const std::vector<doc::ParamSpec>& v) {
    std::vector<std::string> parts;
    for (const auto& p : v) parts.push_back(p.name + " " + std::string(to_string(p.type)) + (p.unit ? " " + *p.unit : ""));
    return text::join(parts, ", ");
  };
  return "func " + r.name + " (" + ps(r.params) + ")(" + ps(r.returns) + "): " + r.description;
}

}  // namespace

Augmentation synthesize_augmentation(const doc::AugmentationHint& hint, const doc::ControlFunctionRequirement& req) {
  if (!hint.structured()) {
    throw Error(ErrorCode::unrecognized_hint, "free-text augmentation hint on " + req.name + " is not supported: " + hint.text);
  }
  Augmentation aug;
  if (hint.kind == "guard_on_timestamp") {
    const auto* p = find_param(req.params, hint.target);
    if (!p || p->type != SemanticType::timestamp) {
      throw Error(ErrorCode::precondition, req.name + " has no timestamp parameter " + hint.target);
    }
    aug.kind = AugmentationKind::aoi_guard;
    aug.steps = {{OpKind::clock_read, {}, "tmp.now", {}, {}, {}},
                 {OpKind::compare_timestamps, {"in." + hint.target, "tmp.now"}, std::string(kGuardSlot), {}, {}, {}}};
    return aug;
  }
  if (hint.kind == "timestamp_returns") {
    const auto* p = find_param(req.returns, hint.target);
    if (!p || p->type != SemanticType::timestamp) {
      throw Error(ErrorCode::precondition, req.name + " has no timestamp return " + hint.target);
    }
    aug.kind = AugmentationKind::telemetry_timestamp;
    aug.steps = {{OpKind::clock_read, {}, "tmp.now", {}, {}, {}},
                 {OpKind::append_field, {"tmp.now"}, "out." + hint.target, {}, {}, {}}};
    return aug;
  }
  throw Error(ErrorCode::unrecognized_hint, "unknown augmentation kind " + hint.kind);
}

std::vector<std::optional<std::size_t>> align_params(const std::vector<doc::ParamSpec>& from,
                                                     const std::vector<doc::ParamSpec>& to,
                                                     const match::SynonymTable& synonyms) {
  struct Pair {
    double score;
    std::size_t f, t;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < to.size(); ++t) {
    auto ts = synonyms.canonical_set(to[t].name);
    for (std::size_t f = 0; f < from.size(); ++f) {
      if (!match::types_compatible(from[f], to[t])) continue;
      double s = 0.6 * jaccard(synonyms.canonical_set(from[f].name), ts);
      bool fu = from[f].unit.has_value(), tu = to[t].unit.has_value();
      if ((fu && tu && sim::same_dimension(*from[f].unit, *to[t].unit)) || (!fu && !tu)) s += 0.25;
      if (from[f].type == to[t].type) s += 0.05;
      if (f == t) s += 0.1;
      pairs.push_back({s, f, t});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.score > b.score; });
  std::vector<std::optional<std::size_t>> out(to.size());
  std::vector<bool> used(from.size(), false);
  for (const auto& p : pairs) {
    if (out[p.t] || used[p.f]) continue;
    out[p.t] = p.f;
    used[p.f] = true;
  }
  return out;
}

std::vector<Step> adaptation_steps(const std::string& from_slot, const doc::ParamSpec& from, const std::string& to_slot,
                                   const doc::ParamSpec& to) {
  std::vector<Step> steps;
  std::string cur = from_slot;
  auto type = from.type;
  auto scratch = "tmp." + to_slot.substr(to_slot.find('.') + 1);
  if (from.unit && to.unit && *from.unit != *to.unit) {
    steps.push_back({OpKind::unit_convert, {cur}, scratch + "_unit", from.unit, to.unit, {}});
    cur = steps.back().out;
    type = SemanticType::real;
  }
  if (type != to.type) {
    steps.push_back({OpKind::type_cast, {cur}, scratch + "_cast", {}, std::string(to_string(to.type)), {}});
  }
  if (steps.empty()) {
    steps.push_back({OpKind::rename, {from_slot}, to_slot, {}, {}, {}});
  } else {
    steps.back().out = to_slot;
  }
  return steps;
}

const doc::InternalFunction& select_target(const doc::CfrEntry& entry, const doc::ControlCapability* matched,
                                           const doc::VendorApiDoc& api, const match::Scorer& scorer) {
  if (api.functions.empty()) throw Error(ErrorCode::precondition, "vendor API lists no functions");
  std::optional<doc::ControlFunctionRequirement> cap_req;
  if (matched) cap_req = as_requirement(*matched);
  const doc::InternalFunction* best = nullptr;
  double best_score = -1;
  for (const auto& fn : api.functions) {
    double s = scorer.breakdown(entry.requirement, fn.name, fn.description, fn.params).total;
    if (cap_req) s = std::max(s, scorer.breakdown(*cap_req, fn.name, fn.description, fn.params).total);
    if (s > best_score) {
      best_score = s;
      best = &fn;
    }
  }
  return *best;
}

FunctionBinding derive_function_binding(const doc::CfrEntry& entry, const doc::ControlCapability* matched,
                                        const doc::VendorApiDoc& api, const match::Scorer& scorer) {
  const auto& req = entry.requirement;
  const auto& target = select_target(entry, matched, api, scorer);
  FunctionBinding fb;
  fb.function = req.name;
  fb.target = target.name;
  auto skip = hint_target(req);
  if (entry.match_kind == doc::MatchKind::augmented && req.augmentation_hint) {
    fb.augmentation = synthesize_augmentation(*req.augmentation_hint, req);
  } else {
    skip.clear();
  }
  const auto& syn = scorer.synonyms();
  auto req_params = without(req.params, skip);
  auto params = align_params(req_params, target.params, syn);
  for (std::size_t t = 0; t < target.params.size(); ++t) {
    if (!params[t]) continue;
    const auto& from = req_params[*params[t]];
    auto steps = adaptation_steps("in." + from.name, from, "arg." + target.params[t].name, target.params[t]);
    fb.param_pipeline.insert(fb.param_pipeline.end(), steps.begin(), steps.end());
  }
  auto req_returns = without(req.returns, skip);
  auto returns = align_params(target.returns, req_returns, syn);
  for (std::size_t t = 0; t < req_returns.size(); ++t) {
    if (!returns[t]) continue;
    const auto& from = target.returns[*returns[t]];
    auto steps = adaptation_steps("ret." + from.name, from, "out." + req_returns[t].name, req_returns[t]);
    fb.return_pipeline.insert(fb.return_pipeline.end(), steps.begin(), steps.end());
  }
  return fb;
}

GenerationCall generate_binding(const doc::CfrDocument& cfr, const doc::VendorApiDoc& api,
                                const doc::CapabilityDocument& capabilities, gen::Backend& backend,
                                const RepairInput* repair) {
  if (cfr.entries.empty()) throw Error(ErrorCode::precondition, "CFR has no entries");
  Json entries = Json::array(), caps = Json::array();
  std::string listing;
  for (const auto& e : cfr.entries) {
    if (e.match_kind == doc::MatchKind::augmented && e.requirement.augmentation_hint) {
      synthesize_augmentation(*e.requirement.augmentation_hint, e.requirement);
    }
    if (repair && std::find(repair->failing.begin(), repair->failing.end(), e.requirement.name) == repair->failing.end()) {
      continue;
    }
    Json ej = {{"requirement", json_io::write(e.requirement)},
               {"matched_capability_name", e.matched_capability_name},
               {"match_kind", doc::to_string(e.match_kind)}};
    entries.push_back(ej);
    if (const auto* cap = capabilities.find(e.matched_capability_name)) caps.push_back(json_io::write(*cap));
    listing += doc::render_signature(e) + "\n";
  }

  gen::GenerationRequest request;
  request.task = "codegen.binding";
  request.system_prompt = kSystemPrompt;
  request.max_output_tokens = 32000;
  request.max_context_chunks = 3;
  auto chunks = gen::chunk_document(api.prose, 400);
  gen::TrigramEmbedder embedder;
  auto index = gen::RetrievalIndex::build(chunks, embedder);
  for (const auto& hit : gen::retrieve_top_k(index, listing, 3, embedder)) {
    request.context_chunks.push_back(index.find(hit.id)->text);
  }
  request.user_prompt = "Encoding: " + cfr.encoding_scheme + "\nCFR entries:\n" + listing;
  request.hints = {{"encoding_scheme", cfr.encoding_scheme},
                   {"entries", entries},
                   {"capabilities", caps},
                   {"api", json_io::write(api)}};
  if (repair) {
    request.user_prompt += "\nRepair attempt " + std::to_string(repair->attempt) + ".\nPrevious binding:\n" + serialize(repair->previous) + "\nFailures:\n" + repair->report +
                           "\nRegenerate only these functions: " + text::join(repair->failing, ", ") + "\n";
    request.hints["previous"] = json_io::parse_text(serialize(repair->previous));
  }

  auto response = backend.generate(request);
  GenerationCall call;
  call.usage = response.usage;
  call.latency = response.latency;
  call.fault_injected = response.fault_injected;
  try {
    call.spec = parse_binding_spec(response.text);
  } catch (const Error& e) {
    throw Error(ErrorCode::malformed_response, std::string("binding reply is not a binding_spec: ") + e.what());
  }
  if (repair) {
    // Keep the previous bindings for everything not regenerated.
    auto merged = repair->previous;
    merged.encoding_scheme = cfr.encoding_scheme;
    for (const auto& f : call.spec.functions) {
      if (auto* slot = merged.find(f.function)) {
        *slot = f;
      } else {
        merged.functions.push_back(f);
      }
    }
    call.spec = std::move(merged);
  }
  return call;
}

std::string binding_rule(const gen::GenerationRequest& request) {
  const auto& h = request.hints;
  if (!h.contains("entries") || !h.contains("api") || !h.contains("capabilities") || !h.contains("encoding_scheme")) {
    throw Error(ErrorCode::precondition, "codegen.binding hints missing");
  }
  auto api = json_io::read_vendor_api(h["api"]);
  std::vector<doc::ControlCapability> caps;
  for (std::size_t i = 0; i < h["capabilities"].size(); ++i) {
    caps.push_back(json_io::read_capability(h["capabilities"][i], json_io::index_path("capabilities", i)));
  }
  BindingSpec spec;
  spec.encoding_scheme = h["encoding_scheme"].get<std::string>();
  const auto& scorer = match::Scorer::standard();
  for (std::size_t i = 0; i < h["entries"].size(); ++i) {
    const auto& ej = h["entries"][i];
    doc::CfrEntry e;
    e.requirement = json_io::read_requirement(ej["requirement"], "requirement");
    e.matched_capability_name = ej["matched_capability_name"].get<std::string>();
    e.match_kind = doc::parse_match_kind(ej["match_kind"].get<std::string>()).value_or(doc::MatchKind::closest);
    const doc::ControlCapability* matched = nullptr;
    for (const auto& c : caps) {
      if (c.name == e.matched_capability_name) matched = &c;
    }
    spec.functions.push_back(derive_function_binding(e, matched, api, scorer));
  }
  return serialize(spec);
}

std::string binding_fault(const std::string& clean, const gen::GenerationRequest&, std::uint64_t h) {
  auto spec = parse_binding_spec(clean);
  if (spec.functions.empty()) return clean;
  auto& f = spec.functions[h % spec.functions.size()];
  std::size_t n = f.param_pipeline.size() + f.return_pipeline.size();
  if (n == 0) return clean;
  std::size_t k = gen::mix(h, 0x57e9) % n;
  auto& steps = k < f.param_pipeline.size() ? f.param_pipeline : f.return_pipeline;
  if (k >= f.param_pipeline.size()) k -= f.param_pipeline.size();
  auto& s = steps[k];
  if (s.op == OpKind::unit_convert || s.op == OpKind::type_cast) {
    s.op = OpKind::rename;
    s.from.reset();
    s.to.reset();
  } else {
    steps.erase(steps.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return serialize(spec);
}

}  // namespace ifgen::codegen
