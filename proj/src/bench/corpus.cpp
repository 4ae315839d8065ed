#include "ifgen/bench/corpus.hpp"

#include <algorithm>
#include <set>

#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/paths.hpp"
#include "ifgen/sim/catalog.hpp"

namespace ifgen::bench {

namespace {

namespace json_io = doc::json_io;
using json_io::Json;

doc::NfClass read_class(const Json& j, const std::string& path) {
  auto s = json_io::read_string(j, "nf_class", path);
  auto c = doc::parse_nf_class(s);
  if (!c) throw Error(ErrorCode::schema, "unknown NF class \"" + s + "\"", json_io::join_path(path, "nf_class"));
  return *c;
}

std::map<std::string, std::string> read_map(const Json& j, std::string_view key, const std::string& path) {
  const auto& m = json_io::require(j, key, path);
  auto p = json_io::join_path(path, key);
  json_io::require_object(m, p);
  std::map<std::string, std::string> out;
  for (auto it = m.begin(); it != m.end(); ++it) {
    if (!it.value().is_string()) throw Error(ErrorCode::schema, "expected a string", json_io::join_path(p, it.key()));
    out[it.key()] = it.value().get<std::string>();
  }
  return out;
}

CorpusEntry read_entry(const Json& j, const std::string& path) {
  json_io::require_object(j, path);
  CorpusEntry e;
  e.nf_class = read_class(j, path);
  e.label = json_io::read_identifier(j, "label", path);
  e.requirement = json_io::read_requirement(json_io::require(j, "requirement", path), json_io::join_path(path, "requirement"));
  e.param_map = read_map(j, "param_map", path);
  e.return_map = read_map(j, "return_map", path);
  if (j.contains("example")) {
    auto p = json_io::join_path(path, "example");
    const auto& ex = j["example"];
    if (!ex.is_object()) throw Error(ErrorCode::schema, "expected an object", p);
    for (auto it = ex.begin(); it != ex.end(); ++it) {
      auto spec = std::find_if(e.requirement.params.begin(), e.requirement.params.end(),
                               [&](const doc::ParamSpec& s) { return s.name == it.key(); });
      if (spec == e.requirement.params.end()) throw Error(ErrorCode::schema, "not a parameter", json_io::join_path(p, it.key()));
      e.example.emplace(it.key(), json_io::read_value(it.value(), spec->type, json_io::join_path(p, it.key())));
    }
  }
  return e;
}

Json write_entry(const CorpusEntry& e) {
  Json j = {{"nf_class", doc::to_string(e.nf_class)},
            {"label", e.label},
            {"requirement", json_io::write(e.requirement)},
            {"param_map", e.param_map},
            {"return_map", e.return_map}};
  if (!e.example.empty()) {
    Json ex = Json::object();
    for (const auto& [k, v] : e.example) ex[k] = json_io::write_value(v);
    j["example"] = ex;
  }
  return j;
}

std::vector<CorpusEntry> read_entries(const Json& root, std::string_view key) {
  std::vector<CorpusEntry> out;
  const auto& arr = json_io::require(root, key, "");
  if (!arr.is_array()) throw Error(ErrorCode::schema, "expected an array", std::string(key));
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(read_entry(arr[i], json_io::index_path(std::string(key), i)));
  return out;
}

bool has_param(const std::vector<doc::ParamSpec>& ps, const std::string& name) {
  return std::any_of(ps.begin(), ps.end(), [&](const doc::ParamSpec& p) { return p.name == name; });
}

void check_entry(const CorpusEntry& e, const std::string& where) {
  const auto* base = sim::find_logical(e.nf_class, e.label);
  if (!base) throw Error(ErrorCode::invariant, "label " + e.label + " is not a base function", where);
  const auto& req = e.requirement;
  for (const auto& [from, to] : e.param_map) {
    if (!has_param(req.params, from)) throw Error(ErrorCode::invariant, "unknown requirement param " + from, where);
    if (!has_param(base->capability.params, to)) throw Error(ErrorCode::invariant, "unknown logical param " + to, where);
  }
  for (const auto& [from, to] : e.return_map) {
    if (!has_param(req.returns, from)) throw Error(ErrorCode::invariant, "unknown requirement return " + from, where);
    if (!has_param(base->capability.returns, to)) throw Error(ErrorCode::invariant, "unknown logical return " + to, where);
  }
  for (const auto& p : base->capability.params) {
    bool mapped = std::any_of(e.param_map.begin(), e.param_map.end(), [&](const auto& kv) { return kv.second == p.name; });
    if (!mapped) throw Error(ErrorCode::invariant, "logical param " + p.name + " is never supplied", where);
  }
}

}  // namespace

Corpus Corpus::parse(std::string_view text) {
  auto root = json_io::parse_text(text);
  json_io::require_object(root, "");
  json_io::check_kind(root, "benchmark_corpus");
  json_io::check_schema_version(root);
  Corpus c;
  c.entries = read_entries(root, "entries");
  c.augmented = read_entries(root, "augmented");
  const auto& un = json_io::require(root, "unsupported", "");
  for (std::size_t i = 0; i < un.size(); ++i) {
    auto p = json_io::index_path("unsupported", i);
    UnsupportedEntry u;
    u.nf_class = read_class(un[i], p);
    u.requirement = json_io::read_requirement(json_io::require(un[i], "requirement", p), json_io::join_path(p, "requirement"));
    c.unsupported.push_back(std::move(u));
  }
  return c;
}

Corpus Corpus::load(const std::string& path) { return parse(doc::read_file(path)); }

const Corpus& Corpus::standard() {
  static const Corpus corpus = [] {
    auto c = load(data_path("corpus/requirements.json"));
    validate(c);
    return c;
  }();
  return corpus;
}

std::vector<const CorpusEntry*> Corpus::for_class(doc::NfClass nf_class) const {
  std::vector<const CorpusEntry*> out;
  for (const auto& e : entries) {
    if (e.nf_class == nf_class) out.push_back(&e);
  }
  return out;
}

const CorpusEntry* Corpus::find(std::string_view requirement_name) const {
  for (const auto* list : {&entries, &augmented}) {
    for (const auto& e : *list) {
      if (e.requirement.name == requirement_name) return &e;
    }
  }
  return nullptr;
}

std::string Corpus::serialize() const {
  Json root = {{"kind", "benchmark_corpus"}, {"schema_version", doc::kSchemaVersion}};
  Json es = Json::array(), as = Json::array(), us = Json::array();
  for (const auto& e : entries) es.push_back(write_entry(e));
  for (const auto& e : augmented) as.push_back(write_entry(e));
  for (const auto& u : unsupported) {
    us.push_back({{"nf_class", doc::to_string(u.nf_class)}, {"requirement", json_io::write(u.requirement)}});
  }
  root["entries"] = es;
  root["augmented"] = as;
  root["unsupported"] = us;
  return json_io::dump_canonical(root);
}

void validate(const Corpus& corpus) {
  std::set<std::string> names;
  auto unique = [&](const std::string& name, const std::string& where) {
    if (!names.insert(name).second) throw Error(ErrorCode::invariant, "duplicate requirement " + name, where);
  };
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    auto where = json_io::index_path("entries", i);
    unique(corpus.entries[i].requirement.name, where);
    check_entry(corpus.entries[i], where);
  }
  for (std::size_t i = 0; i < corpus.augmented.size(); ++i) {
    auto where = json_io::index_path("augmented", i);
    const auto& e = corpus.augmented[i];
    unique(e.requirement.name, where);
    if (!e.requirement.augmentation_hint) throw Error(ErrorCode::invariant, "augmented entry without a hint", where);
    check_entry(e, where);
  }
  for (const auto& u : corpus.unsupported) unique(u.requirement.name, "unsupported");
}

codegen::ReferenceMap references(const Corpus& corpus) {
  codegen::ReferenceMap out;
  for (const auto* list : {&corpus.entries, &corpus.augmented}) {
    for (const auto& e : *list) out[e.requirement.name] = {e.label, e.param_map, e.return_map};
  }
  return out;
}

}  // namespace ifgen::bench
