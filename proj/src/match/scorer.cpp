#include "ifgen/match/scorer.hpp"

#include <algorithm>
#include <functional>

#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/paths.hpp"
#include "ifgen/sim/units.hpp"

namespace ifgen::match {

void MatchingThresholds::validate() const {
  if (!(closest_floor > 0.0 && closest_floor < exact_floor && exact_floor <= 1.0)) {
    throw Error(ErrorCode::config, "thresholds must satisfy 0 < closest_floor < exact_floor <= 1");
  }
}

MatchingConfig MatchingConfig::parse(std::string_view text) {
  using namespace doc::json_io;
  auto j = parse_text(text);
  require_object(j, "");
  check_kind(j, "matching_config");
  check_schema_version(j);
  MatchingConfig c;
  const auto& w = require(j, "weights", "");
  c.weights.description = read_number(w, "description", "weights");
  c.weights.name = read_number(w, "name", "weights");
  c.weights.params = read_number(w, "params", "weights");
  double sum = c.weights.description + c.weights.name + c.weights.params;
  if (c.weights.description < 0 || c.weights.name < 0 || c.weights.params < 0 || std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::config, "weights must be non-negative and sum to 1", "weights");
  }
  const auto& t = require(j, "thresholds", "");
  c.thresholds.exact_floor = read_number(t, "exact_floor", "thresholds");
  c.thresholds.closest_floor = read_number(t, "closest_floor", "thresholds");
  c.thresholds.validate();
  c.max_attempts = static_cast<int>(read_number(j, "max_attempts", ""));
  c.top_k = static_cast<std::size_t>(read_number(j, "top_k", ""));
  if (c.max_attempts < 1 || c.top_k < 1) throw Error(ErrorCode::config, "max_attempts and top_k must be at least 1");
  return c;
}

MatchingConfig MatchingConfig::load(const std::string& path) { return parse(doc::read_file(path)); }

MatchingConfig MatchingConfig::standard() { return load(data_path("config/matching.json")); }

namespace {

bool numeric(SemanticType t) { return t == SemanticType::integer || t == SemanticType::real; }

}  // namespace

bool types_compatible(const doc::ParamSpec& a, const doc::ParamSpec& b) {
  if (a.unit && b.unit && !sim::same_dimension(*a.unit, *b.unit)) return false;
  if (a.type == b.type) return true;
  if (numeric(a.type) && numeric(b.type)) return true;
  bool text_numeric = (a.type == SemanticType::text && numeric(b.type)) || (b.type == SemanticType::text && numeric(a.type));
  return text_numeric && a.unit && b.unit;
}

std::size_t compatible_pairs(const std::vector<doc::ParamSpec>& from, const std::vector<doc::ParamSpec>& to) {
  // Kuhn's augmenting paths; lists are short.
  std::vector<int> owner(to.size(), -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& seen) {
    for (std::size_t j = 0; j < to.size(); ++j) {
      if (seen[j] || !types_compatible(from[i], to[j])) continue;
      seen[j] = true;
      if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), seen)) {
        owner[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  std::size_t n = 0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    std::vector<bool> seen(to.size(), false);
    if (augment(i, seen)) ++n;
  }
  return n;
}

bool signature_compatible(const std::vector<doc::ParamSpec>& req_params, const std::vector<doc::ParamSpec>& req_returns,
                          const std::vector<doc::ParamSpec>& cap_params, const std::vector<doc::ParamSpec>& cap_returns) {
  return req_params.size() == cap_params.size() && req_returns.size() == cap_returns.size() &&
         compatible_pairs(req_params, cap_params) == req_params.size() &&
         compatible_pairs(req_returns, cap_returns) == req_returns.size();
}

Scorer::Scorer(const SynonymTable& synonyms, std::shared_ptr<const gen::Embedder> embedder, ScoreWeights weights)
    : synonyms_(synonyms), embedder_(std::move(embedder)), weights_(weights) {}

const Scorer& Scorer::standard() {
  static const Scorer s(SynonymTable::standard(), std::make_shared<gen::TrigramEmbedder>(),
                        MatchingConfig::standard().weights);
  return s;
}

double Scorer::name_overlap(std::string_view a, std::string_view b) const {
  auto sa = synonyms_.canonical_set(a);
  auto sb = synonyms_.canonical_set(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

double Scorer::param_compatibility(const std::vector<doc::ParamSpec>& req, const std::vector<doc::ParamSpec>& cap) {
  if (req.empty()) return 1.0;
  return static_cast<double>(compatible_pairs(req, cap)) / static_cast<double>(req.size());
}

ScoreBreakdown Scorer::breakdown(const doc::ControlFunctionRequirement& req, std::string_view name,
                                 std::string_view description, const std::vector<doc::ParamSpec>& params) const {
  ScoreBreakdown b;
  b.description = std::clamp(gen::cosine(*embedder_, req.description, description), 0.0, 1.0);
  b.name = name_overlap(req.name, name);
  b.params = param_compatibility(req.params, params);
  b.total = std::clamp(weights_.description * b.description + weights_.name * b.name + weights_.params * b.params, 0.0, 1.0);
  return b;
}

ScoreBreakdown Scorer::breakdown(const doc::ControlFunctionRequirement& req, const doc::ControlCapability& cap) const {
  return breakdown(req, cap.name, cap.description, cap.params);
}

}  // namespace ifgen::match
