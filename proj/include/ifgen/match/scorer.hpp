#pragma once

#include <memory>
#include <string>

#include "ifgen/doc/documents.hpp"
#include "ifgen/gen/retrieval.hpp"
#include "ifgen/match/synonyms.hpp"

namespace ifgen::match {

struct MatchingThresholds {
  double exact_floor = 0.90;
  double closest_floor = 0.55;

  /// Throws Error(config) unless 0 < closest_floor < exact_floor <= 1.
  void validate() const;
};

struct ScoreWeights {
  double description = 0.5;
  double name = 0.3;
  double params = 0.2;
};

struct MatchingConfig {
  ScoreWeights weights;
  MatchingThresholds thresholds;
  int max_attempts = 3;
  std::size_t top_k = 3;

  static MatchingConfig parse(std::string_view text);
  static MatchingConfig load(const std::string& path);
  /// data/config/matching.json
  static MatchingConfig standard();
};

/// integer<->real always; text<->numeric only when both carry units;
/// boolean only with boolean; same-type otherwise. When both sides carry
/// units they must share a dimension.
bool types_compatible(const doc::ParamSpec& a, const doc::ParamSpec& b);

/// Size of a maximum one-to-one pairing of `from` onto `to` under
/// types_compatible.
std::size_t compatible_pairs(const std::vector<doc::ParamSpec>& from, const std::vector<doc::ParamSpec>& to);

/// Both parameter and return lists pair up completely, in both directions.
bool signature_compatible(const std::vector<doc::ParamSpec>& req_params, const std::vector<doc::ParamSpec>& req_returns,
                          const std::vector<doc::ParamSpec>& cap_params, const std::vector<doc::ParamSpec>& cap_returns);

struct ScoreBreakdown {
  double description = 0;
  double name = 0;
  double params = 0;
  double total = 0;
};

class Scorer {
 public:
  Scorer(const SynonymTable& synonyms, std::shared_ptr<const gen::Embedder> embedder, ScoreWeights weights = {});
  /// Synonym table, trigram embedder and weights from the shipped config.
  static const Scorer& standard();

  ScoreBreakdown breakdown(const doc::ControlFunctionRequirement& req, const doc::ControlCapability& cap) const;
  double score(const doc::ControlFunctionRequirement& req, const doc::ControlCapability& cap) const {
    return breakdown(req, cap).total;
  }
  /// Scores a requirement against any named signature (capabilities or
  /// internal functions).
  ScoreBreakdown breakdown(const doc::ControlFunctionRequirement& req, std::string_view name, std::string_view description,
                           const std::vector<doc::ParamSpec>& params) const;

  /// Jaccard overlap of canonical name tokens.
  double name_overlap(std::string_view a, std::string_view b) const;
  /// Fraction of `req` parameters with a compatible counterpart (1 if none).
  static double param_compatibility(const std::vector<doc::ParamSpec>& req, const std::vector<doc::ParamSpec>& cap);

  const SynonymTable& synonyms() const { return synonyms_; }
  const gen::Embedder& embedder() const { return *embedder_; }
  const ScoreWeights& weights() const { return weights_; }

 private:
  const SynonymTable& synonyms_;
  std::shared_ptr<const gen::Embedder> embedder_;
  ScoreWeights weights_;
};

}  // namespace ifgen::match
