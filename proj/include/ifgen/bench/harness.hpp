#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifgen/bench/corpus.hpp"
#include "ifgen/bench/variation.hpp"
#include "ifgen/gen/backend.hpp"
#include "ifgen/gen/cost.hpp"
#include "ifgen/match/scorer.hpp"

namespace ifgen::bench {

enum class Task { matching, codegen, augmentation };
std::string_view to_string(Task t);
std::optional<Task> parse_task(std::string_view s);

struct MetricsRecord {
  Task task = Task::matching;
  std::string series;  // backend id
  std::string subject;
  int attempts = 0;
  std::chrono::milliseconds wall_time{0};
  gen::TokenUsage usage;
  gen::Money cost;
  bool success = false;
  std::string note;

  bool operator==(const MetricsRecord&) const = default;
};

enum class VariationMode { rule, backend };

struct VariationOptions {
  VariationMode mode = VariationMode::rule;
  const ParaphraseRules* rules = nullptr;  // standard rules when null
  gen::Backend* backend = nullptr;         // backend mode only
};

/// Variations 0..n-1 of a requirement. An empty rule set yields n copies of
/// the requirement itself.
std::vector<doc::ControlFunctionRequirement> generate_variations(const doc::ControlFunctionRequirement& req, int n,
                                                                 const VariationOptions& options = {},
                                                                 gen::TokenUsage* usage = nullptr);

/// Variations whose top-ranked capability on the vendor used for them is not
/// the labeled one, as "requirement#k@nf" strings.
std::vector<std::string> label_violations(const Corpus& corpus, int variations, const match::Scorer& scorer);

struct MatchingBenchOptions {
  int variations = 10;
  VariationMode mode = VariationMode::rule;
};

struct MatchingBenchResult {
  std::vector<MetricsRecord> records;  // one per requirement and variation
  int correct = 0;
  int total = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

/// Variation k of every entry is matched against <class>-vendor(k mod 5 + 1)
/// in one session per class. Correct means the labeled capability was
/// picked as exact or closest. Throws Error(precondition) on an empty corpus.
MatchingBenchResult run_matching_benchmark(const Corpus& corpus, gen::Backend& backend, const gen::PriceTable& prices,
                                           const MatchingBenchOptions& options = {});

struct CodegenBenchOptions {
  int max_attempts = 5;
};

/// Requirements the codegen benchmark provisions per class: the first ten
/// corpus entries plus the augmented one.
std::vector<doc::ControlFunctionRequirement> codegen_requirements(const Corpus& corpus, doc::NfClass nf_class);

/// Matching then repair_loop for each of the ten standard profiles. One
/// record per profile; success is convergence.
std::vector<MetricsRecord> run_codegen_benchmark(const Corpus& corpus, gen::Backend& backend,
                                                 const gen::PriceTable& prices, const CodegenBenchOptions& options = {});

struct ScenarioResult {
  std::string scenario;  // "aoi" or "telemetry"
  std::string nf_id;
  int vectors = 0;
  int passed = 0;
  int guarded = 0;  // vectors the AoI guard rejected
  std::vector<std::string> failures;  // first few only
  MetricsRecord augmented;
  MetricsRecord baseline;
};

struct AugmentationBenchResult {
  std::vector<ScenarioResult> scenarios;
  std::vector<MetricsRecord> records() const;
  bool all_passed() const;
};

/// Provisions setRateAoI on every AP and getUEStatsTimestamped on every gNB
/// next to their plain counterparts (setLinkRate, ueStats), then drives both
/// bindings in lockstep with `vectors` random calls each.
AugmentationBenchResult run_augmentation_scenarios(const Corpus& corpus, gen::Backend& backend,
                                                   const gen::PriceTable& prices, std::uint64_t seed = 0,
                                                   int vectors = 100);

}  // namespace ifgen::bench
