#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ifgen/doc/documents.hpp"
#include "ifgen/gen/backend.hpp"

namespace ifgen::bench {

/// Word substitutions, padding phrases and the article list used to
/// paraphrase requirement descriptions.
struct ParaphraseRules {
  std::map<std::string, std::vector<std::string>, std::less<>> substitutions;
  std::vector<std::string> padding;
  std::vector<std::string> articles;

  static ParaphraseRules parse(std::string_view text);
  /// data/config/paraphrase.json, loaded once.
  static const ParaphraseRules& standard();
};

/// Rule paraphrase of a description for variation k:
/// - every word with substitutions takes alternative k mod n,
/// - for even k, "VERB X of Y" becomes "VERB Y X",
/// - for k mod 3 == 1, padding phrase (k / 3) mod n goes before the final
///   punctuation.
std::string paraphrase(std::string_view description, int k, const ParaphraseRules& rules);

/// Identifier restyling for variation k: snake, camel, then the original.
std::string restyle_name(std::string_view name, int k);

/// Variation k of a requirement: restyled name, paraphrased description and
/// unchanged parameter lists.
doc::ControlFunctionRequirement vary(const doc::ControlFunctionRequirement& req, int k,
                                     const ParaphraseRules& rules = ParaphraseRules::standard());

/// Same, with the description paraphrased by a backend ("bench.paraphrase").
/// Falls back to the rule paraphrase when the reply is empty or multi-line.
doc::ControlFunctionRequirement vary_with_backend(const doc::ControlFunctionRequirement& req, int k,
                                                  gen::Backend& backend, gen::TokenUsage* usage = nullptr);

/// Mock rule for "bench.paraphrase": reads hints {description, k}.
std::string paraphrase_rule(const gen::GenerationRequest& request);

}  // namespace ifgen::bench
