#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ifgen::match {

/// Name canonicalization: identifier splitting, segmentation of run-together
/// names ("setchn"), multi-word phrases ("user_equipment"), synonym folding
/// ("chn" -> "channel") and dropping of noise tokens (prefixes, unit
/// suffixes).
class SynonymTable {
 public:
  /// `{"synonyms": {alias: canonical}, "phrases": {"a_b": canonical},
  ///   "ignore": [...], "words": [...]}`
  static SynonymTable parse(std::string_view text);
  static SynonymTable load(const std::string& path);
  /// data/config/synonyms.json, loaded once.
  static const SynonymTable& standard();

  std::string canonical(std::string_view token) const;
  /// Splits a run-together lowercase token into lexicon words; returns the
  /// token unchanged when it is already a word or cannot be segmented.
  std::vector<std::string> segment(std::string_view token) const;
  /// Canonical token sequence of an identifier.
  std::vector<std::string> canonical_tokens(std::string_view identifier) const;
  std::set<std::string> canonical_set(std::string_view identifier) const;

  bool in_lexicon(std::string_view word) const { return lexicon_.count(std::string(word)) > 0; }

 private:
  std::map<std::string, std::string, std::less<>> synonyms_;
  std::map<std::vector<std::string>, std::string> phrases_;
  std::set<std::string, std::less<>> ignore_;
  std::set<std::string, std::less<>> lexicon_;
};

}  // namespace ifgen::match
