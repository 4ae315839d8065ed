#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ifgen/codegen/validation.hpp"
#include "ifgen/doc/documents.hpp"

namespace ifgen::bench {

/// A labeled requirement. `label` is the base-catalog function that
/// implements it; the maps take requirement parameter and return names to
/// logical ones.
struct CorpusEntry {
  doc::NfClass nf_class = doc::NfClass::other;
  std::string label;
  doc::ControlFunctionRequirement requirement;
  std::map<std::string, std::string> param_map;
  std::map<std::string, std::string> return_map;
  ArgMap example;  // sample arguments for demos; may omit parameters
};

struct UnsupportedEntry {
  doc::NfClass nf_class = doc::NfClass::other;
  doc::ControlFunctionRequirement requirement;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  // Requirements carrying augmentation hints; not part of the accuracy set.
  std::vector<CorpusEntry> augmented;
  // Requirements no NF implements.
  std::vector<UnsupportedEntry> unsupported;

  static Corpus parse(std::string_view text);
  static Corpus load(const std::string& path);
  /// data/corpus/requirements.json, loaded once.
  static const Corpus& standard();

  std::vector<const CorpusEntry*> for_class(doc::NfClass nf_class) const;
  /// Looks up by requirement name across entries and augmented entries.
  const CorpusEntry* find(std::string_view requirement_name) const;

  std::string serialize() const;
};

/// Labels name base-catalog functions of the entry's class, every map key
/// and value names a real parameter, and requirement names are unique.
/// Throws Error(invariant) listing the first problem.
void validate(const Corpus& corpus);

/// Reference mappings for every entry and augmented entry, keyed by
/// requirement name.
codegen::ReferenceMap references(const Corpus& corpus);

}  // namespace ifgen::bench
