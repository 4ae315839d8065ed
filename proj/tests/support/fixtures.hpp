#pragma once

// CFRs built straight from corpus labels, bypassing the matching agent.

#include <string>
#include <vector>

#include "ifgen/bench/corpus.hpp"
#include "ifgen/sim/variant.hpp"

namespace ifgen::testing {

inline doc::CfrEntry labeled_entry(const bench::CorpusEntry& e, const sim::VendorProfile& profile) {
  doc::CfrEntry out;
  out.requirement = e.requirement;
  out.matched_capability_name = profile.by_logical(e.label)->capability_name;
  out.match_kind = e.requirement.augmentation_hint ? doc::MatchKind::augmented : doc::MatchKind::closest;
  out.match_score = 0.8;
  return out;
}

inline doc::CfrDocument labeled_cfr(const sim::VendorProfile& profile, const std::vector<std::string>& names,
                                    const std::string& encoding = "json") {
  const auto& corpus = bench::Corpus::standard();
  doc::CfrDocument cfr;
  cfr.source_nf = "ric-1";
  cfr.dest_nf = profile.vendor;
  cfr.encoding_scheme = encoding;
  for (const auto& n : names) cfr.entries.push_back(labeled_entry(*corpus.find(n), profile));
  return cfr;
}

inline doc::CfrDocument labeled_cfr_all(const sim::VendorProfile& profile, bool with_augmented = true) {
  const auto& corpus = bench::Corpus::standard();
  std::vector<std::string> names;
  for (const auto* e : corpus.for_class(profile.nf_class)) names.push_back(e->requirement.name);
  if (with_augmented) {
    for (const auto& e : corpus.augmented) {
      if (e.nf_class == profile.nf_class) names.push_back(e.requirement.name);
    }
  }
  return labeled_cfr(profile, names);
}

}  // namespace ifgen::testing
