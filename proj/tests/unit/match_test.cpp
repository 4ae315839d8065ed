#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ifgen/backends.hpp"
#include "ifgen/bench/corpus.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/hash.hpp"
#include "ifgen/match/agent.hpp"
#include "ifgen/sim/catalog.hpp"
#include "ifgen/sim/variant.hpp"
#include "support/random_docs.hpp"

namespace ifgen::match {
namespace {

using doc::ParamSpec;

ParamSpec param(std::string name, SemanticType type, std::optional<std::string> unit = std::nullopt) {
  return ParamSpec{std::move(name), type, std::move(unit), ""};
}

doc::ControlFunctionRequirement setpower() {
  return {"setpower", "Set the transmission power of a radio.",
          {param("radioID", SemanticType::text), param("pow", SemanticType::text, "dBm")},
          {param("response", SemanticType::boolean)},
          std::nullopt};
}

doc::CapabilityDocument base_caps(doc::NfClass cls) {
  doc::CapabilityDocument d;
  d.nf_id = "base-1";
  d.nf_class = cls;
  d.vendor = "base";
  d.supported_encodings = {"json"};
  for (const auto& e : sim::base_catalog(cls)) d.capabilities.push_back(e.capability);
  return d;
}

// Trigram cosine written from the definition: lowercase, non-alphanumeric
// runs become one space, pad with spaces, count trigrams in 256 FNV buckets.
double trigram_cosine(const std::string& a, const std::string& b) {
  auto counts = [](const std::string& s) {
    std::string f = " ";
    for (unsigned char c : s) {
      if (std::isalnum(c)) {
        f += static_cast<char>(std::tolower(c));
      } else if (f.back() != ' ') {
        f += ' ';
      }
    }
    if (f.back() != ' ') f += ' ';
    std::map<std::uint64_t, double> m;
    for (std::size_t i = 0; i + 3 <= f.size(); ++i) m[gen::fnv1a64(f.substr(i, 3)) % 256] += 1;
    return m;
  };
  auto x = counts(a), y = counts(b);
  double dot = 0, nx = 0, ny = 0;
  for (auto [k, v] : x) {
    nx += v * v;
    if (y.count(k)) dot += v * y[k];
  }
  for (auto [k, v] : y) ny += v * v;
  return dot / std::sqrt(nx * ny);
}

TEST(Synonyms, RunTogetherNamesSegment) {
  const auto& syn = SynonymTable::standard();
  EXPECT_EQ(syn.canonical_tokens("setchn"), (std::vector<std::string>{"set", "channel"}));
  EXPECT_EQ(syn.canonical_tokens("setpower"), (std::vector<std::string>{"set", "power"}));
  EXPECT_EQ(syn.canonical_set("DropUserEquipment"), syn.canonical_set("release_ue"));
  EXPECT_EQ(syn.canonical_set("drv_apply_rate_limit"), syn.canonical_set("set_rate_limit"));
}

TEST(Scorer, NameOverlapExamples) {
  const auto& s = Scorer::standard();
  EXPECT_DOUBLE_EQ(s.name_overlap("setchn", "set_channel"), 1.0);
  EXPECT_DOUBLE_EQ(s.name_overlap("releaseUE", "release_ue"), 1.0);
  EXPECT_NEAR(s.name_overlap("setpower", "set_tx_power"), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.name_overlap("getRateStats", "reboot"), 0.0);
}

TEST(Scorer, CapabilityMatchesItselfPerfectly) {
  const auto& s = Scorer::standard();
  for (auto cls : {doc::NfClass::wlan_ap, doc::NfClass::gnb}) {
    for (const auto& e : sim::base_catalog(cls)) {
      const auto& c = e.capability;
      doc::ControlFunctionRequirement r{c.name, c.description, c.params, c.returns, std::nullopt};
      EXPECT_NEAR(s.score(r, c), 1.0, 1e-12) << c.name;
    }
  }
}

TEST(Scorer, SetpowerAgainstSetTxPowerMatchesHandComputation) {
  const auto& s = Scorer::standard();
  const auto* cap = sim::find_logical(doc::NfClass::wlan_ap, "set_tx_power");
  auto req = setpower();
  double cos = trigram_cosine(req.description, cap->capability.description);
  double expected = 0.5 * cos + 0.3 * (2.0 / 3.0) + 0.2 * 1.0;
  auto b = s.breakdown(req, cap->capability);
  EXPECT_NEAR(b.description, cos, 1e-12);
  EXPECT_NEAR(b.total, expected, 1e-12);
  // Frozen from the computation above.
  EXPECT_NEAR(b.total, 0.8423391873207331, 1e-12);
}

TEST(Scorer, CompatiblePairsMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 500; ++round) {
    auto a = testing::random_params(rng);
    auto b = testing::random_params(rng);
    // Brute force over assignments of a into distinct b slots (or none).
    std::size_t best = 0;
    std::vector<int> assign(a.size(), -1);
    std::function<void(std::size_t, std::vector<bool>&, std::size_t)> go = [&](std::size_t i, std::vector<bool>& used, std::size_t n) {
      if (i == a.size()) {
        best = std::max(best, n);
        return;
      }
      go(i + 1, used, n);
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (used[j] || !types_compatible(a[i], b[j])) continue;
        used[j] = true;
        go(i + 1, used, n + 1);
        used[j] = false;
      }
    };
    std::vector<bool> used(b.size(), false);
    go(0, used, 0);
    EXPECT_EQ(compatible_pairs(a, b), best);
  }
}

TEST(Scorer, TypeCompatibilityRules) {
  EXPECT_TRUE(types_compatible(param("a", SemanticType::integer), param("b", SemanticType::real)));
  EXPECT_TRUE(types_compatible(param("a", SemanticType::text, "dBm"), param("b", SemanticType::real, "mW")));
  EXPECT_FALSE(types_compatible(param("a", SemanticType::text), param("b", SemanticType::real, "mW")));
  EXPECT_FALSE(types_compatible(param("a", SemanticType::real, "ms"), param("b", SemanticType::real, "mW")));
  EXPECT_FALSE(types_compatible(param("a", SemanticType::boolean), param("b", SemanticType::integer)));
}

TEST(Classify, PowerRequirementIsClosestOnBaseCatalog) {
  auto backend = make_backend("mock");
  auto caps = base_caps(doc::NfClass::wlan_ap);
  auto out = classify(setpower(), caps, Scorer::standard(), MatchingConfig::standard(), *backend);
  EXPECT_EQ(out.decision, Decision::closest);
  EXPECT_EQ(out.capability_name, "set_tx_power");
  EXPECT_LT(out.score, 1.0);
  EXPECT_GE(out.score, 0.55);
}

TEST(Classify, SelfRequirementIsExact) {
  auto backend = make_backend("mock");
  auto caps = base_caps(doc::NfClass::gnb);
  const auto& c = sim::find_logical(doc::NfClass::gnb, "release_ue")->capability;
  doc::ControlFunctionRequirement r{c.name, c.description, c.params, c.returns, std::nullopt};
  auto out = classify(r, caps, Scorer::standard(), MatchingConfig::standard(), *backend);
  EXPECT_EQ(out.decision, Decision::exact);
  EXPECT_EQ(out.score, 1.0);
  EXPECT_EQ(out.capability_name, "release_ue");
}

TEST(Classify, UnrelatedRequirementIsUnsupported) {
  auto backend = make_backend("mock");
  const auto& un = bench::Corpus::standard().unsupported;
  ASSERT_FALSE(un.empty());
  auto profile = sim::standard_profile("ap-vendor1");
  auto out = classify(un[0].requirement, profile->capability_doc, Scorer::standard(), MatchingConfig::standard(), *backend);
  EXPECT_EQ(out.requirement_name, "quantumEntangleUE");
  EXPECT_EQ(out.decision, Decision::unsupported);
  EXPECT_FALSE(out.capability_name);
  try {
    build_cfr({out}, {un[0].requirement}, {{"json"}, {"json"}}, "ric-1", "ap-vendor1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::all_unsupported);
    EXPECT_STREQ(e.what(), "unable to support required control functions");
  }
}

TEST(Classify, HintedRequirementBecomesAugmented) {
  auto backend = make_backend("mock");
  const auto& corpus = bench::Corpus::standard();
  const auto* aoi = corpus.find("setRateAoI");
  ASSERT_NE(aoi, nullptr);
  auto profile = sim::standard_profile("ap-vendor1");
  auto out = classify(aoi->requirement, profile->capability_doc, Scorer::standard(), MatchingConfig::standard(), *backend);
  EXPECT_EQ(out.decision, Decision::closest);
  EXPECT_EQ(out.capability_name, profile->by_logical("set_rate")->capability_name);
  auto cfr = build_cfr({out}, {aoi->requirement}, {{"flatbin", "json"}, {"json"}}, "ric-1", "ap-vendor1");
  ASSERT_EQ(cfr.entries.size(), 1u);
  EXPECT_EQ(cfr.entries[0].match_kind, doc::MatchKind::augmented);
  EXPECT_EQ(cfr.encoding_scheme, "json");
  EXPECT_TRUE(doc::validate(cfr).ok());
}

TEST(Classify, TopThreeAndThresholdInvariantsHold) {
  std::mt19937_64 rng(5);
  auto backend = make_backend("mock");
  auto config = MatchingConfig::standard();
  const auto& scorer = Scorer::standard();
  for (int round = 0; round < 200; ++round) {
    auto caps = testing::random_capability_document(rng);
    auto cfr = testing::random_cfr(rng);
    const auto& req = cfr.entries[0].requirement;
    auto out = classify(req, caps, scorer, config, *backend);
    auto all = rank_candidates(req, caps, scorer);
    ASSERT_EQ(out.candidates.size(), std::min<std::size_t>(3, caps.capabilities.size()));
    for (std::size_t i = 0; i < out.candidates.size(); ++i) {
      EXPECT_EQ(out.candidates[i].name, all[i].name);
      if (i) EXPECT_GE(out.candidates[i - 1].score, out.candidates[i].score);
    }
    switch (out.decision) {
      case Decision::exact: {
        EXPECT_EQ(out.score, 1.0);
        const auto* c = caps.find(*out.capability_name);
        EXPECT_TRUE(signature_compatible(req.params, req.returns, c->params, c->returns));
        EXPECT_GE(scorer.score(req, *c), config.thresholds.exact_floor);
        break;
      }
      case Decision::closest:
        EXPECT_LT(out.score, 1.0);
        EXPECT_GE(out.score, config.thresholds.closest_floor);
        break;
      case Decision::unsupported:
        EXPECT_FALSE(out.capability_name);
        EXPECT_LT(all[0].score, config.thresholds.closest_floor);
        break;
    }
  }
}

TEST(Classify, AddingAnIdenticalCapabilityMakesItExact) {
  std::mt19937_64 rng(9);
  auto backend = make_backend("mock");
  for (int round = 0; round < 100; ++round) {
    auto caps = testing::random_capability_document(rng);
    auto req = testing::random_cfr(rng).entries[0].requirement;
    req.augmentation_hint.reset();
    caps.capabilities.push_back({req.name + "_x", req.description, req.params, req.returns, {}});
    // The copy's name differs, so the name term may drop; everything else is 1.
    auto out = classify(req, caps, Scorer::standard(), MatchingConfig::standard(), *backend);
    EXPECT_NE(out.decision, Decision::unsupported);
  }
}

TEST(Classify, IsDeterministic) {
  auto b1 = make_backend("mock", 42, 0.3);
  auto b2 = make_backend("mock", 42, 0.3);
  auto profile = sim::standard_profile("gnb-vendor4");
  for (const auto* e : bench::Corpus::standard().for_class(doc::NfClass::gnb)) {
    auto x = classify(e->requirement, profile->capability_doc, Scorer::standard(), MatchingConfig::standard(), *b1);
    auto y = classify(e->requirement, profile->capability_doc, Scorer::standard(), MatchingConfig::standard(), *b2);
    EXPECT_EQ(x.capability_name, y.capability_name);
    EXPECT_EQ(x.attempts, y.attempts);
    EXPECT_EQ(x.wall_time, y.wall_time);
    EXPECT_EQ(x.usage, y.usage);
  }
}

TEST(Classify, InvalidRepliesFallBackToRanking) {
  auto backend = make_backend("mock", 1, 1.0);
  auto profile = sim::standard_profile("ap-vendor2");
  auto req = bench::Corpus::standard().entries[0].requirement;
  auto out = classify(req, profile->capability_doc, Scorer::standard(), MatchingConfig::standard(), *backend);
  EXPECT_EQ(out.attempts, 3);
  EXPECT_TRUE(out.fell_back);
  EXPECT_EQ(out.capability_name, profile->by_logical("set_channel")->capability_name);
}

TEST(Classify, EmptyCapabilityListIsAPreconditionError) {
  auto backend = make_backend("mock");
  doc::CapabilityDocument empty;
  try {
    classify(setpower(), empty, Scorer::standard(), MatchingConfig::standard(), *backend);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::precondition);
  }
}

TEST(Encoding, FirstSourcePreferenceTheDestinationSupports) {
  EXPECT_EQ((EncodingNegotiation{{"flatbin", "json"}, {"json"}}.choose()), "json");
  EXPECT_EQ((EncodingNegotiation{{"flatbin", "json"}, {"json", "flatbin"}}.choose()), "flatbin");
  try {
    EncodingNegotiation{{"flatbin"}, {"json"}}.choose();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::no_common_encoding);
  }
}

TEST(Session, UnreachableSourceAndClientSpec) {
  auto backend = make_backend("mock");
  std::vector<doc::ControlFunctionRequirement> reqs{setpower()};
  try {
    run_matching_session(reqs, [] () -> doc::CapabilityDocument { throw Error(ErrorCode::transport, "refused"); },
                         MatchingConfig::standard(), *backend, Scorer::standard());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unreachable);
  }
  auto profile = sim::standard_profile("gnb-vendor1");
  std::vector<doc::ControlFunctionRequirement> gnb_reqs;
  for (const auto* e : bench::Corpus::standard().for_class(doc::NfClass::gnb)) gnb_reqs.push_back(e->requirement);
  auto caps = profile->capability_doc;
  auto result = run_matching_session(gnb_reqs, [&] { return caps; }, MatchingConfig::standard(), *backend, Scorer::standard());
  ASSERT_TRUE(result.cfr);
  EXPECT_EQ(result.cfr->encoding_scheme, "flatbin");
  EXPECT_EQ(result.cfr->dest_nf, "gnb-vendor1");
  auto spec = make_client_spec(*result.cfr, "127.0.0.1", 7805);
  EXPECT_EQ(spec.functions.size(), result.cfr->entries.size());
  ASSERT_NE(spec.find("releaseUE"), nullptr);
  EXPECT_EQ(spec.find("releaseUE")->params.size(), 1u);
}

TEST(Config, RejectsBadThresholdsAndWeights) {
  EXPECT_THROW(MatchingConfig::parse(R"({"kind":"matching_config","schema_version":"1.0.0",
    "weights":{"description":0.5,"name":0.3,"params":0.3},
    "thresholds":{"exact_floor":0.9,"closest_floor":0.55},"max_attempts":3,"top_k":3})"), Error);
  EXPECT_THROW(MatchingConfig::parse(R"({"kind":"matching_config","schema_version":"1.0.0",
    "weights":{"description":0.5,"name":0.3,"params":0.2},
    "thresholds":{"exact_floor":0.5,"closest_floor":0.55},"max_attempts":3,"top_k":3})"), Error);
}

}  // namespace
}  // namespace ifgen::match
