#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ifgen/backends.hpp"
#include "ifgen/bench/corpus.hpp"
#include "ifgen/codegen/validation.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/hash.hpp"
#include "ifgen/sim/variant.hpp"
#include "support/fixtures.hpp"

namespace ifgen::codegen {
namespace {

using doc::ParamSpec;
using testing::labeled_cfr;
using testing::labeled_cfr_all;

constexpr std::int64_t kStart = 1'700'000'000'000;

ParamSpec param(std::string name, SemanticType type, std::optional<std::string> unit = std::nullopt) {
  return ParamSpec{std::move(name), type, std::move(unit), ""};
}

BindingSpec clean_binding(const doc::CfrDocument& cfr, const sim::VendorProfile& p) {
  auto backend = make_backend("mock");
  return generate_binding(cfr, p.api, p.capability_doc, *backend).spec;
}

struct Rig {
  std::shared_ptr<const sim::VendorProfile> profile;
  std::shared_ptr<sim::SimClock> clock;
  std::shared_ptr<sim::VendorExecutor> executor;
  std::unique_ptr<BindingRuntime> runtime;

  Rig(const std::string& nf, const std::vector<std::string>& names) {
    profile = sim::standard_profile(nf);
    clock = std::make_shared<sim::SimClock>(sim::SimClock::manual(kStart));
    executor = std::make_shared<sim::VendorExecutor>(profile, clock, sim::initial_state(profile->nf_class, Timestamp{kStart - 1000}));
    auto cfr = labeled_cfr(*profile, names);
    runtime = std::make_unique<BindingRuntime>(clean_binding(cfr, *profile), cfr, executor);
  }
};

TEST(Augmentation, GuardAndTimestampSteps) {
  const auto& corpus = bench::Corpus::standard();
  const auto& aoi = corpus.find("setRateAoI")->requirement;
  auto g = synthesize_augmentation(*aoi.augmentation_hint, aoi);
  EXPECT_EQ(g.kind, AugmentationKind::aoi_guard);
  ASSERT_EQ(g.steps.size(), 2u);
  EXPECT_EQ(g.steps[0].op, OpKind::clock_read);
  EXPECT_EQ(g.steps[1].op, OpKind::compare_timestamps);
  EXPECT_EQ(g.steps[1].in, (std::vector<std::string>{"in.deadline", "tmp.now"}));
  EXPECT_EQ(g.steps[1].out, "tmp.guard");
  EXPECT_EQ(g.on_guard_fail, "reject_with_error");

  const auto& tel = corpus.find("getUEStatsTimestamped")->requirement;
  auto t = synthesize_augmentation(*tel.augmentation_hint, tel);
  EXPECT_EQ(t.kind, AugmentationKind::telemetry_timestamp);
  EXPECT_EQ(t.steps.back().op, OpKind::append_field);
  EXPECT_EQ(t.steps.back().out, "out.timestamp");
}

TEST(Augmentation, FreeTextAndBadTargetsAreRejected) {
  auto req = bench::Corpus::standard().find("setRateAoI")->requirement;
  try {
    synthesize_augmentation({"", "", "only apply fresh values please"}, req);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unrecognized_hint);
  }
  try {
    synthesize_augmentation({"guard_on_timestamp", "rate", ""}, req);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::precondition);
  }
  EXPECT_THROW(synthesize_augmentation({"retry_twice", "rate", ""}, req), Error);
}

TEST(Steps, InferredFromUnitsAndTypes) {
  auto s = adaptation_steps("in.pow", param("pow", SemanticType::text, "dBm"), "arg.pwrMw", param("pwrMw", SemanticType::real, "mW"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].op, OpKind::unit_convert);
  EXPECT_EQ(s[0].from, "dBm");
  EXPECT_EQ(s[0].to, "mW");
  EXPECT_EQ(s[0].out, "arg.pwrMw");

  s = adaptation_steps("in.i", param("i", SemanticType::real, "s"), "arg.i", param("i", SemanticType::integer, "ms"));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].op, OpKind::unit_convert);
  EXPECT_EQ(s[1].op, OpKind::type_cast);
  EXPECT_EQ(s[1].to, "integer");
  EXPECT_EQ(s[1].in, std::vector<std::string>{s[0].out});

  s = adaptation_steps("in.pow", param("pow", SemanticType::text, "dBm"), "arg.p", param("p", SemanticType::real, "dBm"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].op, OpKind::type_cast);

  s = adaptation_steps("in.a", param("a", SemanticType::text), "arg.b", param("b", SemanticType::text));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].op, OpKind::rename);
}

TEST(Binding, SerializationRoundTripsForEveryProfile) {
  for (const auto& p : sim::standard_profiles()) {
    auto spec = clean_binding(labeled_cfr_all(*p), *p);
    auto text = serialize(spec);
    EXPECT_EQ(parse_binding_spec(text), spec);
    EXPECT_EQ(serialize(parse_binding_spec(text)), text);
  }
  EXPECT_THROW(parse_binding_spec(R"({"kind":"binding_spec","schema_version":"1.0.0","encoding_scheme":"json",
    "functions":[{"function":"f","target":"g","param_pipeline":[{"op":"teleport","in":[],"out":"arg.x"}],
    "return_pipeline":[],"augmentation":{"kind":"none","on_guard_fail":"reject_with_error","steps":[]}}]})"),
               Error);
  EXPECT_THROW(parse_binding_spec(R"({"kind":"binding_spec","schema_version":"2.0.0","encoding_scheme":"json","functions":[]})"),
               Error);
}

TEST(Binding, TargetsAreTheLabeledFunctions) {
  for (const auto& p : sim::standard_profiles()) {
    auto cfr = labeled_cfr_all(*p);
    auto spec = clean_binding(cfr, *p);
    EXPECT_TRUE(check_binding(spec, cfr, p->api).empty()) << p->vendor;
    for (const auto& f : spec.functions) {
      EXPECT_EQ(p->by_internal(f.target)->logical, bench::Corpus::standard().find(f.function)->label) << p->vendor << " " << f.function;
    }
  }
}

TEST(Binding, StaticCheckFindsMissingAndMistypedSlots) {
  auto p = sim::standard_profile("ap-vendor1");
  auto cfr = labeled_cfr(*p, {"setpower"});
  auto spec = clean_binding(cfr, *p);
  auto broken = spec;
  broken.functions[0].param_pipeline.pop_back();
  EXPECT_FALSE(check_binding(broken, cfr, p->api).empty());
  broken = spec;
  for (auto& s : broken.functions[0].param_pipeline) {
    if (s.op == OpKind::unit_convert) {
      s.op = OpKind::rename;
      s.from.reset();
      s.to.reset();
    }
  }
  auto issues = check_binding(broken, cfr, p->api);
  ASSERT_FALSE(issues.empty());
  broken = spec;
  broken.functions[0].target = "launchRocket";
  EXPECT_FALSE(check_binding(broken, cfr, p->api).empty());
  broken = spec;
  broken.encoding_scheme = "flatbin";
  EXPECT_FALSE(check_binding(broken, cfr, p->api).empty());
}

TEST(Runtime, ThirtyDbmTextArrivesAsOneWatt) {
  Rig rig("ap-vendor1", {"setpower"});
  auto r = rig.runtime->call("setpower", {{"radioID", Value("r0")}, {"pow", Value("30")}});
  ASSERT_EQ(r.status, CallStatus::ok) << r.message;
  EXPECT_EQ(r.results.at("response"), Value(true));
  EXPECT_NEAR(rig.executor->state().radios.at("r0").tx_power_mw, 1000.0, 1e-9);
  auto log = rig.executor->state().log;
  ASSERT_EQ(log.size(), 1u);
  EXPECT_NEAR(log[0].args.at("power").as_real(), 30.0, 1e-12);
}

TEST(Runtime, DecodeAndLookupErrors) {
  Rig rig("ap-vendor1", {"setpower"});
  EXPECT_EQ(rig.runtime->call("setpower", {{"radioID", Value("r0")}, {"pow", Value(30.0)}}).status, CallStatus::decode_error);
  EXPECT_EQ(rig.runtime->call("setpower", {{"radioID", Value("r0")}}).status, CallStatus::decode_error);
  EXPECT_EQ(rig.runtime->call("rebootEverything", {}).status, CallStatus::unknown_function);
  auto bad = rig.runtime->call("setpower", {{"radioID", Value("r0")}, {"pow", Value("thirty")}});
  EXPECT_EQ(bad.status, CallStatus::domain_error);
  auto unknown = rig.runtime->call("setpower", {{"radioID", Value("r9")}, {"pow", Value("3")}});
  EXPECT_EQ(unknown.status, CallStatus::domain_error);
  EXPECT_EQ(rig.executor->invocation_count(), 0u);
}

TEST(Runtime, AoiGuardRejectsStaleDeadlines) {
  Rig rig("ap-vendor2", {"setRateAoI"});
  auto now = rig.clock->now();
  auto call = [&](std::int64_t deadline) {
    return rig.runtime->call("setRateAoI", {{"radioID", Value("r0")}, {"rate", Value(120.0)}, {"deadline", Value(Timestamp{deadline})}});
  };
  auto stale = call(now.ms - 1);
  EXPECT_EQ(stale.status, CallStatus::guard_rejected);
  EXPECT_EQ(rig.executor->invocation_count(), 0u);
  EXPECT_EQ(call(now.ms).status, CallStatus::ok);
  EXPECT_EQ(call(now.ms + 5000).status, CallStatus::ok);
  auto s = rig.executor->state();
  EXPECT_EQ(s.radios.at("r0").rate_updates, 2);
  EXPECT_NEAR(s.radios.at("r0").rate_kbps, 120000.0, 1e-6);
  rig.clock->advance(10'000);
  EXPECT_EQ(call(now.ms + 5000).status, CallStatus::guard_rejected);
}

TEST(Runtime, TelemetryRepliesCarryTheClockReading) {
  Rig rig("gnb-vendor3", {"getUEStatsTimestamped"});
  rig.clock->advance(1234);
  auto r = rig.runtime->call("getUEStatsTimestamped", {{"ueID", Value("ue2")}});
  ASSERT_EQ(r.status, CallStatus::ok) << r.message;
  EXPECT_EQ(r.results.at("timestamp"), Value(Timestamp{kStart + 1234}));
  EXPECT_EQ(r.results.size(), 4u);
  EXPECT_EQ(rig.executor->state().log.back().at.ms, kStart + 1234);
}

TEST(Vectors, PolicyByParameterShape) {
  Timestamp now{kStart};
  doc::ControlFunctionRequirement none{"reboot", "", {}, {param("ok", SemanticType::boolean)}, std::nullopt};
  EXPECT_EQ(make_test_vectors(none, now).size(), 1u);
  doc::ControlFunctionRequirement flag{"f", "", {param("on", SemanticType::boolean)}, {}, std::nullopt};
  auto fv = make_test_vectors(flag, now);
  ASSERT_EQ(fv.size(), 2u);
  EXPECT_NE(fv[0].args, fv[1].args);
  auto aoi = bench::Corpus::standard().find("setRateAoI")->requirement;
  auto av = make_test_vectors(aoi, now);
  ASSERT_EQ(av.size(), 3u);
  EXPECT_GT(av[0].args.at("deadline").as_timestamp(), now);
  EXPECT_EQ(av[1].args.at("deadline").as_timestamp(), now);
  EXPECT_LT(av[2].args.at("deadline").as_timestamp(), now);
  auto sp = make_test_vectors(bench::Corpus::standard().find("setpower")->requirement, now);
  EXPECT_EQ(sp[0].args.at("pow"), Value("7"));
}

TEST(Oracle, ConvertsRequirementUnitsToBase) {
  auto p = sim::standard_profile("ap-vendor1");
  auto cfr = labeled_cfr(*p, {"setpower", "getPower"});
  auto refs = bench::references(bench::Corpus::standard());
  auto s = sim::initial_state(doc::NfClass::wlan_ap, Timestamp{0});
  auto r = oracle_call(s, cfr.entries[0], refs.at("setpower"), {{"radioID", Value("r1")}, {"pow", Value("3")}}, Timestamp{kStart});
  ASSERT_EQ(r.status, CallStatus::ok);
  EXPECT_NEAR(s.radios.at("r1").tx_power_mw, 1.9952623149688795, 1e-12);
  auto g = oracle_call(s, cfr.entries[1], refs.at("getPower"), {{"radioID", Value("r1")}}, Timestamp{kStart});
  EXPECT_NEAR(g.results.at("pow").as_real(), 3.0, 1e-12);
}

TEST(Validation, CleanBindingsPassEveryVector) {
  auto refs = bench::references(bench::Corpus::standard());
  for (const auto& p : sim::standard_profiles()) {
    auto cfr = labeled_cfr_all(*p);
    auto spec = clean_binding(cfr, *p);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto report = validate_binding(spec, cfr, *p, refs, {kStart, seed});
      EXPECT_TRUE(report.passed()) << p->vendor << "\n" << report.render();
      EXPECT_GE(report.results.size(), cfr.entries.size());
    }
  }
}

TEST(Validation, WrongTargetIsAWrongResult) {
  auto p = sim::standard_profile("ap-vendor4");
  auto refs = bench::references(bench::Corpus::standard());
  auto cfr = labeled_cfr(*p, {"setChannel", "setDTIM"});
  auto spec = clean_binding(cfr, *p);
  // Both take (radio, integer) and return ok, so the swap is statically fine.
  auto retarget = [&](FunctionBinding& f, const std::string& to) {
    const auto& from_params = p->api.find(f.target)->params;
    const auto& to_params = p->api.find(to)->params;
    for (auto& step : f.param_pipeline) {
      for (std::size_t i = 0; i < from_params.size(); ++i) {
        if (step.out == "arg." + from_params[i].name) step.out = "arg." + to_params[i].name;
      }
    }
    f.target = to;
  };
  auto first = spec.functions[0].target;
  retarget(spec.functions[0], spec.functions[1].target);
  retarget(spec.functions[1], first);
  ASSERT_TRUE(check_binding(spec, cfr, p->api).empty());
  auto report = validate_binding(spec, cfr, *p, refs);
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.failing(), (std::vector<std::string>{"setChannel", "setDTIM"}));
  bool saw_wrong = false;
  for (const auto& r : report.results) saw_wrong = saw_wrong || r.outcome == VectorOutcome::wrong_result;
  EXPECT_TRUE(saw_wrong) << report.render();
}

TEST(Validation, SwappedReturnsAreCaught) {
  auto p = sim::standard_profile("ap-vendor3");
  auto refs = bench::references(bench::Corpus::standard());
  auto cfr = labeled_cfr(*p, {"clientStats"});
  auto spec = clean_binding(cfr, *p);
  for (auto& s : spec.functions[0].return_pipeline) {
    if (s.out == "out.txBytes") {
      s.out = "out.rxBytes";
    } else if (s.out == "out.rxBytes") {
      s.out = "out.txBytes";
    }
  }
  auto report = validate_binding(spec, cfr, *p, refs);
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.results[0].outcome, VectorOutcome::wrong_result);
}

TEST(Repair, FaultMutatorBreaksExactlyOneStep) {
  auto p = sim::standard_profile("gnb-vendor2");
  auto cfr = labeled_cfr_all(*p);
  auto spec = clean_binding(cfr, *p);
  auto clean = serialize(spec);
  gen::GenerationRequest req;
  for (std::uint64_t h = 0; h < 50; ++h) {
    auto broken = parse_binding_spec(binding_fault(clean, req, gen::splitmix64(h)));
    int changed = 0;
    for (std::size_t i = 0; i < spec.functions.size(); ++i) changed += broken.functions[i] != spec.functions[i];
    EXPECT_EQ(changed, 1);
    EXPECT_FALSE(check_binding(broken, cfr, p->api).empty());
  }
}

TEST(Repair, ConvergesImmediatelyWithoutFaults) {
  auto refs = bench::references(bench::Corpus::standard());
  auto backend = make_backend("mock", 7, 0.0);
  auto p = sim::standard_profile("gnb-vendor5");
  auto r = repair_loop(labeled_cfr_all(*p), *p, refs, *backend);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.attempts, 1);
  EXPECT_EQ(r.faults_injected, 0);
  EXPECT_GT(r.usage.prompt_tokens, 0);
  EXPECT_GT(r.wall_time.count(), 0);
}

TEST(Repair, FaultedRunsRecoverAndAreReproducible) {
  auto refs = bench::references(bench::Corpus::standard());
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto p = sim::standard_profiles()[seed];
    auto cfr = labeled_cfr_all(*p);
    auto b1 = make_backend("mock", seed, 0.5);
    auto b2 = make_backend("mock", seed, 0.5);
    auto r = repair_loop(cfr, *p, refs, *b1);
    auto again = repair_loop(cfr, *p, refs, *b2);
    EXPECT_EQ(r.attempts, again.attempts);
    EXPECT_EQ(r.binding, again.binding);
    EXPECT_EQ(r.wall_time, again.wall_time);
    ASSERT_EQ(static_cast<int>(r.reports.size()), r.attempts);
    if (!r.converged) continue;
    EXPECT_TRUE(validate_binding(r.binding, cfr, *p, refs, {kStart, 99}).passed()) << p->vendor;
    if (r.faults_injected > 0 && r.attempts > 1) {
      ++recovered;
      // A repair only asks for what failed.
      EXPECT_FALSE(r.reports.front().passed());
      EXPECT_LT(r.reports.front().failing().size(), cfr.entries.size());
    }
  }
  EXPECT_GT(recovered, 0);
}

TEST(Repair, GivesUpAfterFiveAttemptsWhenEveryReplyIsBroken) {
  auto refs = bench::references(bench::Corpus::standard());
  auto backend = make_backend("mock", 3, 1.0);
  auto p = sim::standard_profile("ap-vendor2");
  auto r = repair_loop(labeled_cfr_all(*p), *p, refs, *backend);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.attempts, 5);
  EXPECT_EQ(r.reports.size(), 5u);
  EXPECT_EQ(r.faults_injected, 5);
}

TEST(Repair, FreeTextHintFailsBeforeAnyGeneration) {
  auto refs = bench::references(bench::Corpus::standard());
  auto backend = make_backend("mock");
  auto p = sim::standard_profile("ap-vendor1");
  auto cfr = labeled_cfr(*p, {"setRateAoI"});
  cfr.entries[0].requirement.augmentation_hint = doc::AugmentationHint{"", "", "only apply fresh values"};
  try {
    repair_loop(cfr, *p, refs, *backend);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unrecognized_hint);
  }
}

}  // namespace
}  // namespace ifgen::codegen
