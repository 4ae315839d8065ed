#include <gtest/gtest.h>

#include "ifgen/error.hpp"
#include "ifgen/proto/demo.hpp"
#include "support/hand_adapter.hpp"

namespace ifgen::proto {
namespace {

using codegen::CallStatus;
using testing::HandOutcome;

// Replays the demo's calls on a copy of the pre-call state through the hand
// adapter and compares every response and the final state.
void expect_semantically_correct(const DemoTarget& t) {
  auto profile = sim::standard_profile(t.nf_id);
  auto shadow = t.state_before_calls;
  for (const auto& c : t.calls) {
    const auto* entry = bench::Corpus::standard().find(c.function);
    ASSERT_NE(entry, nullptr) << c.function;
    auto want = testing::hand_call(*profile, shadow, *entry, c.args, c.at);
    switch (want.outcome) {
      case HandOutcome::ok:
        EXPECT_EQ(c.result.status, CallStatus::ok) << t.nf_id << " " << c.function << " " << c.result.message;
        EXPECT_TRUE(testing::same_results(c.result.results, want.results)) << t.nf_id << " " << c.function;
        break;
      case HandOutcome::guard_rejected:
        EXPECT_EQ(c.result.status, CallStatus::guard_rejected) << t.nf_id << " " << c.function;
        break;
      case HandOutcome::error:
        EXPECT_TRUE(c.result.status == CallStatus::domain_error || c.result.status == CallStatus::invoke_error)
            << t.nf_id << " " << c.function;
        break;
    }
  }
  std::string diff;
  EXPECT_TRUE(sim::equivalent(shadow, t.state_after_calls, 1e-9, &diff)) << t.nf_id << ": " << diff;
}

TEST(Demo, TenFunctionInterfacesTowardApAndGnb) {
  auto report = run_demo();
  ASSERT_TRUE(report.ok()) << report.render();
  ASSERT_EQ(report.targets.size(), 2u);
  for (const auto& t : report.targets) {
    EXPECT_EQ(check_flow(t.transcript), "") << render(t.transcript);
    EXPECT_EQ(t.codegen_attempts, 1);
    EXPECT_GE(t.calls.size(), 10u);
    expect_semantically_correct(t);
  }
  EXPECT_EQ(report.targets[0].encoding, "json");
  EXPECT_EQ(report.targets[1].encoding, "flatbin");
  // The stale-deadline call is the only non-ok response.
  int not_ok = 0;
  for (const auto& t : report.targets) {
    for (const auto& c : t.calls) not_ok += c.result.status != CallStatus::ok;
  }
  EXPECT_EQ(not_ok, 1);
}

TEST(Demo, EveryVendorPairRoundTrips) {
  for (int i = 2; i <= 5; ++i) {
    DemoOptions o;
    o.targets = {"ap-vendor" + std::to_string(i), "gnb-vendor" + std::to_string(i)};
    auto report = run_demo(o);
    ASSERT_TRUE(report.ok()) << report.render();
    for (const auto& t : report.targets) expect_semantically_correct(t);
  }
}

TEST(Demo, SeededFaultsShowRepairThenSuccess) {
  DemoOptions o;
  o.fleet.fault_rate = 0.3;
  o.fleet.seed = 7;
  auto report = run_demo(o);
  ASSERT_TRUE(report.ok()) << report.render();
  int repaired = 0;
  for (const auto& t : report.targets) {
    repaired += t.codegen_attempts > 1;
    EXPECT_EQ(check_flow(t.transcript), "") << render(t.transcript);
    expect_semantically_correct(t);
  }
  EXPECT_GE(repaired, 1);
  EXPECT_NE(report.render().find("binding_tested: attempt 1: 1 function(s) failing"), std::string::npos);
}

TEST(Demo, TranscriptsAreDeterministic) {
  DemoOptions o;
  o.fleet.fault_rate = 0.3;
  o.fleet.seed = 7;
  EXPECT_EQ(run_demo(o).render(), run_demo(o).render());
}

TEST(Demo, CollidingPortsFailBeforeBoot) {
  DemoOptions o;
  auto r = Registry::standard();
  r.endpoints[1].control_port = r.endpoints[0].control_port;
  o.fleet.registry = r;
  try {
    run_demo(o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::config);
  }
}

TEST(Demo, UnknownTargetIsReportedPerTarget) {
  DemoOptions o;
  o.targets = {"wifi-9"};
  auto report = run_demo(o);
  EXPECT_FALSE(report.ok());
  EXPECT_NE(report.targets[0].failure.find("unknown_nf"), std::string::npos);
}

}  // namespace
}  // namespace ifgen::proto
