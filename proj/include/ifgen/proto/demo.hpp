#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ifgen/proto/node.hpp"
#include "ifgen/proto/source.hpp"

namespace ifgen::proto {

struct FleetOptions {
  std::string backend = "mock";
  std::uint64_t seed = 0;
  double fault_rate = 0.0;
  /// Ports per NF; NFs missing from it (or all, when unset) get ephemeral ports.
  std::optional<Registry> registry;
  std::int64_t clock_start_ms = 1'700'000'000'000;
  std::chrono::milliseconds codegen_delay{0};
  int max_attempts = 5;
};

/// The ten simulated NFs booted as destination nodes, each on a manual clock.
class NodeFleet {
 public:
  explicit NodeFleet(const FleetOptions& options = {}, std::vector<std::string> nf_ids = {});
  ~NodeFleet();

  NfNode& node(std::string_view nf_id);
  std::shared_ptr<sim::SimClock> clock(std::string_view nf_id);
  /// Endpoints with the bound ports.
  Registry registry() const;
  void stop();

 private:
  struct Member {
    std::shared_ptr<sim::SimClock> clock;
    std::unique_ptr<NfNode> node;
  };
  std::vector<std::pair<std::string, Member>> members_;
};

/// Ten requirements for an NF class: nine labeled corpus entries and the
/// class's augmented entry (AoI rate control for APs, timestamped telemetry
/// for gNBs).
std::vector<doc::ControlFunctionRequirement> demo_requirements(doc::NfClass nf_class);

struct DemoCall {
  std::string function;
  ArgMap args;
  Timestamp at;
  codegen::CallResult result;
};

struct DemoTarget {
  std::string nf_id;
  std::string session_id;
  std::string encoding;
  int codegen_attempts = 0;
  int matching_attempts = 0;
  bool provisioned = false;
  std::string failure;
  std::vector<DemoCall> calls;
  sim::NfState state_before_calls;
  sim::NfState state_after_calls;
  std::vector<TranscriptEntry> transcript;  // source and destination, merged
};

struct DemoOptions {
  FleetOptions fleet;
  std::string source_nf = "ric-1";
  std::vector<std::string> targets = {"ap-vendor1", "gnb-vendor1"};
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
};

struct DemoReport {
  std::vector<DemoTarget> targets;
  bool ok() const;
  /// Step-annotated transcript of every target.
  std::string render() const;
};

/// Boots the fleet and runs the whole exchange from a multi-RAT controller
/// toward each target, then issues one nominal call per generated function
/// plus a stale-deadline call for guarded functions. Stage failures are
/// reported per target with the step at which they happened.
DemoReport run_demo(const DemoOptions& options = {});

}  // namespace ifgen::proto
