#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ifgen::cli {

struct Common {
  std::string backend = "mock";
  std::uint64_t seed = 0;
  double fault_rate = 0.0;
  std::string config;  // registry file; empty means ephemeral ports
  std::string out;
};

struct DemoArgs {
  std::vector<std::string> targets = {"ap-vendor1", "gnb-vendor1"};
};

struct MatchArgs {
  std::string requirements;
  std::string capabilities;  // file, or a standard NF id
};

struct ProvisionArgs {
  std::string target;
  std::string requirements;  // empty means the demo set for the target's class
};

struct BenchArgs {
  std::string task;
  int variations = 10;
  int vectors = 100;
  std::string variation_mode = "rule";
};

struct ValidateArgs {
  std::vector<std::string> files;
};

// Each returns the process exit code and writes results to stdout.
int run_demo(const Common& common, const DemoArgs& args);
int run_match(const Common& common, const MatchArgs& args);
int run_provision(const Common& common, const ProvisionArgs& args);
int run_bench(const Common& common, const BenchArgs& args);
int run_validate(const Common& common, const ValidateArgs& args);

}  // namespace ifgen::cli
