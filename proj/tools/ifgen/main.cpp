#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "ifgen/error.hpp"

int main(int argc, char** argv) {
  using namespace ifgen::cli;
  CLI::App app{"Interface generation between network functions"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--backend", common.backend, "Generation backend: mock or remote")->capture_default_str();
    sub->add_option("--seed", common.seed, "Seed for the mock backend and randomized inputs")->capture_default_str();
    sub->add_option("--fault-rate", common.fault_rate, "Probability that a mock reply is corrupted")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--config", common.config, "NF registry with fixed ports")->check(CLI::ExistingFile);
  };

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo", "Provision an AP and a gNB and drive every generated function");
  add_common(demo_cmd);
  demo_cmd->add_option("--target", demo.targets, "Destination NF ids")->capture_default_str();
  demo_cmd->add_option("--out", common.out, "Also write the transcript to this file");

  MatchArgs match;
  auto* match_cmd = app.add_subcommand("match", "Match requirements against a capability document");
  add_common(match_cmd);
  match_cmd->add_option("--requirements", match.requirements, "Requirement set file")->required()->check(CLI::ExistingFile);
  match_cmd->add_option("--capabilities", match.capabilities, "Capability document file or standard NF id")->required();
  match_cmd->add_option("--out", common.out, "Write the CFR here");

  ProvisionArgs prov;
  auto* prov_cmd = app.add_subcommand("provision", "Run one provisioning exchange toward a simulated NF");
  add_common(prov_cmd);
  prov_cmd->add_option("--target", prov.target, "Destination NF id")->required();
  prov_cmd->add_option("--requirements", prov.requirements, "Requirement set file")->check(CLI::ExistingFile);
  prov_cmd->add_option("--out", common.out, "Write the CFR here");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark and write records, chart and summary");
  add_common(bench_cmd);
  bench_cmd->add_option("task", bench.task, "matching, codegen or augmentation")
      ->required()
      ->check(CLI::IsMember({"matching", "codegen", "augmentation"}));
  bench_cmd->add_option("--out", common.out, "Results root")->capture_default_str();
  bench_cmd->add_option("--variations", bench.variations, "Variations per requirement")->capture_default_str();
  bench_cmd->add_option("--vectors", bench.vectors, "Random vectors per augmentation scenario")->capture_default_str();
  bench_cmd->add_option("--variation-mode", bench.variation_mode, "rule or backend")
      ->check(CLI::IsMember({"rule", "backend"}))
      ->capture_default_str();

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and check documents");
  validate_cmd->add_option("files", validate.files, "Documents to check")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*demo_cmd) return run_demo(common, demo);
    if (*match_cmd) return run_match(common, match);
    if (*prov_cmd) return run_provision(common, prov);
    if (*bench_cmd) {
      if (common.out.empty()) common.out = "results";
      return run_bench(common, bench);
    }
    return run_validate(common, validate);
  } catch (const ifgen::Error& e) {
    std::cerr << "error: " << ifgen::to_string(e.code()) << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
  }
  return 1;
}
