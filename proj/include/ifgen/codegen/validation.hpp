#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ifgen/codegen/generator.hpp"
#include "ifgen/codegen/runtime.hpp"
#include "ifgen/sim/variant.hpp"

namespace ifgen::codegen {

struct TestVector {
  std::string name;  // nominal, boundary or random
  ArgMap args;
};

/// Nominal, boundary and random argument sets for a requirement signature,
/// duplicates removed. Timestamps are placed relative to `now`: nominal in
/// the future, boundary at `now`, random in the past.
std::vector<TestVector> make_test_vectors(const doc::ControlFunctionRequirement& req, Timestamp now, std::uint64_t seed = 0);

/// Ground truth for one requirement: the logical function implementing it
/// and how requirement parameters and returns map onto logical ones.
struct ReferenceMapping {
  std::string label;
  std::map<std::string, std::string> param_map;
  std::map<std::string, std::string> return_map;
};
using ReferenceMap = std::map<std::string, ReferenceMapping, std::less<>>;

/// Reference for an entry outside the labeled corpus: the logical function
/// behind the matched capability, parameters paired by align_params.
ReferenceMapping derive_reference(const doc::CfrEntry& entry, const sim::VendorProfile& profile);
/// `refs` plus derived mappings for every CFR entry it lacks.
ReferenceMap complete_references(const doc::CfrDocument& cfr, const sim::VendorProfile& profile, const ReferenceMap& refs);

/// Executes a requirement directly against the logical catalog, converting
/// arguments and results between requirement and base units. Augmented
/// entries get the guard or timestamp semantics of their hint.
CallResult oracle_call(sim::NfState& state, const doc::CfrEntry& entry, const ReferenceMapping& ref, const ArgMap& args,
                       Timestamp now);

enum class VectorOutcome { pass, decode_error, adaptation_error, invoke_error, encode_error, wrong_result };
std::string_view to_string(VectorOutcome o);

struct VectorResult {
  std::string function;
  std::string vector;
  VectorOutcome outcome = VectorOutcome::pass;
  std::string detail;
};

struct ValidationReport {
  std::vector<VectorResult> results;

  bool passed() const;
  /// Function names with at least one non-passing result, in CFR order.
  std::vector<std::string> failing() const;
  std::string render() const;
};

struct ValidationOptions {
  std::int64_t clock_start_ms = 1'700'000'000'000;
  std::uint64_t vector_seed = 0;
};

/// Static checks, then every test vector of every CFR entry on fresh state:
/// binding path through the vendor API versus the logical oracle. Responses
/// and final states must agree (relative tolerance 1e-9); the same error
/// class on both paths counts as a pass.
ValidationReport validate_binding(const BindingSpec& spec, const doc::CfrDocument& cfr, const sim::VendorProfile& profile,
                                  const ReferenceMap& refs, const ValidationOptions& options = {});

struct RepairOptions {
  int max_attempts = 5;
  ValidationOptions validation;
};

struct RepairResult {
  BindingSpec binding;
  int attempts = 0;
  bool converged = false;
  std::vector<ValidationReport> reports;
  gen::TokenUsage usage;
  std::chrono::milliseconds wall_time{0};
  int faults_injected = 0;
};

/// Generate, validate, and regenerate the failing functions until every
/// vector passes or the attempt budget is spent. A reply that is not a
/// binding document uses up an attempt.
RepairResult repair_loop(const doc::CfrDocument& cfr, const sim::VendorProfile& profile, const ReferenceMap& refs,
                         gen::Backend& backend, const RepairOptions& options = {});

}  // namespace ifgen::codegen
