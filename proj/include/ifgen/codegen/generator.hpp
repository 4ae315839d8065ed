#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifgen/codegen/binding.hpp"
#include "ifgen/doc/documents.hpp"
#include "ifgen/gen/backend.hpp"
#include "ifgen/match/scorer.hpp"

namespace ifgen::codegen {

/// Guard or timestamp steps for a structured hint. Throws
/// Error(unrecognized_hint) for free-text or unknown kinds and
/// Error(precondition) when the target is not a timestamp parameter
/// (guard) or return (telemetry) of the requirement.
Augmentation synthesize_augmentation(const doc::AugmentationHint& hint, const doc::ControlFunctionRequirement& req);

/// For each `to` entry, the index of the `from` entry it takes its value
/// from. Pairs are chosen greedily by name-token overlap, unit dimension
/// and position among type-compatible pairs.
std::vector<std::optional<std::size_t>> align_params(const std::vector<doc::ParamSpec>& from,
                                                     const std::vector<doc::ParamSpec>& to,
                                                     const match::SynonymTable& synonyms);

/// Steps carrying `from_slot` (declared as `from`) into `to_slot` (declared
/// as `to`): unit conversion, then a type cast, else a plain rename.
std::vector<Step> adaptation_steps(const std::string& from_slot, const doc::ParamSpec& from, const std::string& to_slot,
                                   const doc::ParamSpec& to);

/// Internal function best matching a CFR entry: scorer against the
/// requirement and against the matched capability, whichever is higher.
const doc::InternalFunction& select_target(const doc::CfrEntry& entry, const doc::ControlCapability* matched,
                                           const doc::VendorApiDoc& api, const match::Scorer& scorer);

/// Rule-derived binding of one CFR entry.
FunctionBinding derive_function_binding(const doc::CfrEntry& entry, const doc::ControlCapability* matched,
                                        const doc::VendorApiDoc& api, const match::Scorer& scorer);

struct RepairInput {
  BindingSpec previous;
  std::vector<std::string> failing;  // function names to regenerate
  std::string report;                // failure report shown to the model
  int attempt = 2;
};

struct GenerationCall {
  BindingSpec spec;
  gen::TokenUsage usage;
  std::chrono::milliseconds latency{0};
  bool fault_injected = false;
};

/// Asks the backend ("codegen.binding") for a binding of every CFR entry, or
/// with `repair`, for the failing entries only; the rest are kept from the
/// previous binding. Throws Error(unrecognized_hint) up front for hints the
/// generator cannot realise, and Error(malformed_response) when the reply
/// is not a binding document.
GenerationCall generate_binding(const doc::CfrDocument& cfr, const doc::VendorApiDoc& api,
                                const doc::CapabilityDocument& capabilities, gen::Backend& backend,
                                const RepairInput* repair = nullptr);

/// Mock rule for "codegen.binding".
std::string binding_rule(const gen::GenerationRequest& request);
/// Fault for "codegen.binding": in one regenerated entry, drops one step
/// (unit_convert and type_cast become plain renames).
std::string binding_fault(const std::string& clean, const gen::GenerationRequest& request, std::uint64_t h);

}  // namespace ifgen::codegen
