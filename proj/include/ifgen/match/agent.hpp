#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ifgen/doc/documents.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/backend.hpp"
#include "ifgen/match/scorer.hpp"

namespace ifgen::match {

enum class Decision { exact, closest, unsupported };
std::string_view to_string(Decision d);

struct Candidate {
  std::string name;
  double score = 0;
};

struct MatchOutcome {
  std::string requirement_name;
  Decision decision = Decision::unsupported;
  std::optional<std::string> capability_name;
  double score = 0;  // 1.0 for exact, below 1 otherwise
  std::string rationale;
  int attempts = 1;
  std::vector<Candidate> candidates;  // top-k by score, best first
  bool fell_back = false;             // backend never gave a valid answer
  gen::TokenUsage usage;
  std::chrono::milliseconds wall_time{0};
};

/// Ranks every capability, asks the backend to confirm one of the top-k
/// (or "none"), and classifies the pick against the thresholds. Replies
/// outside the candidate set are retried up to max_attempts, after which the
/// score ranking decides. Throws Error(precondition) on an empty capability
/// list and passes through backend_unavailable.
MatchOutcome classify(const doc::ControlFunctionRequirement& req, const doc::CapabilityDocument& caps,
                      const Scorer& scorer, const MatchingConfig& config, gen::Backend& backend);

/// Candidate ranking without the backend step.
std::vector<Candidate> rank_candidates(const doc::ControlFunctionRequirement& req, const doc::CapabilityDocument& caps,
                                       const Scorer& scorer);

struct EncodingNegotiation {
  std::vector<std::string> source_preference;
  std::vector<std::string> dest_supported;

  /// First source preference the destination supports. Throws
  /// Error(no_common_encoding).
  std::string choose() const;
};

/// One CFR entry per supported outcome, in requirement order. Throws
/// Error(all_unsupported) or Error(no_common_encoding).
doc::CfrDocument build_cfr(const std::vector<MatchOutcome>& outcomes,
                           const std::vector<doc::ControlFunctionRequirement>& reqs,
                           const EncodingNegotiation& encodings, const std::string& source_nf, const std::string& dest_nf);

struct ClientFunction {
  std::string name;
  std::vector<doc::ParamSpec> params;
  std::vector<doc::ParamSpec> returns;
};

/// What the generic client runtime needs to talk to a provisioned server.
struct ClientSpec {
  std::string dest_nf;
  std::string host;
  int port = 0;
  std::string encoding_scheme;
  std::vector<ClientFunction> functions;

  const ClientFunction* find(std::string_view name) const;
};

/// Mirrors the CFR entries. Augmented telemetry entries keep the
/// requirement's return list, which already names the appended field.
ClientSpec make_client_spec(const doc::CfrDocument& cfr, std::string host, int port);

using CapabilitySource = std::function<doc::CapabilityDocument()>;
CapabilitySource file_capability_source(const std::string& path);

struct SessionOptions {
  std::string source_nf = "ric-1";
  std::vector<std::string> source_encodings = {"flatbin", "json"};
};

struct MatchingSessionResult {
  doc::CapabilityDocument capabilities;
  std::vector<MatchOutcome> outcomes;
  std::optional<doc::CfrDocument> cfr;
  std::optional<Error> failure;  // all_unsupported or no_common_encoding
};

/// Steps 1-4 on the source side. Throws Error(precondition) for an empty
/// requirement list and Error(unreachable) when the capability source
/// fails.
MatchingSessionResult run_matching_session(const std::vector<doc::ControlFunctionRequirement>& reqs,
                                           const CapabilitySource& source, const MatchingConfig& config,
                                           gen::Backend& backend, const Scorer& scorer, const SessionOptions& options = {});

/// One line per outcome: name, decision, capability, score, attempts.
std::string render_outcomes(const std::vector<MatchOutcome>& outcomes);

/// Mock rule for "match.confirm": the top candidate when its score reaches
/// hints.closest_floor, otherwise "none".
std::string confirm_rule(const gen::GenerationRequest& request);
/// Fault for "match.confirm": wraps the answer in chatter so it no longer
/// names a candidate.
std::string confirm_fault(const std::string& clean, const gen::GenerationRequest& request, std::uint64_t h);

/// Signature line used in prompts and logs.
std::string render_capability(const doc::ControlCapability& cap);

}  // namespace ifgen::match
