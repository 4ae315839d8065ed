#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "ifgen/gen/cost.hpp"
#include "ifgen/gen/retrieval.hpp"

namespace ifgen::gen {

struct GenerationRequest {
  // Routing key for mock rules ("match.confirm", "codegen.binding", ...).
  std::string task;
  std::string system_prompt;
  std::string user_prompt;
  std::vector<std::string> context_chunks;
  double temperature = 0.0;
  std::int64_t max_output_tokens = 4096;
  std::size_t max_context_chunks = 3;
  // Structured inputs the mock rules read instead of parsing prompts. Remote
  // backends ignore this field.
  nlohmann::json hints = nlohmann::json::object();

  /// Throws Error(precondition) when an invariant does not hold.
  void validate() const;
  /// Total prompt bytes: system + user + every context chunk.
  std::size_t prompt_bytes() const;
};

struct GenerationResponse {
  std::string text;
  TokenUsage usage;
  std::string backend_id;
  std::chrono::milliseconds latency{0};
  bool fault_injected = false;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  /// True when output and reported latency are pure functions of the request.
  virtual bool deterministic() const = 0;
  virtual GenerationResponse generate(const GenerationRequest& request) = 0;
};

struct MockOptions {
  std::uint64_t seed = 0;
  double fault_rate = 0.0;
  std::string id = "mock";
};

/// Rule-driven backend. Output is a pure function of (request, seed): rules
/// are looked up by task, and the fault draw hashes the request contents
/// with the seed, so concurrent use and replays are reproducible.
///
/// Usage is synthetic (estimate_tokens over prompt and output); latency is
/// 50 ms + prompt/40 + completion/5 milliseconds.
class MockBackend final : public Backend {
 public:
  using Rule = std::function<std::string(const GenerationRequest&)>;
  // Receives the clean output and a hash to pick what to break.
  using FaultMutator = std::function<std::string(const std::string&, const GenerationRequest&, std::uint64_t)>;

  explicit MockBackend(MockOptions options = {});

  void register_rule(const std::string& task, Rule rule, FaultMutator mutator = {});
  bool has_rule(const std::string& task) const;

  std::string id() const override { return options_.id; }
  bool deterministic() const override { return true; }
  GenerationResponse generate(const GenerationRequest& request) override;

  const MockOptions& options() const { return options_; }
  /// Whether a request with these contents draws a fault.
  bool draws_fault(const GenerationRequest& request) const;

 private:
  struct Entry {
    Rule rule;
    FaultMutator mutator;
  };
  std::uint64_t request_hash(const GenerationRequest& request) const;

  MockOptions options_;
  std::map<std::string, Entry, std::less<>> rules_;
};

struct RemoteOptions {
  std::string url;    // full chat-completions endpoint
  std::string model;
  std::string api_key;
  int retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{120};
  std::string id = "remote";

  /// IFGEN_LLM_URL, IFGEN_LLM_MODEL, IFGEN_LLM_KEY.
  static RemoteOptions from_env();
  bool configured() const { return !url.empty() && !api_key.empty() && !model.empty(); }
};

/// Chat-completion client: POST {model, messages, temperature, max_tokens},
/// reads choices[0].message.content and the usage block. Transport errors,
/// 429 and 5xx are retried with exponential backoff.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(RemoteOptions options);

  std::string id() const override { return options_.id; }
  bool deterministic() const override { return false; }
  GenerationResponse generate(const GenerationRequest& request) override;

  /// Builds the request body; exposed for tests.
  nlohmann::json build_body(const GenerationRequest& request) const;
  /// Parses a response body; throws Error(malformed_response) or
  /// Error(token_limit).
  static GenerationResponse parse_body(const std::string& body, std::int64_t max_output_tokens);

 private:
  RemoteOptions options_;
};

/// Embeddings over the same service (`.../embeddings`, model from
/// IFGEN_EMBED_MODEL). Vectors are re-normalized locally.
class RemoteEmbedder final : public Embedder {
 public:
  RemoteEmbedder(RemoteOptions options, std::string model, std::size_t dimension);
  std::size_t dimension() const override { return dimension_; }
  Vector embed(std::string_view text) const override;

 private:
  RemoteOptions options_;
  std::string model_;
  std::size_t dimension_;
};

}  // namespace ifgen::gen
