#include <cmath>

#include "ifgen/error.hpp"
#include "ifgen/gen/backend.hpp"
#include "ifgen/gen/hash.hpp"

namespace ifgen::gen {

void GenerationRequest::validate() const {
  if (system_prompt.empty() || user_prompt.empty()) {
    throw Error(ErrorCode::precondition, "generation request needs non-empty prompts");
  }
  if (context_chunks.size() > max_context_chunks) {
    throw Error(ErrorCode::precondition, "context has " + std::to_string(context_chunks.size()) +
                                             " chunks, limit is " + std::to_string(max_context_chunks));
  }
  if (!(temperature >= 0.0)) throw Error(ErrorCode::precondition, "temperature must be >= 0");
  if (max_output_tokens <= 0) throw Error(ErrorCode::precondition, "max_output_tokens must be positive");
}

std::size_t GenerationRequest::prompt_bytes() const {
  std::size_t n = system_prompt.size() + user_prompt.size();
  for (const auto& c : context_chunks) n += c.size();
  return n;
}

MockBackend::MockBackend(MockOptions options) : options_(std::move(options)) {
  if (!(options_.fault_rate >= 0.0 && options_.fault_rate <= 1.0)) {
    throw Error(ErrorCode::config, "fault_rate must lie in [0, 1]");
  }
}

void MockBackend::register_rule(const std::string& task, Rule rule, FaultMutator mutator) {
  rules_[task] = Entry{std::move(rule), std::move(mutator)};
}

bool MockBackend::has_rule(const std::string& task) const { return rules_.find(task) != rules_.end(); }

std::uint64_t MockBackend::request_hash(const GenerationRequest& r) const {
  std::uint64_t h = fnv1a64(r.task);
  h = fnv1a64(r.system_prompt, mix(h, 1));
  h = fnv1a64(r.user_prompt, mix(h, 2));
  for (const auto& c : r.context_chunks) h = fnv1a64(c, mix(h, 3));
  h = fnv1a64(r.hints.dump(), mix(h, 4));
  h = mix(h, static_cast<std::uint64_t>(r.max_output_tokens));
  return mix(h, options_.seed);
}

bool MockBackend::draws_fault(const GenerationRequest& request) const {
  if (options_.fault_rate <= 0.0) return false;
  if (options_.fault_rate >= 1.0) return true;
  return unit_interval(mix(request_hash(request), 0xfa017)) < options_.fault_rate;
}

GenerationResponse MockBackend::generate(const GenerationRequest& request) {
  request.validate();
  auto it = rules_.find(request.task);
  if (it == rules_.end()) {
    throw Error(ErrorCode::backend_unavailable, "mock backend has no rule for task '" + request.task + "'");
  }
  GenerationResponse response;
  response.text = it->second.rule(request);
  if (it->second.mutator && draws_fault(request)) {
    response.text = it->second.mutator(response.text, request, mix(request_hash(request), 0x5e1ec7));
    response.fault_injected = true;
  }
  response.usage.prompt_tokens = static_cast<std::int64_t>((request.prompt_bytes() + 3) / 4);
  response.usage.completion_tokens = estimate_tokens(response.text);
  if (response.usage.completion_tokens > request.max_output_tokens) {
    throw Error(ErrorCode::token_limit, "output of " + std::to_string(response.usage.completion_tokens) +
                                            " tokens exceeds limit " + std::to_string(request.max_output_tokens));
  }
  response.backend_id = options_.id;
  response.latency = std::chrono::milliseconds(50 + response.usage.prompt_tokens / 40 +
                                               response.usage.completion_tokens / 5);
  return response;
}

}  // namespace ifgen::gen
