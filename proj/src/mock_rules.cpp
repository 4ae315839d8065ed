#include "ifgen/backends.hpp"

#include "ifgen/bench/variation.hpp"
#include "ifgen/codegen/generator.hpp"
#include "ifgen/error.hpp"
#include "ifgen/match/agent.hpp"

namespace ifgen {

void install_mock_rules(gen::MockBackend& backend) {
  backend.register_rule("match.confirm", match::confirm_rule, match::confirm_fault);
  backend.register_rule("codegen.binding", codegen::binding_rule, codegen::binding_fault);
  backend.register_rule("bench.paraphrase", bench::paraphrase_rule);
}

std::unique_ptr<gen::Backend> make_backend(const std::string& name, std::uint64_t seed, double fault_rate) {
  if (name == "mock") {
    auto b = std::make_unique<gen::MockBackend>(gen::MockOptions{seed, fault_rate, "mock"});
    install_mock_rules(*b);
    return b;
  }
  if (name == "remote") {
    auto opts = gen::RemoteOptions::from_env();
    if (!opts.configured()) {
      throw Error(ErrorCode::backend_unavailable, "remote backend needs IFGEN_LLM_URL, IFGEN_LLM_MODEL and IFGEN_LLM_KEY");
    }
    return std::make_unique<gen::RemoteBackend>(std::move(opts));
  }
  throw Error(ErrorCode::unknown_backend, "unknown backend '" + name + "' (expected mock or remote)");
}

}  // namespace ifgen
