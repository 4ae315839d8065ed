#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "ifgen/gen/backend.hpp"

namespace ifgen {

/// Registers the deterministic rules for every task the agents send:
/// match.confirm, codegen.binding and bench.paraphrase.
void install_mock_rules(gen::MockBackend& backend);

/// "mock" builds a MockBackend with every rule installed; "remote" reads
/// IFGEN_LLM_* and throws Error(backend_unavailable) when unset. Other names
/// throw Error(unknown_backend).
std::unique_ptr<gen::Backend> make_backend(const std::string& name, std::uint64_t seed = 0, double fault_rate = 0.0);

}  // namespace ifgen
