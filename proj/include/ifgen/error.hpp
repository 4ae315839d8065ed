#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ifgen {

enum class ErrorCode {
  syntax,
  schema,
  unsupported_version,
  invariant,
  io,
  config,
  precondition,
  unknown_backend,
  backend_unavailable,
  token_limit,
  malformed_response,
  all_unsupported,
  no_common_encoding,
  no_candidate,
  unrecognized_hint,
  attempts_exhausted,
  unknown_function,
  arity_mismatch,
  domain,
  unit_mismatch,
  unknown_nf,
  unreachable,
  trust_rejected,
  transport,
  timeout,
  rejected,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::syntax: return "syntax";
    case ErrorCode::schema: return "schema";
    case ErrorCode::unsupported_version: return "unsupported_version";
    case ErrorCode::invariant: return "invariant";
    case ErrorCode::io: return "io";
    case ErrorCode::config: return "config";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::unknown_backend: return "unknown_backend";
    case ErrorCode::backend_unavailable: return "backend_unavailable";
    case ErrorCode::token_limit: return "token_limit";
    case ErrorCode::malformed_response: return "malformed_response";
    case ErrorCode::all_unsupported: return "all_unsupported";
    case ErrorCode::no_common_encoding: return "no_common_encoding";
    case ErrorCode::no_candidate: return "no_candidate";
    case ErrorCode::unrecognized_hint: return "unrecognized_hint";
    case ErrorCode::attempts_exhausted: return "attempts_exhausted";
    case ErrorCode::unknown_function: return "unknown_function";
    case ErrorCode::arity_mismatch: return "arity_mismatch";
    case ErrorCode::domain: return "domain";
    case ErrorCode::unit_mismatch: return "unit_mismatch";
    case ErrorCode::unknown_nf: return "unknown_nf";
    case ErrorCode::unreachable: return "unreachable";
    case ErrorCode::trust_rejected: return "trust_rejected";
    case ErrorCode::transport: return "transport";
    case ErrorCode::timeout: return "timeout";
    case ErrorCode::rejected: return "rejected";
  }
  return "unknown";
}

/// Every failure raised by the library. `path()` carries a field path for
/// schema problems ("capabilities[3].params[0].unit") or a byte offset for
/// syntax errors; it is empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {})
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        code_(code),
        path_(std::move(path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string path_;
};

}  // namespace ifgen
