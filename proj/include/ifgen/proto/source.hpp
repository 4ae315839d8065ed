#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ifgen/codegen/runtime.hpp"
#include "ifgen/gen/backend.hpp"
#include "ifgen/match/agent.hpp"
#include "ifgen/proto/registry.hpp"
#include "ifgen/proto/socket.hpp"
#include "ifgen/proto/transcript.hpp"
#include "ifgen/proto/wire.hpp"

namespace ifgen::proto {

struct Completion {
  bool complete = false;
  std::string session_id;
  int attempts = 0;
  std::string reason;
  std::string report;
};

/// Source side of the provisioning interface. Errors: unreachable,
/// trust_rejected (403 or a wrong challenge answer), rejected (CFR refused),
/// timeout.
class ProvisioningClient {
 public:
  ProvisioningClient(NfEndpoint endpoint, std::string source_nf, Transcript* transcript = nullptr);

  const NfEndpoint& endpoint() const { return endpoint_; }
  /// Challenge/response; the token is echoed on every later request.
  std::string establish_trust();
  void set_token(std::string token) { endpoint_.trust_token = std::move(token); }
  doc::CapabilityDocument fetch_capability();
  /// Returns the session id from the cfr_ack.
  std::string post_cfr(const doc::CfrDocument& cfr);
  /// Polls the status path until the session completes or fails. Transport
  /// failures while polling count as silence; only the deadline ends the wait.
  Completion await_completion(const std::string& session_id,
                              std::chrono::milliseconds timeout = std::chrono::seconds(120),
                              std::chrono::milliseconds poll = std::chrono::milliseconds(10));

 private:
  NfEndpoint endpoint_;
  std::string source_nf_;
  Transcript* transcript_;
};

/// Generated interface client: checks the declared signature, encodes with
/// the negotiated scheme and matches replies by correlation id. Calls can be
/// pipelined with send/receive.
class ControlClient {
 public:
  ControlClient(const NfEndpoint& endpoint, match::ClientSpec spec, std::string session_id,
                Transcript* transcript = nullptr);

  /// Throws Error(schema) when args do not fit the declared signature and
  /// Error(transport) on connection failures.
  std::uint64_t send(std::string_view function, const ArgMap& args);
  codegen::CallResult receive(std::uint64_t correlation_id,
                              std::chrono::milliseconds timeout = std::chrono::seconds(10));
  codegen::CallResult call(std::string_view function, const ArgMap& args);

  const match::ClientSpec& spec() const { return spec_; }
  const std::string& session_id() const { return session_id_; }
  void close() { socket_.close(); }

 private:
  match::ClientSpec spec_;
  std::string session_id_;
  Transcript* transcript_;
  Socket socket_;
  std::uint64_t next_id_ = 1;
  std::map<std::uint64_t, std::string> pending_;  // correlation id -> function
  std::map<std::uint64_t, codegen::CallResult> ready_;
};

struct FlowOptions {
  std::string source_nf = "ric-1";
  std::vector<std::string> source_encodings = {"flatbin", "json"};
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
  match::MatchingConfig matching = match::MatchingConfig::standard();
};

struct Flow {
  match::MatchingSessionResult matching;
  match::ClientSpec client_spec;
  std::string session_id;
  Completion completion;
  std::unique_ptr<ControlClient> client;  // set once provisioning completed
};

/// Source side of one exchange, steps 1 to 8: trust, capability fetch and
/// matching, CFR and client, post, completion, connect. Stage failures throw
/// Error with "step N: " leading the message. A failed provisioning is
/// returned in `completion`, without a client.
Flow provision_interface(const NfEndpoint& endpoint, const std::vector<doc::ControlFunctionRequirement>& requirements,
                         gen::Backend& backend, Transcript& transcript, const FlowOptions& options = {});

}  // namespace ifgen::proto
