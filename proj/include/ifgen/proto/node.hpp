#pragma once

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ifgen/codegen/validation.hpp"
#include "ifgen/gen/backend.hpp"
#include "ifgen/proto/registry.hpp"
#include "ifgen/proto/socket.hpp"
#include "ifgen/proto/transcript.hpp"
#include "ifgen/sim/executor.hpp"

namespace httplib {
class Server;
}

namespace ifgen::proto {

inline constexpr const char* kTokenHeader = "X-Trust-Token";

struct NodeOptions {
  std::string host = "127.0.0.1";
  int provisioning_port = 0;
  int control_port = 0;
  codegen::RepairOptions repair;
  /// Held before codegen starts; widens the window before completion.
  std::chrono::milliseconds codegen_delay{0};
  /// Seeds token generation; unset draws from std::random_device.
  std::optional<std::uint64_t> token_seed;
};

enum class SessionState { pending, complete, failed };
std::string_view to_string(SessionState s);

/// Challenge answer expected from a node: hex of mix(fnv(challenge), fnv(nf_id)).
std::string trust_response(std::string_view challenge, std::string_view nf_id);

/// A simulated destination NF: provisioning HTTP server, codegen agent and
/// control-port interface server in front of a vendor executor.
class NfNode {
 public:
  NfNode(std::shared_ptr<const sim::VendorProfile> profile, std::shared_ptr<sim::SimClock> clock,
         std::shared_ptr<gen::Backend> backend, codegen::ReferenceMap refs, NodeOptions options = {});
  ~NfNode();
  NfNode(const NfNode&) = delete;
  NfNode& operator=(const NfNode&) = delete;

  /// Binds both ports and starts serving. Throws Error(transport) when a
  /// port is taken.
  void start();
  /// Stops serving and joins codegen tasks and connections.
  void stop();
  bool running() const { return running_; }

  /// Endpoint with the bound ports.
  NfEndpoint endpoint() const;
  const sim::VendorProfile& profile() const { return *profile_; }
  std::shared_ptr<sim::VendorExecutor> executor() const { return executor_; }

  struct SessionInfo {
    std::string id;
    std::string source_nf;
    SessionState state = SessionState::pending;
    int attempts = 0;
    std::string encoding;
  };
  std::vector<SessionInfo> sessions() const;
  std::vector<TranscriptEntry> session_transcript(const std::string& session_id) const;
  std::vector<std::string> issued_tokens() const;

 private:
  struct Session;

  void install_routes();
  void run_codegen(std::shared_ptr<Session> session);
  void serve_connection(std::shared_ptr<Socket> socket);
  std::string handle_frame(const std::string& payload);
  std::string next_token();
  std::shared_ptr<Session> find_session(const std::string& id) const;
  bool finish(Session& s, SessionState state, const std::string& reason);

  std::shared_ptr<const sim::VendorProfile> profile_;
  std::shared_ptr<sim::SimClock> clock_;
  std::shared_ptr<gen::Backend> backend_;
  codegen::ReferenceMap refs_;
  NodeOptions options_;
  std::shared_ptr<sim::VendorExecutor> executor_;

  std::unique_ptr<httplib::Server> http_;
  std::unique_ptr<Listener> listener_;
  std::thread http_thread_;
  std::thread accept_thread_;
  std::atomic<bool> running_{false};
  int provisioning_port_ = 0;
  int control_port_ = 0;

  mutable std::mutex mu_;
  std::mt19937_64 rng_;
  std::vector<std::string> tokens_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::vector<std::thread> tasks_;
  std::vector<std::pair<std::shared_ptr<Socket>, std::thread>> connections_;
  int session_counter_ = 0;
};

}  // namespace ifgen::proto
