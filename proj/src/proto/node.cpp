#include "ifgen/proto/node.hpp"

#include <httplib.h>

#include <cstdio>

#include "ifgen/codegen/runtime.hpp"
#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/hash.hpp"
#include "ifgen/proto/wire.hpp"

namespace ifgen::proto {

using doc::json_io::Json;
using codegen::CallStatus;

struct NfNode::Session {
  std::string id;
  std::string token;
  std::string source_nf;
  doc::CfrDocument cfr;
  SessionState state = SessionState::pending;
  int attempts = 0;
  std::string reason;
  std::string report;
  std::unique_ptr<codegen::BindingRuntime> runtime;
  Transcript transcript;
};

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void reply(httplib::Response& res, int status, MessageKind kind, const std::string& sid, const Json& payload) {
  res.status = status;
  res.set_content(serialize(ProvisioningMessage{kind, sid, payload.dump()}), "application/json");
}

void reject(httplib::Response& res, int status, const std::string& reason, const std::string& sid = {}) {
  reply(res, status, MessageKind::provisioning_failed, sid, Json{{"reason", reason}});
}

}  // namespace

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::pending: return "pending";
    case SessionState::complete: return "complete";
    case SessionState::failed: return "failed";
  }
  return "pending";
}

std::string trust_response(std::string_view challenge, std::string_view nf_id) {
  return hex64(gen::mix(gen::fnv1a64(challenge), gen::fnv1a64(nf_id)));
}

NfNode::NfNode(std::shared_ptr<const sim::VendorProfile> profile, std::shared_ptr<sim::SimClock> clock,
               std::shared_ptr<gen::Backend> backend, codegen::ReferenceMap refs, NodeOptions options)
    : profile_(std::move(profile)),
      clock_(std::move(clock)),
      backend_(std::move(backend)),
      refs_(std::move(refs)),
      options_(std::move(options)),
      executor_(std::make_shared<sim::VendorExecutor>(profile_, clock_)),
      rng_(options_.token_seed ? *options_.token_seed : std::random_device{}()) {}

NfNode::~NfNode() { stop(); }

std::string NfNode::next_token() {
  // Caller holds mu_.
  std::string t = hex64(rng_()) + hex64(rng_());
  tokens_.push_back(t);
  return t;
}

std::shared_ptr<NfNode::Session> NfNode::find_session(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

bool NfNode::finish(Session& s, SessionState state, const std::string& reason) {
  // Caller holds mu_.
  if (s.state != SessionState::pending) return false;
  s.state = state;
  s.reason = reason;
  if (state == SessionState::complete) {
    s.transcript.record(7, profile_->vendor, "provisioning_complete", s.id + " after " + std::to_string(s.attempts) + " attempt(s)");
  } else {
    s.transcript.record(7, profile_->vendor, "provisioning_failed", s.id + ": " + reason);
  }
  return true;
}

void NfNode::install_routes() {
  auto& srv = *http_;
  const auto& nf = profile_->vendor;

  srv.Post("/provision/trust", [this](const httplib::Request& req, httplib::Response& res) {
    Json body;
    try {
      body = Json::parse(req.body);
    } catch (const std::exception&) {
      return reject(res, 400, "trust request is not JSON");
    }
    if (!body.is_object() || !body.contains("challenge") || !body["challenge"].is_string()) {
      return reject(res, 400, "trust request needs a challenge");
    }
    std::string token;
    {
      std::lock_guard lock(mu_);
      token = next_token();
    }
    res.set_content(Json{{"kind", "trust_response"},
                         {"nf_id", profile_->vendor},
                         {"token", token},
                         {"response", trust_response(body["challenge"].get<std::string>(), profile_->vendor)}}
                        .dump(),
                    "application/json");
  });

  auto token_ok = [this](const httplib::Request& req) {
    auto t = req.get_header_value(kTokenHeader);
    std::lock_guard lock(mu_);
    return !t.empty() && std::find(tokens_.begin(), tokens_.end(), t) != tokens_.end();
  };

  srv.Get("/capability", [this, token_ok](const httplib::Request& req, httplib::Response& res) {
    if (!token_ok(req)) return reject(res, 403, "token rejected");
    res.set_content(doc::serialize(profile_->capability_doc), "application/json");
  });

  srv.Post("/provision/cfr", [this, token_ok, nf](const httplib::Request& req, httplib::Response& res) {
    if (!token_ok(req)) return reject(res, 403, "token rejected");
    doc::CfrDocument cfr;
    try {
      cfr = doc::parse_cfr(req.body);
    } catch (const Error& e) {
      return reject(res, 400, std::string("CFR rejected: ") + e.what());
    }
    const auto& supported = profile_->capability_doc.supported_encodings;
    if (std::find(supported.begin(), supported.end(), cfr.encoding_scheme) == supported.end()) {
      return reject(res, 422, "encoding " + cfr.encoding_scheme + " is not supported by " + nf);
    }
    if (cfr.dest_nf != nf) return reject(res, 422, "CFR is addressed to " + cfr.dest_nf + ", not " + nf);
    for (const auto& e : cfr.entries) {
      if (!profile_->capability_doc.find(e.matched_capability_name)) {
        return reject(res, 422, e.matched_capability_name + " is not a capability of " + nf);
      }
    }
    auto s = std::make_shared<Session>();
    s->token = req.get_header_value(kTokenHeader);
    s->source_nf = cfr.source_nf;
    s->cfr = std::move(cfr);
    {
      std::lock_guard lock(mu_);
      if (!running_) return reject(res, 503, "node is stopping");
      char id[32];
      std::snprintf(id, sizeof id, "%s-s%04d", nf.c_str(), ++session_counter_);
      s->id = id;
      s->transcript.record(4, nf, "cfr_ack", s->id + ", " + std::to_string(s->cfr.entries.size()) + " entries, " +
                                                 s->cfr.encoding_scheme);
      sessions_[s->id] = s;
      tasks_.emplace_back([this, s] { run_codegen(s); });
    }
    reply(res, 200, MessageKind::cfr_ack, s->id, Json{{"entries", s->cfr.entries.size()}});
  });

  srv.Get(R"(/provision/status/([A-Za-z0-9_\-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    auto s = find_session(req.matches[1]);
    if (!s) return reject(res, 404, "unknown session " + std::string(req.matches[1]));
    std::lock_guard lock(mu_);
    if (req.get_header_value(kTokenHeader) != s->token) {
      finish(*s, SessionState::failed, "token rejected");
      return reject(res, 403, "token rejected", s->id);
    }
    switch (s->state) {
      case SessionState::pending:
        return reply(res, 200, MessageKind::cfr_ack, s->id, Json{{"state", "pending"}});
      case SessionState::complete:
        return reply(res, 200, MessageKind::provisioning_complete, s->id,
                     Json{{"attempts", s->attempts}, {"encoding", s->cfr.encoding_scheme}});
      case SessionState::failed:
        return reply(res, 200, MessageKind::provisioning_failed, s->id,
                     Json{{"attempts", s->attempts}, {"reason", s->reason}, {"report", s->report}});
    }
  });
}

void NfNode::run_codegen(std::shared_ptr<Session> s) {
  if (options_.codegen_delay.count() > 0) std::this_thread::sleep_for(options_.codegen_delay);
  const auto& nf = profile_->vendor;
  codegen::RepairResult result;
  std::string error;
  try {
    auto refs = codegen::complete_references(s->cfr, *profile_, refs_);
    result = codegen::repair_loop(s->cfr, *profile_, refs, *backend_, options_.repair);
  } catch (const Error& e) {
    error = std::string(to_string(e.code())) + ": " + e.what();
  }
  std::lock_guard lock(mu_);
  for (int i = 0; i < static_cast<int>(result.reports.size()); ++i) {
    const auto& r = result.reports[i];
    s->transcript.record(5, nf, "binding_generated", "attempt " + std::to_string(i + 1));
    auto failing = r.failing();
    s->transcript.record(6, nf, "binding_tested",
                         "attempt " + std::to_string(i + 1) + ": " +
                             (failing.empty() ? "all vectors pass" : std::to_string(failing.size()) + " function(s) failing"));
  }
  s->attempts = result.attempts;
  if (!error.empty()) {
    finish(*s, SessionState::failed, error);
    return;
  }
  if (!result.converged) {
    s->report = result.reports.empty() ? "" : result.reports.back().render();
    finish(*s, SessionState::failed, "validation failing after " + std::to_string(result.attempts) + " attempts");
    return;
  }
  if (s->state != SessionState::pending) return;
  s->runtime = std::make_unique<codegen::BindingRuntime>(result.binding, s->cfr, executor_);
  finish(*s, SessionState::complete, "");
}

std::string NfNode::handle_frame(const std::string& payload) {
  auto enc = detect_encoding(payload);
  ControlResponse resp;
  if (!enc) {
    resp.status = CallStatus::decode_error;
    resp.message = "unrecognized payload encoding";
    return encode(resp, "json");
  }
  ControlRequest req;
  try {
    req = decode_request(payload);
  } catch (const Error& e) {
    resp.status = CallStatus::decode_error;
    resp.message = e.what();
    return encode(resp, *enc);
  }
  resp.session_id = req.session_id;
  resp.correlation_id = req.correlation_id;
  auto s = find_session(req.session_id);
  codegen::BindingRuntime* runtime = nullptr;
  std::string encoding;
  if (s) {
    std::lock_guard lock(mu_);
    if (s->state == SessionState::complete) runtime = s->runtime.get();
    encoding = s->cfr.encoding_scheme;
  }
  if (!runtime) {
    resp.status = CallStatus::not_provisioned;
    resp.message = "session " + req.session_id + " is not provisioned";
    return encode(resp, *enc);
  }
  if (*enc != encoding) {
    resp.status = CallStatus::decode_error;
    resp.message = "session negotiated " + encoding + ", got " + *enc;
    return encode(resp, *enc);
  }
  const auto* entry = s->cfr.find(req.function);
  if (!entry) {
    resp.status = CallStatus::unknown_function;
    resp.message = req.function + " is not in the CFR";
  } else {
    try {
      if (*enc == "json") {
        req = decode_request(payload, [&](std::string_view) { return &entry->requirement.params; });
      }
      auto r = runtime->call(req.function, req.args);
      resp.status = r.status;
      resp.message = r.message;
      resp.results = std::move(r.results);
    } catch (const Error& e) {
      resp.status = CallStatus::decode_error;
      resp.message = e.what();
    }
  }
  s->transcript.record(9, profile_->vendor, "control_response",
                       req.function + " #" + std::to_string(req.correlation_id) + " " + std::string(codegen::to_string(resp.status)));
  return encode(resp, *enc);
}

void NfNode::serve_connection(std::shared_ptr<Socket> socket) {
  try {
    while (running_) {
      auto payload = socket->recv_frame();
      if (!payload) break;
      socket->send_frame(handle_frame(*payload));
    }
  } catch (const Error&) {
  }
  socket->close();
}

void NfNode::start() {
  if (running_) return;
  http_ = std::make_unique<httplib::Server>();
  install_routes();
  if (options_.provisioning_port == 0) {
    provisioning_port_ = http_->bind_to_any_port(options_.host);
  } else {
    provisioning_port_ = http_->bind_to_port(options_.host, options_.provisioning_port) ? options_.provisioning_port : -1;
  }
  if (provisioning_port_ <= 0) {
    throw Error(ErrorCode::transport, profile_->vendor + ": cannot bind provisioning port " + std::to_string(options_.provisioning_port));
  }
  try {
    listener_ = std::make_unique<Listener>(options_.host, options_.control_port);
  } catch (const Error&) {
    http_->stop();
    throw;
  }
  control_port_ = listener_->port();
  running_ = true;
  http_thread_ = std::thread([this] { http_->listen_after_bind(); });
  accept_thread_ = std::thread([this] {
    while (running_) {
      auto sock = listener_->accept(std::chrono::milliseconds(50));
      if (!sock) continue;
      auto shared = std::make_shared<Socket>(std::move(*sock));
      std::lock_guard lock(mu_);
      connections_.emplace_back(shared, std::thread([this, shared] { serve_connection(shared); }));
    }
  });
  http_->wait_until_ready();
}

void NfNode::stop() {
  if (!running_.exchange(false)) return;
  http_->stop();
  if (http_thread_.joinable()) http_thread_.join();
  if (accept_thread_.joinable()) accept_thread_.join();
  listener_->close();
  std::vector<std::thread> tasks;
  std::vector<std::pair<std::shared_ptr<Socket>, std::thread>> conns;
  {
    std::lock_guard lock(mu_);
    tasks.swap(tasks_);
    conns.swap(connections_);
  }
  for (auto& [sock, t] : conns) sock->shutdown();
  for (auto& [sock, t] : conns) {
    if (t.joinable()) t.join();
  }
  for (auto& t : tasks) {
    if (t.joinable()) t.join();
  }
}

NfEndpoint NfNode::endpoint() const {
  return NfEndpoint{profile_->vendor, options_.host, provisioning_port_, control_port_, ""};
}

std::vector<NfNode::SessionInfo> NfNode::sessions() const {
  std::lock_guard lock(mu_);
  std::vector<SessionInfo> out;
  for (const auto& [id, s] : sessions_) out.push_back({id, s->source_nf, s->state, s->attempts, s->cfr.encoding_scheme});
  return out;
}

std::vector<TranscriptEntry> NfNode::session_transcript(const std::string& session_id) const {
  auto s = find_session(session_id);
  return s ? s->transcript.entries() : std::vector<TranscriptEntry>{};
}

std::vector<std::string> NfNode::issued_tokens() const {
  std::lock_guard lock(mu_);
  return tokens_;
}

}  // namespace ifgen::proto
