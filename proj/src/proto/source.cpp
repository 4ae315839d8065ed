#include "ifgen/proto/source.hpp"

#include <httplib.h>

#include <random>
#include <thread>

#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/hash.hpp"
#include "ifgen/proto/node.hpp"

namespace ifgen::proto {

using doc::json_io::Json;

namespace {

httplib::Client http_client(const NfEndpoint& ep) {
  httplib::Client c(ep.host, ep.provisioning_port);
  c.set_connection_timeout(std::chrono::seconds(2));
  c.set_read_timeout(std::chrono::seconds(10));
  c.set_keep_alive(false);
  return c;
}

httplib::Headers token_headers(const NfEndpoint& ep) { return {{kTokenHeader, ep.trust_token}}; }

std::string where(const NfEndpoint& ep) { return ep.nf_id + " at " + ep.host + ":" + std::to_string(ep.provisioning_port); }

// Reason carried by a provisioning_failed body, or the raw body.
std::string failure_reason(const std::string& body) {
  try {
    auto m = parse_provisioning_message(body);
    auto p = Json::parse(m.payload);
    if (p.contains("reason")) return p["reason"].get<std::string>();
  } catch (const std::exception&) {
  }
  return body;
}

void check_status(const httplib::Result& res, const NfEndpoint& ep, const std::string& what) {
  if (!res) throw Error(ErrorCode::unreachable, what + ": " + where(ep) + ": " + httplib::to_string(res.error()));
  if (res->status == 403) throw Error(ErrorCode::trust_rejected, what + ": " + failure_reason(res->body));
  if (res->status != 200) throw Error(ErrorCode::rejected, what + ": " + failure_reason(res->body));
}

std::string prefixed(int step, const Error& e) { return "step " + std::to_string(step) + ": " + e.what(); }

}  // namespace

ProvisioningClient::ProvisioningClient(NfEndpoint endpoint, std::string source_nf, Transcript* transcript)
    : endpoint_(std::move(endpoint)), source_nf_(std::move(source_nf)), transcript_(transcript) {}

std::string ProvisioningClient::establish_trust() {
  std::random_device rd;
  char challenge[33];
  std::snprintf(challenge, sizeof challenge, "%08x%08x%08x%08x", rd(), rd(), rd(), rd());
  auto c = http_client(endpoint_);
  auto res = c.Post("/provision/trust", Json{{"kind", "trust_request"}, {"source_nf", source_nf_}, {"challenge", challenge}}.dump(),
                    "application/json");
  check_status(res, endpoint_, "trust");
  Json body;
  try {
    body = Json::parse(res->body);
  } catch (const std::exception&) {
    throw Error(ErrorCode::trust_rejected, "trust reply is not JSON");
  }
  if (!body.is_object() || !body.contains("token") || !body.contains("response") ||
      body["response"] != trust_response(challenge, endpoint_.nf_id)) {
    throw Error(ErrorCode::trust_rejected, endpoint_.nf_id + " failed the trust challenge");
  }
  endpoint_.trust_token = body["token"].get<std::string>();
  if (transcript_) transcript_->record(2, source_nf_, "trust_established", endpoint_.nf_id);
  return endpoint_.trust_token;
}

doc::CapabilityDocument ProvisioningClient::fetch_capability() {
  if (transcript_) transcript_->record(2, source_nf_, "capability_request", endpoint_.nf_id);
  auto c = http_client(endpoint_);
  auto res = c.Get("/capability", token_headers(endpoint_));
  check_status(res, endpoint_, "capability");
  auto caps = doc::parse_capability_document(res->body);
  if (transcript_) {
    transcript_->record(2, source_nf_, "capability_response", std::to_string(caps.capabilities.size()) + " capabilities");
  }
  return caps;
}

std::string ProvisioningClient::post_cfr(const doc::CfrDocument& cfr) {
  if (transcript_) {
    transcript_->record(4, source_nf_, "cfr_post", std::to_string(cfr.entries.size()) + " entries to " + endpoint_.nf_id);
  }
  auto c = http_client(endpoint_);
  auto res = c.Post("/provision/cfr", token_headers(endpoint_), doc::serialize_cfr(cfr), "application/json");
  check_status(res, endpoint_, "cfr_post");
  auto m = parse_provisioning_message(res->body);
  if (m.kind != MessageKind::cfr_ack || m.session_id.empty()) {
    throw Error(ErrorCode::rejected, "cfr_post: expected cfr_ack, got " + std::string(to_string(m.kind)));
  }
  return m.session_id;
}

Completion ProvisioningClient::await_completion(const std::string& session_id, std::chrono::milliseconds timeout,
                                                std::chrono::milliseconds poll) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    auto c = http_client(endpoint_);
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) break;
    c.set_connection_timeout(std::min<std::chrono::milliseconds>(left, std::chrono::seconds(2)));
    c.set_read_timeout(std::min<std::chrono::milliseconds>(left, std::chrono::seconds(10)));
    auto res = c.Get("/provision/status/" + session_id, token_headers(endpoint_));
    if (res && res->status == 403) throw Error(ErrorCode::trust_rejected, "status: " + failure_reason(res->body));
    if (res && res->status == 404) throw Error(ErrorCode::rejected, "status: " + failure_reason(res->body));
    if (res && res->status == 200) {
      auto m = parse_provisioning_message(res->body);
      if (m.kind == MessageKind::provisioning_complete || m.kind == MessageKind::provisioning_failed) {
        auto p = Json::parse(m.payload);
        Completion out;
        out.complete = m.kind == MessageKind::provisioning_complete;
        out.session_id = m.session_id;
        out.attempts = p.value("attempts", 0);
        out.reason = p.value("reason", "");
        out.report = p.value("report", "");
        if (transcript_) {
          transcript_->record(7, source_nf_, std::string(to_string(m.kind)) + "_received",
                              session_id + " after " + std::to_string(out.attempts) + " attempt(s)" +
                                  (out.reason.empty() ? "" : ": " + out.reason));
        }
        return out;
      }
    }
    if (std::chrono::steady_clock::now() + poll >= deadline) break;
    std::this_thread::sleep_for(poll);
  }
  throw Error(ErrorCode::timeout, "no provisioning outcome for " + session_id + " within " + std::to_string(timeout.count()) + " ms");
}

ControlClient::ControlClient(const NfEndpoint& endpoint, match::ClientSpec spec, std::string session_id, Transcript* transcript)
    : spec_(std::move(spec)), session_id_(std::move(session_id)), transcript_(transcript) {
  socket_ = Socket::connect(endpoint.host, endpoint.control_port);
  if (transcript_) {
    transcript_->record(8, "client", "connected", endpoint.nf_id + " control port, " + spec_.encoding_scheme);
  }
}

std::uint64_t ControlClient::send(std::string_view function, const ArgMap& args) {
  const auto* f = spec_.find(function);
  if (!f) throw Error(ErrorCode::schema, std::string(function) + " is not part of the generated interface");
  if (auto why = codegen::signature_mismatch(f->params, args); !why.empty()) {
    throw Error(ErrorCode::schema, std::string(function) + ": " + why);
  }
  auto id = next_id_++;
  ControlRequest req{session_id_, std::string(function), id, args};
  auto payload = encode(req, spec_.encoding_scheme);
  if (transcript_) transcript_->record(9, "client", "control_request", std::string(function) + " #" + std::to_string(id));
  socket_.send_frame(payload);
  pending_[id] = std::string(function);
  return id;
}

codegen::CallResult ControlClient::receive(std::uint64_t correlation_id, std::chrono::milliseconds timeout) {
  for (;;) {
    if (auto it = ready_.find(correlation_id); it != ready_.end()) {
      auto out = std::move(it->second);
      ready_.erase(it);
      return out;
    }
    if (!pending_.count(correlation_id)) {
      throw Error(ErrorCode::precondition, "no request with correlation id " + std::to_string(correlation_id));
    }
    auto payload = socket_.recv_frame(timeout);
    if (!payload) throw Error(ErrorCode::transport, "control connection closed by " + spec_.dest_nf);
    auto enc = detect_encoding(*payload);
    if (!enc || *enc != spec_.encoding_scheme) {
      throw Error(ErrorCode::transport, "reply not in the negotiated " + spec_.encoding_scheme + " encoding");
    }
    // Peek the id, then decode the results against the declared returns.
    auto head = decode_response(*payload);
    auto p = pending_.find(head.correlation_id);
    if (p == pending_.end()) {
      throw Error(ErrorCode::transport, "reply with unexpected correlation id " + std::to_string(head.correlation_id));
    }
    const auto* f = spec_.find(p->second);
    auto resp = *enc == "json" ? decode_response(*payload, &f->returns) : head;
    codegen::CallResult r{resp.status, std::move(resp.results), resp.message};
    if (r.status == codegen::CallStatus::ok) {
      if (auto why = codegen::signature_mismatch(f->returns, r.results); !why.empty()) {
        r.status = codegen::CallStatus::decode_error;
        r.message = "reply does not fit the declared returns: " + why;
      }
    }
    if (transcript_) {
      transcript_->record(9, "client", "control_reply",
                          p->second + " #" + std::to_string(resp.correlation_id) + " " + std::string(codegen::to_string(r.status)));
    }
    pending_.erase(p);
    ready_.emplace(resp.correlation_id, std::move(r));
  }
}

codegen::CallResult ControlClient::call(std::string_view function, const ArgMap& args) { return receive(send(function, args)); }

Flow provision_interface(const NfEndpoint& endpoint, const std::vector<doc::ControlFunctionRequirement>& requirements,
                         gen::Backend& backend, Transcript& transcript, const FlowOptions& options) {
  Flow flow;
  const auto& src = options.source_nf;
  transcript.record(1, src, "requirements", std::to_string(requirements.size()) + " control function requirement(s) for " +
                                                endpoint.nf_id);
  ProvisioningClient prov(endpoint, src, &transcript);
  try {
    prov.establish_trust();
    match::SessionOptions so;
    so.source_nf = src;
    so.source_encodings = options.source_encodings;
    flow.matching = match::run_matching_session(requirements, [&] { return prov.fetch_capability(); }, options.matching,
                                                backend, match::Scorer::standard(), so);
  } catch (const Error& e) {
    throw Error(e.code(), prefixed(2, e));
  }
  int exact = 0, closest = 0, unsupported = 0, attempts = 0;
  for (const auto& o : flow.matching.outcomes) {
    (o.decision == match::Decision::exact ? exact : o.decision == match::Decision::closest ? closest : unsupported)++;
    attempts += o.attempts;
  }
  transcript.record(2, src, "matched", std::to_string(exact) + " exact, " + std::to_string(closest) + " closest, " +
                                           std::to_string(unsupported) + " unsupported in " + std::to_string(attempts) +
                                           " generation call(s)");
  if (flow.matching.failure) throw Error(flow.matching.failure->code(), prefixed(3, *flow.matching.failure));
  const auto& cfr = *flow.matching.cfr;
  flow.client_spec = match::make_client_spec(cfr, endpoint.host, endpoint.control_port);
  transcript.record(3, src, "cfr_built", std::to_string(cfr.entries.size()) + " entries, encoding " + cfr.encoding_scheme);
  transcript.record(3, src, "client_generated", std::to_string(flow.client_spec.functions.size()) + " functions");
  try {
    flow.session_id = prov.post_cfr(cfr);
  } catch (const Error& e) {
    throw Error(e.code(), prefixed(4, e));
  }
  try {
    flow.completion = prov.await_completion(flow.session_id, options.timeout);
  } catch (const Error& e) {
    throw Error(e.code(), prefixed(7, e));
  }
  if (!flow.completion.complete) return flow;
  try {
    flow.client = std::make_unique<ControlClient>(prov.endpoint(), flow.client_spec, flow.session_id, &transcript);
  } catch (const Error& e) {
    throw Error(e.code(), prefixed(8, e));
  }
  return flow;
}

}  // namespace ifgen::proto
