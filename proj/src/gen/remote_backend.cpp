#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "ifgen/error.hpp"
#include "ifgen/gen/backend.hpp"

namespace ifgen::gen {

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::config, "URL without scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// POST with retries on transport errors, 429 and 5xx.
std::string post_json(const RemoteOptions& options, const std::string& url, const std::string& body) {
  auto [origin, path] = split_url(url);
  auto backoff = options.initial_backoff;
  std::string last_error;
  for (int attempt = 0; attempt <= options.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(origin);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(options.timeout);
    client.set_bearer_token_auth(options.api_key);
    auto res = client.Post(path, body, "application/json");
    if (!res) {
      last_error = "transport: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::backend_unavailable, "HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    return res->body;
  }
  throw Error(ErrorCode::backend_unavailable, "remote backend failed after retries (" + last_error + ")");
}

}  // namespace

RemoteOptions RemoteOptions::from_env() {
  RemoteOptions o;
  o.url = env_or_empty("IFGEN_LLM_URL");
  o.model = env_or_empty("IFGEN_LLM_MODEL");
  o.api_key = env_or_empty("IFGEN_LLM_KEY");
  return o;
}

RemoteBackend::RemoteBackend(RemoteOptions options) : options_(std::move(options)) {}

nlohmann::json RemoteBackend::build_body(const GenerationRequest& request) const {
  std::string user = request.user_prompt;
  if (!request.context_chunks.empty()) {
    user += "\n\nRetrieved context:\n";
    for (std::size_t i = 0; i < request.context_chunks.size(); ++i) {
      user += "--- chunk " + std::to_string(i + 1) + " ---\n" + request.context_chunks[i] + "\n";
    }
  }
  return {{"model", options_.model},
          {"temperature", request.temperature},
          {"max_tokens", request.max_output_tokens},
          {"messages",
           nlohmann::json::array({{{"role", "system"}, {"content", request.system_prompt}},
                                  {{"role", "user"}, {"content", user}}})}};
}

GenerationResponse RemoteBackend::parse_body(const std::string& body, std::int64_t max_output_tokens) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::malformed_response, std::string("response is not JSON: ") + e.what());
  }
  try {
    const auto& choice = j.at("choices").at(0);
    GenerationResponse out;
    out.text = choice.at("message").at("content").get<std::string>();
    if (choice.value("finish_reason", "") == "length") {
      throw Error(ErrorCode::token_limit, "completion truncated at max_tokens");
    }
    if (j.contains("usage")) {
      out.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
      out.usage.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
    }
    if (out.usage.prompt_tokens < 0 || out.usage.completion_tokens < 0) {
      throw Error(ErrorCode::malformed_response, "negative usage counts");
    }
    if (out.usage.completion_tokens > max_output_tokens) {
      throw Error(ErrorCode::token_limit, "completion exceeds max_output_tokens");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_response, std::string("unexpected response shape: ") + e.what());
  }
}

GenerationResponse RemoteBackend::generate(const GenerationRequest& request) {
  request.validate();
  if (!options_.configured()) {
    throw Error(ErrorCode::backend_unavailable, "remote backend needs IFGEN_LLM_URL, IFGEN_LLM_MODEL and IFGEN_LLM_KEY");
  }
  auto start = std::chrono::steady_clock::now();
  auto body = post_json(options_, options_.url, build_body(request).dump());
  auto out = parse_body(body, request.max_output_tokens);
  out.backend_id = options_.id;
  out.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return out;
}

RemoteEmbedder::RemoteEmbedder(RemoteOptions options, std::string model, std::size_t dimension)
    : options_(std::move(options)), model_(std::move(model)), dimension_(dimension) {}

Vector RemoteEmbedder::embed(std::string_view text) const {
  if (text.empty()) throw Error(ErrorCode::precondition, "cannot embed empty text");
  if (!options_.configured()) throw Error(ErrorCode::backend_unavailable, "remote embedder is not configured");
  auto url = options_.url;
  if (auto pos = url.rfind("chat/completions"); pos != std::string::npos) url.replace(pos, 16, "embeddings");
  nlohmann::json body = {{"model", model_}, {"input", std::string(text)}};
  auto response = post_json(options_, url, body.dump());
  try {
    auto j = nlohmann::json::parse(response);
    auto v = j.at("data").at(0).at("embedding").get<Vector>();
    if (v.size() != dimension_) {
      throw Error(ErrorCode::malformed_response, "embedding has dimension " + std::to_string(v.size()));
    }
    normalize_l2(v);
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_response, std::string("unexpected embedding response: ") + e.what());
  }
}

}  // namespace ifgen::gen
