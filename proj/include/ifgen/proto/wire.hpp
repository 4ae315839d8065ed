#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifgen/codegen/runtime.hpp"
#include "ifgen/doc/documents.hpp"
#include "ifgen/value.hpp"

namespace ifgen::proto {

enum class MessageKind { cfr_post, cfr_ack, provisioning_complete, provisioning_failed, capability_request, capability_response };
std::string_view to_string(MessageKind k);
std::optional<MessageKind> parse_message_kind(std::string_view s);

/// Body of provisioning HTTP replies. `payload` is opaque text (JSON for
/// acks, completions and failures).
struct ProvisioningMessage {
  MessageKind kind = MessageKind::cfr_ack;
  std::string session_id;
  std::string payload;

  bool operator==(const ProvisioningMessage&) const = default;
};

std::string serialize(const ProvisioningMessage& m);
ProvisioningMessage parse_provisioning_message(std::string_view text);

struct ControlRequest {
  std::string session_id;
  std::string function;
  std::uint64_t correlation_id = 0;
  ArgMap args;

  bool operator==(const ControlRequest&) const = default;
};

struct ControlResponse {
  std::string session_id;
  std::uint64_t correlation_id = 0;
  codegen::CallStatus status = codegen::CallStatus::ok;
  std::string message;
  ArgMap results;

  bool operator==(const ControlResponse&) const = default;
};

inline constexpr std::uint8_t kFlatbinMagic = 0xFB;
inline constexpr std::uint8_t kFlatbinVersion = 0x01;
inline constexpr std::size_t kMaxFrame = 16u << 20;

/// "json" or "flatbin" from the first payload byte; nullopt otherwise.
std::optional<std::string> detect_encoding(std::string_view payload);
bool known_encoding(std::string_view encoding);

/// Declared signature used to type JSON values; nullptr decodes untyped.
using SignatureLookup = std::function<const std::vector<doc::ParamSpec>*(std::string_view function)>;

std::string encode(const ControlRequest& m, std::string_view encoding);
std::string encode(const ControlResponse& m, std::string_view encoding);
/// Throws Error(syntax) or Error(schema) for malformed payloads.
ControlRequest decode_request(std::string_view payload, const SignatureLookup& params = {});
/// `returns` is keyed by the function the request named.
ControlResponse decode_response(std::string_view payload, const std::vector<doc::ParamSpec>* returns = nullptr);

/// 4-byte big-endian length, then the payload.
std::string frame(std::string_view payload);
/// Splits complete frames off the front of `buffer`.
std::vector<std::string> unframe(std::string& buffer);

}  // namespace ifgen::proto
