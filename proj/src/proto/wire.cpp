#include "ifgen/proto/wire.hpp"

#include <bit>
#include <cstring>

#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"

namespace ifgen::proto {

namespace json_io = doc::json_io;
using json_io::Json;

namespace {

constexpr std::uint8_t kRequestTag = 0x01;
constexpr std::uint8_t kResponseTag = 0x02;

constexpr MessageKind kKinds[] = {MessageKind::cfr_post, MessageKind::cfr_ack, MessageKind::provisioning_complete,
                                  MessageKind::provisioning_failed, MessageKind::capability_request,
                                  MessageKind::capability_response};

constexpr codegen::CallStatus kStatuses[] = {
    codegen::CallStatus::ok,           codegen::CallStatus::guard_rejected,   codegen::CallStatus::domain_error,
    codegen::CallStatus::decode_error, codegen::CallStatus::adaptation_error, codegen::CallStatus::invoke_error,
    codegen::CallStatus::encode_error, codegen::CallStatus::not_provisioned,  codegen::CallStatus::unknown_function,
};

// Type tags on the wire; order matches SemanticType.
std::uint8_t type_tag(SemanticType t) { return static_cast<std::uint8_t>(t); }

struct Writer {
  std::string out;

  void u8(std::uint8_t v) { out.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out.append(s);
  }
  void value(const Value& v) {
    u8(type_tag(v.type()));
    switch (v.type()) {
      case SemanticType::text: str(v.as_text()); break;
      case SemanticType::integer: u64(static_cast<std::uint64_t>(v.as_integer())); break;
      case SemanticType::real: u64(std::bit_cast<std::uint64_t>(v.as_real())); break;
      case SemanticType::boolean: u8(v.as_boolean() ? 1 : 0); break;
      case SemanticType::timestamp: u64(static_cast<std::uint64_t>(v.as_timestamp().ms)); break;
      case SemanticType::text_list:
        u32(static_cast<std::uint32_t>(v.as_text_list().size()));
        for (const auto& s : v.as_text_list()) str(s);
        break;
    }
  }
  void fields(const ArgMap& m) {
    u32(static_cast<std::uint32_t>(m.size()));
    for (const auto& [k, v] : m) {
      str(k);
      value(v);
    }
  }
};

struct Reader {
  std::string_view in;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::syntax, "flatbin: " + what, "byte " + std::to_string(pos));
  }
  void need(std::size_t n) const {
    if (in.size() - pos < n) fail("truncated");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in[pos++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | u8();
    return v;
  }
  std::string str() {
    auto n = u32();
    need(n);
    std::string s(in.substr(pos, n));
    pos += n;
    return s;
  }
  Value value() {
    auto tag = u8();
    switch (tag) {
      case 0: return Value(str());
      case 1: return Value(static_cast<std::int64_t>(u64()));
      case 2: return Value(std::bit_cast<double>(u64()));
      case 3: {
        auto b = u8();
        if (b > 1) fail("boolean byte " + std::to_string(b));
        return Value(b == 1);
      }
      case 4: return Value(Timestamp{static_cast<std::int64_t>(u64())});
      case 5: {
        auto n = u32();
        TextList list;
        for (std::uint32_t i = 0; i < n; ++i) list.push_back(str());
        return Value(std::move(list));
      }
      default: fail("unknown type tag " + std::to_string(tag));
    }
  }
  ArgMap fields() {
    auto n = u32();
    ArgMap m;
    std::string prev;
    for (std::uint32_t i = 0; i < n; ++i) {
      auto k = str();
      if (i > 0 && k <= prev) fail("field names out of order");
      auto v = value();
      m.emplace(k, std::move(v));
      prev = std::move(k);
    }
    return m;
  }
  void header(std::uint8_t tag) {
    if (u8() != kFlatbinMagic) fail("bad magic");
    if (auto v = u8(); v != kFlatbinVersion) fail("unsupported version " + std::to_string(v));
    if (u8() != tag) fail(tag == kRequestTag ? "not a request" : "not a response");
  }
  void end() const {
    if (pos != in.size()) fail("trailing bytes");
  }
};

Json json_fields(const ArgMap& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[k] = json_io::write_value(v);
  return out;
}

ArgMap read_fields(const Json& obj, const std::vector<doc::ParamSpec>* declared, const std::string& path) {
  if (!obj.is_object()) throw Error(ErrorCode::schema, "expected object", path);
  ArgMap m;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    auto p = path + "." + it.key();
    const doc::ParamSpec* spec = nullptr;
    if (declared) {
      for (const auto& d : *declared) {
        if (d.name == it.key()) spec = &d;
      }
    }
    m.emplace(it.key(), spec ? json_io::read_value(it.value(), spec->type, p) : json_io::read_untyped_value(it.value(), p));
  }
  return m;
}

std::uint64_t read_correlation(const Json& j) {
  const auto& c = json_io::require(j, "correlation_id", "");
  if (!c.is_number_unsigned()) throw Error(ErrorCode::schema, "expected unsigned integer", "correlation_id");
  return c.get<std::uint64_t>();
}

Json parse_json_payload(std::string_view payload, std::string_view kind) {
  auto j = json_io::parse_text(payload);
  json_io::require_object(j, "");
  json_io::check_kind(j, kind);
  return j;
}

}  // namespace

std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::cfr_post: return "cfr_post";
    case MessageKind::cfr_ack: return "cfr_ack";
    case MessageKind::provisioning_complete: return "provisioning_complete";
    case MessageKind::provisioning_failed: return "provisioning_failed";
    case MessageKind::capability_request: return "capability_request";
    case MessageKind::capability_response: return "capability_response";
  }
  return "cfr_ack";
}

std::optional<MessageKind> parse_message_kind(std::string_view s) {
  for (auto k : kKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::string serialize(const ProvisioningMessage& m) {
  return json_io::dump_canonical({{"kind", "provisioning_message"},
                                  {"schema_version", "1.0.0"},
                                  {"message", to_string(m.kind)},
                                  {"session_id", m.session_id},
                                  {"payload", m.payload}});
}

ProvisioningMessage parse_provisioning_message(std::string_view text) {
  auto j = json_io::parse_text(text);
  json_io::require_object(j, "");
  json_io::check_kind(j, "provisioning_message");
  json_io::check_schema_version(j);
  ProvisioningMessage m;
  auto kind = json_io::read_string(j, "message", "");
  auto k = parse_message_kind(kind);
  if (!k) throw Error(ErrorCode::schema, "unknown message " + kind, "message");
  m.kind = *k;
  m.session_id = json_io::read_string(j, "session_id", "");
  m.payload = json_io::read_string(j, "payload", "");
  return m;
}

std::optional<std::string> detect_encoding(std::string_view payload) {
  if (payload.empty()) return std::nullopt;
  if (static_cast<std::uint8_t>(payload[0]) == kFlatbinMagic) return "flatbin";
  if (payload[0] == '{') return "json";
  return std::nullopt;
}

bool known_encoding(std::string_view encoding) { return encoding == "json" || encoding == "flatbin"; }

std::string encode(const ControlRequest& m, std::string_view encoding) {
  if (encoding == "json") {
    return Json{{"kind", "control_request"},
                {"session_id", m.session_id},
                {"function", m.function},
                {"correlation_id", m.correlation_id},
                {"args", json_fields(m.args)}}
        .dump();
  }
  if (encoding != "flatbin") throw Error(ErrorCode::precondition, "unknown encoding " + std::string(encoding));
  Writer w;
  w.u8(kFlatbinMagic);
  w.u8(kFlatbinVersion);
  w.u8(kRequestTag);
  w.u64(m.correlation_id);
  w.str(m.session_id);
  w.str(m.function);
  w.fields(m.args);
  return std::move(w.out);
}

std::string encode(const ControlResponse& m, std::string_view encoding) {
  if (encoding == "json") {
    return Json{{"kind", "control_response"},
                {"session_id", m.session_id},
                {"correlation_id", m.correlation_id},
                {"status", codegen::to_string(m.status)},
                {"message", m.message},
                {"results", json_fields(m.results)}}
        .dump();
  }
  if (encoding != "flatbin") throw Error(ErrorCode::precondition, "unknown encoding " + std::string(encoding));
  Writer w;
  w.u8(kFlatbinMagic);
  w.u8(kFlatbinVersion);
  w.u8(kResponseTag);
  w.u64(m.correlation_id);
  w.str(m.session_id);
  w.u8(static_cast<std::uint8_t>(m.status));
  w.str(m.message);
  w.fields(m.results);
  return std::move(w.out);
}

ControlRequest decode_request(std::string_view payload, const SignatureLookup& params) {
  auto enc = detect_encoding(payload);
  if (!enc) throw Error(ErrorCode::syntax, "unrecognized payload encoding");
  ControlRequest m;
  if (*enc == "json") {
    auto j = parse_json_payload(payload, "control_request");
    m.session_id = json_io::read_string(j, "session_id", "");
    m.function = json_io::read_string(j, "function", "");
    m.correlation_id = read_correlation(j);
    m.args = read_fields(json_io::require(j, "args", ""), params ? params(m.function) : nullptr, "args");
    return m;
  }
  Reader r{payload};
  r.header(kRequestTag);
  m.correlation_id = r.u64();
  m.session_id = r.str();
  m.function = r.str();
  m.args = r.fields();
  r.end();
  return m;
}

ControlResponse decode_response(std::string_view payload, const std::vector<doc::ParamSpec>* returns) {
  auto enc = detect_encoding(payload);
  if (!enc) throw Error(ErrorCode::syntax, "unrecognized payload encoding");
  ControlResponse m;
  if (*enc == "json") {
    auto j = parse_json_payload(payload, "control_response");
    m.session_id = json_io::read_string(j, "session_id", "");
    m.correlation_id = read_correlation(j);
    auto status = json_io::read_string(j, "status", "");
    auto s = codegen::parse_call_status(status);
    if (!s) throw Error(ErrorCode::schema, "unknown status " + status, "status");
    m.status = *s;
    m.message = json_io::read_string(j, "message", "");
    m.results = read_fields(json_io::require(j, "results", ""), returns, "results");
    return m;
  }
  Reader r{payload};
  r.header(kResponseTag);
  m.correlation_id = r.u64();
  m.session_id = r.str();
  auto code = r.u8();
  if (code >= std::size(kStatuses)) r.fail("unknown status " + std::to_string(code));
  m.status = kStatuses[code];
  m.message = r.str();
  m.results = r.fields();
  r.end();
  return m;
}

std::string frame(std::string_view payload) {
  if (payload.size() > kMaxFrame) throw Error(ErrorCode::transport, "frame exceeds " + std::to_string(kMaxFrame) + " bytes");
  std::string out;
  out.reserve(payload.size() + 4);
  auto n = static_cast<std::uint32_t>(payload.size());
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((n >> s) & 0xFF));
  out.append(payload);
  return out;
}

std::vector<std::string> unframe(std::string& buffer) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (buffer.size() - pos >= 4) {
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<std::uint8_t>(buffer[pos + i]);
    if (n > kMaxFrame) throw Error(ErrorCode::transport, "frame length " + std::to_string(n) + " exceeds limit");
    if (buffer.size() - pos - 4 < n) break;
    out.emplace_back(buffer.substr(pos + 4, n));
    pos += 4 + n;
  }
  buffer.erase(0, pos);
  return out;
}

}  // namespace ifgen::proto
