#include "ifgen/value.hpp"

#include <array>
#include <cstdio>

namespace ifgen {

namespace {
constexpr std::array<std::string_view, 6> kTypeNames{"text", "integer", "real", "boolean", "timestamp",
                                                     "list-of-text"};
}

std::string_view to_string(SemanticType type) { return kTypeNames[static_cast<std::size_t>(type)]; }

std::optional<SemanticType> parse_semantic_type(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<SemanticType>(i);
  }
  return std::nullopt;
}

double Value::as_number() const {
  if (type() == SemanticType::integer) return static_cast<double>(as_integer());
  return as_real();
}

std::string to_display(const Value& value) {
  switch (value.type()) {
    case SemanticType::text: return '"' + value.as_text() + '"';
    case SemanticType::integer: return std::to_string(value.as_integer());
    case SemanticType::real: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", value.as_real());
      return buf;
    }
    case SemanticType::boolean: return value.as_boolean() ? "true" : "false";
    case SemanticType::timestamp: return "@" + std::to_string(value.as_timestamp().ms);
    case SemanticType::text_list: {
      std::string out = "[";
      for (std::size_t i = 0; i < value.as_text_list().size(); ++i) {
        if (i) out += ", ";
        out += '"' + value.as_text_list()[i] + '"';
      }
      return out + "]";
    }
  }
  return {};
}

}  // namespace ifgen
