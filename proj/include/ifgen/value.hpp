#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ifgen {

enum class SemanticType { text, integer, real, boolean, timestamp, text_list };

std::string_view to_string(SemanticType type);
std::optional<SemanticType> parse_semantic_type(std::string_view name);

// Milliseconds since the Unix epoch.
struct Timestamp {
  std::int64_t ms = 0;
  auto operator<=>(const Timestamp&) const = default;
};

using TextList = std::vector<std::string>;

/// A typed scalar or list carried through documents, control messages and
/// the binding runtime.
class Value {
 public:
  using Storage = std::variant<std::string, std::int64_t, double, bool, Timestamp, TextList>;

  Value() : data_(std::string{}) {}
  Value(std::string v) : data_(std::move(v)) {}
  Value(const char* v) : data_(std::string(v)) {}
  Value(std::int64_t v) : data_(v) {}
  Value(int v) : data_(static_cast<std::int64_t>(v)) {}
  Value(double v) : data_(v) {}
  Value(bool v) : data_(v) {}
  Value(Timestamp v) : data_(v) {}
  Value(TextList v) : data_(std::move(v)) {}

  SemanticType type() const { return static_cast<SemanticType>(data_.index()); }

  const std::string& as_text() const { return std::get<std::string>(data_); }
  std::int64_t as_integer() const { return std::get<std::int64_t>(data_); }
  double as_real() const { return std::get<double>(data_); }
  bool as_boolean() const { return std::get<bool>(data_); }
  Timestamp as_timestamp() const { return std::get<Timestamp>(data_); }
  const TextList& as_text_list() const { return std::get<TextList>(data_); }

  // Integer or real widened to double.
  double as_number() const;

  const Storage& storage() const { return data_; }

  bool operator==(const Value&) const = default;

 private:
  Storage data_;
};

std::string to_display(const Value& value);

using ArgMap = std::map<std::string, Value>;

}  // namespace ifgen
