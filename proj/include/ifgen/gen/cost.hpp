#pragma once

#include <cstdint>
#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ifgen::gen {

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  TokenUsage& operator+=(const TokenUsage& o) {
    prompt_tokens += o.prompt_tokens;
    completion_tokens += o.completion_tokens;
    return *this;
  }
  bool operator==(const TokenUsage&) const = default;
};

/// ceil(UTF-8 bytes / 4).
std::int64_t estimate_tokens(std::string_view text);

/// Exact decimal currency amount, stored as an integer count of 1e-12 units.
class Money {
 public:
  static constexpr int kScale = 12;

  constexpr Money() = default;
  static Money from_picos(std::int64_t picos) { return Money(picos); }
  /// Parses "2.50", "-0.000125", "10". At most 12 fractional digits.
  static Money parse(std::string_view text);

  std::int64_t picos() const { return picos_; }
  /// Fixed-point rendering with trailing zeros trimmed, minimum 2 decimals.
  std::string to_string() const;
  double to_double() const { return static_cast<double>(picos_) * 1e-12; }

  Money& operator+=(Money o);
  friend Money operator+(Money a, Money b) { return a += b; }
  auto operator<=>(const Money&) const = default;

 private:
  explicit constexpr Money(std::int64_t picos) : picos_(picos) {}
  std::int64_t picos_ = 0;
};

struct Price {
  Money prompt_per_million;
  Money completion_per_million;
};

/// Per-backend prices. Values are limited to 6 fractional digits, so the
/// per-token cost is an exact multiple of 1e-12.
class PriceTable {
 public:
  void set(const std::string& backend_id, Price price);
  bool contains(std::string_view backend_id) const;
  const Price& at(std::string_view backend_id) const;

  /// `{"prices": {"<backend>": {"prompt_per_million": "2.50", "completion_per_million": "10.00"}}}`.
  /// Prices are decimal strings so no binary floating point is involved.
  static PriceTable parse(std::string_view text);
  static PriceTable load(const std::string& path);
  /// data/config/prices.json.
  static const PriceTable& standard();

 private:
  std::map<std::string, Price, std::less<>> prices_;
};

/// Cost of one usage record.
Money cost_of(const TokenUsage& usage, const Price& price);

/// Sum over usages of prompt·p_in/1e6 + completion·p_out/1e6. Throws
/// Error(unknown_backend) when the id is not priced.
Money accumulate_cost(const std::vector<TokenUsage>& usages, const PriceTable& prices, std::string_view backend_id);

}  // namespace ifgen::gen
