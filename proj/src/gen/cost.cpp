#include "ifgen/gen/cost.hpp"

#include <limits>

#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/paths.hpp"

namespace ifgen::gen {

namespace {

constexpr std::int64_t kPicosPerUnit = 1'000'000'000'000;
constexpr std::int64_t kMaxPriceFraction = 1'000'000;  // picos granularity of a 6-decimal price

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::invariant, "currency amount overflow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t estimate_tokens(std::string_view text) {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

Money Money::parse(std::string_view text) {
  auto bad = [&] { return Error(ErrorCode::schema, "not a decimal amount: '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  __int128 whole = 0;
  __int128 frac = 0;
  int frac_digits = 0;
  bool any_digit = false;
  bool in_frac = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.' && !in_frac) {
      in_frac = true;
      continue;
    }
    if (c < '0' || c > '9') throw bad();
    any_digit = true;
    if (in_frac) {
      if (++frac_digits > kScale) throw bad();
      frac = frac * 10 + (c - '0');
    } else {
      whole = whole * 10 + (c - '0');
      if (whole > std::numeric_limits<std::int64_t>::max() / kPicosPerUnit) throw bad();
    }
  }
  if (!any_digit) throw bad();
  for (int d = frac_digits; d < kScale; ++d) frac *= 10;
  __int128 total = whole * kPicosPerUnit + frac;
  return Money(checked(negative ? -total : total));
}

std::string Money::to_string() const {
  __int128 v = picos_;
  bool negative = v < 0;
  if (negative) v = -v;
  auto whole = static_cast<std::int64_t>(v / kPicosPerUnit);
  auto frac = static_cast<std::int64_t>(v % kPicosPerUnit);
  std::string digits = std::to_string(frac);
  digits.insert(0, static_cast<std::size_t>(kScale) - digits.size(), '0');
  while (digits.size() > 2 && digits.back() == '0') digits.pop_back();
  return (negative ? "-" : "") + std::to_string(whole) + "." + digits;
}

Money& Money::operator+=(Money o) {
  picos_ = checked(static_cast<__int128>(picos_) + o.picos_);
  return *this;
}

void PriceTable::set(const std::string& backend_id, Price price) {
  for (auto m : {price.prompt_per_million, price.completion_per_million}) {
    if (m < Money{}) throw Error(ErrorCode::config, "negative price for " + backend_id);
    if (m.picos() % kMaxPriceFraction != 0) {
      throw Error(ErrorCode::config, "price for " + backend_id + " has more than 6 decimal places");
    }
  }
  prices_[backend_id] = price;
}

bool PriceTable::contains(std::string_view backend_id) const { return prices_.find(backend_id) != prices_.end(); }

const Price& PriceTable::at(std::string_view backend_id) const {
  auto it = prices_.find(backend_id);
  if (it == prices_.end()) throw Error(ErrorCode::unknown_backend, "no price for backend '" + std::string(backend_id) + "'");
  return it->second;
}

PriceTable PriceTable::parse(std::string_view text) {
  using namespace doc::json_io;
  auto j = parse_text(text);
  const auto& prices = require(j, "prices", "");
  require_object(prices, "prices");
  PriceTable table;
  for (const auto& [id, entry] : prices.items()) {
    auto path = join_path("prices", id);
    Price p{Money::parse(read_string(entry, "prompt_per_million", path)),
            Money::parse(read_string(entry, "completion_per_million", path))};
    table.set(id, p);
  }
  return table;
}

PriceTable PriceTable::load(const std::string& path) { return parse(doc::read_file(path)); }

const PriceTable& PriceTable::standard() {
  static const PriceTable table = load(data_path("config/prices.json"));
  return table;
}

Money cost_of(const TokenUsage& usage, const Price& price) {
  if (usage.prompt_tokens < 0 || usage.completion_tokens < 0) {
    throw Error(ErrorCode::invariant, "negative token count");
  }
  // price picos are a multiple of 1e6, so dividing first is exact.
  __int128 in = static_cast<__int128>(usage.prompt_tokens) * (price.prompt_per_million.picos() / kMaxPriceFraction);
  __int128 out =
      static_cast<__int128>(usage.completion_tokens) * (price.completion_per_million.picos() / kMaxPriceFraction);
  return Money::from_picos(checked(in + out));
}

Money accumulate_cost(const std::vector<TokenUsage>& usages, const PriceTable& prices, std::string_view backend_id) {
  const auto& price = prices.at(backend_id);
  Money total;
  for (const auto& u : usages) total += cost_of(u, price);
  return total;
}

}  // namespace ifgen::gen
