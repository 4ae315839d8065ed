#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ifgen::text {

std::string to_lower(std::string_view s);

/// Splits snake_case, camelCase, PascalCase and digit boundaries into
/// lowercase tokens: "getRateStats" -> {get, rate, stats},
/// "radioID" -> {radio, id}, "set_tx_power2" -> {set, tx, power, 2}.
std::vector<std::string> split_identifier(std::string_view name);

/// Lowercase words of free text; non-alphanumeric bytes separate words.
std::vector<std::string> words(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace ifgen::text
