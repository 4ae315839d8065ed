#include "ifgen/match/synonyms.hpp"

#include <limits>

#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/paths.hpp"
#include "ifgen/text.hpp"

namespace ifgen::match {

SynonymTable SynonymTable::parse(std::string_view text_in) {
  using namespace doc::json_io;
  auto j = parse_text(text_in);
  require_object(j, "");
  check_kind(j, "synonym_table");
  check_schema_version(j);
  SynonymTable t;
  const auto& syn = require(j, "synonyms", "");
  if (!syn.is_object()) throw Error(ErrorCode::config, "synonyms must be an object", "synonyms");
  for (const auto& [alias, canon] : syn.items()) {
    if (!canon.is_string()) throw Error(ErrorCode::config, "canonical form must be a string", "synonyms." + alias);
    auto c = canon.get<std::string>();
    t.synonyms_[text::to_lower(alias)] = c;
    t.lexicon_.insert(text::to_lower(alias));
    t.lexicon_.insert(c);
  }
  if (j.contains("phrases")) {
    for (const auto& [phrase, canon] : j["phrases"].items()) {
      auto parts = text::split_identifier(phrase);
      if (parts.size() < 2) throw Error(ErrorCode::config, "phrase needs two or more words", "phrases." + phrase);
      t.phrases_[parts] = canon.get<std::string>();
      for (const auto& p : parts) t.lexicon_.insert(p);
    }
  }
  if (j.contains("ignore")) {
    for (const auto& w : read_string_list(j, "ignore", "")) t.ignore_.insert(text::to_lower(w));
  }
  if (j.contains("words")) {
    for (const auto& w : read_string_list(j, "words", "")) t.lexicon_.insert(text::to_lower(w));
  }
  for (const auto& w : t.ignore_) t.lexicon_.insert(w);
  return t;
}

SynonymTable SynonymTable::load(const std::string& path) { return parse(doc::read_file(path)); }

const SynonymTable& SynonymTable::standard() {
  static const SynonymTable t = load(data_path("config/synonyms.json"));
  return t;
}

std::string SynonymTable::canonical(std::string_view token) const {
  auto it = synonyms_.find(token);
  return it == synonyms_.end() ? std::string(token) : it->second;
}

std::vector<std::string> SynonymTable::segment(std::string_view token) const {
  if (token.size() < 4 || lexicon_.count(token)) return {std::string(token)};
  // Minimum cost split: each lexicon word costs 1, unknown bytes cost 3
  // apiece, so any full lexicon cover beats leaving text unexplained.
  const std::size_t n = token.size();
  const int inf = std::numeric_limits<int>::max() / 2;
  std::vector<int> cost(n + 1, inf);
  std::vector<std::size_t> from(n + 1, 0);
  std::vector<bool> known(n + 1, false);
  cost[0] = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cost[j] >= inf) continue;
      auto piece = token.substr(j, i - j);
      bool word = lexicon_.count(piece) > 0;
      int c = cost[j] + (word ? 1 : 3 * static_cast<int>(i - j));
      if (c < cost[i]) {
        cost[i] = c;
        from[i] = j;
        known[i] = word;
      }
    }
  }
  std::vector<std::string> parts;
  bool any_unknown = false;
  for (std::size_t i = n; i > 0; i = from[i]) {
    parts.insert(parts.begin(), std::string(token.substr(from[i], i - from[i])));
    any_unknown = any_unknown || !known[i];
  }
  if (any_unknown) return {std::string(token)};
  return parts;
}

std::vector<std::string> SynonymTable::canonical_tokens(std::string_view identifier) const {
  std::vector<std::string> raw;
  for (const auto& tok : text::split_identifier(identifier)) {
    for (auto& piece : segment(tok)) raw.push_back(std::move(piece));
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < raw.size();) {
    bool matched = false;
    for (const auto& [phrase, canon] : phrases_) {
      if (i + phrase.size() <= raw.size() && std::equal(phrase.begin(), phrase.end(), raw.begin() + static_cast<std::ptrdiff_t>(i))) {
        out.push_back(canon);
        i += phrase.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (!ignore_.count(raw[i])) out.push_back(canonical(raw[i]));
    ++i;
  }
  return out;
}

std::set<std::string> SynonymTable::canonical_set(std::string_view identifier) const {
  auto tokens = canonical_tokens(identifier);
  return {tokens.begin(), tokens.end()};
}

}  // namespace ifgen::match
