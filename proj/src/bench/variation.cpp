#include "ifgen/bench/variation.hpp"

#include <cctype>

#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/paths.hpp"
#include "ifgen/text.hpp"

namespace ifgen::bench {

namespace {

// Splits into words and a trailing punctuation run (the final '.').
std::pair<std::vector<std::string>, std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  std::string tail;
  if (!out.empty()) {
    auto& last = out.back();
    while (!last.empty() && (last.back() == '.' || last.back() == '!' || last.back() == '?')) {
      tail.insert(tail.begin(), last.back());
      last.pop_back();
    }
    if (last.empty()) out.pop_back();
  }
  return {out, tail};
}

bool is_article(const ParaphraseRules& rules, std::string_view w) {
  auto lw = text::to_lower(w);
  for (const auto& a : rules.articles) {
    if (a == lw) return true;
  }
  return false;
}

bool plain_word(std::string_view w) {
  for (char c : w) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '\'' && c != '-' && c != '/') return false;
  }
  return !w.empty();
}

// "VERB [art] X... of [art] Y..." -> "VERB [art] Y... X...". Only applies
// when both sides are plain words.
std::vector<std::string> reorder(const std::vector<std::string>& ws, const ParaphraseRules& rules) {
  std::size_t of = 0;
  for (std::size_t i = 2; i + 1 < ws.size(); ++i) {
    if (ws[i] == "of") {
      of = i;
      break;
    }
  }
  if (of == 0) return ws;
  for (const auto& w : ws) {
    if (!plain_word(w)) return ws;
  }
  std::size_t left_start = 1;
  std::vector<std::string> out{ws[0]};
  if (is_article(rules, ws[1])) {
    out.push_back(ws[1]);
    left_start = 2;
  }
  if (left_start >= of) return ws;
  std::size_t right_start = of + 1;
  if (right_start < ws.size() && is_article(rules, ws[right_start])) ++right_start;
  if (right_start >= ws.size()) return ws;
  out.insert(out.end(), ws.begin() + static_cast<std::ptrdiff_t>(right_start), ws.end());
  out.insert(out.end(), ws.begin() + static_cast<std::ptrdiff_t>(left_start), ws.begin() + static_cast<std::ptrdiff_t>(of));
  return out;
}

std::string substitute(const std::string& w, int k, const ParaphraseRules& rules) {
  // Keep surrounding punctuation such as a trailing comma.
  std::size_t b = 0, e = w.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(w[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(w[e - 1]))) --e;
  auto core = w.substr(b, e - b);
  auto it = rules.substitutions.find(text::to_lower(core));
  if (it == rules.substitutions.end() || it->second.empty()) return w;
  auto alt = it->second[static_cast<std::size_t>(k) % it->second.size()];
  if (!core.empty() && std::isupper(static_cast<unsigned char>(core[0])) && !alt.empty()) {
    alt[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(alt[0])));
  }
  return w.substr(0, b) + alt + w.substr(e);
}

}  // namespace

ParaphraseRules ParaphraseRules::parse(std::string_view text) {
  namespace json_io = doc::json_io;
  auto root = json_io::parse_text(text);
  json_io::require_object(root, "");
  json_io::check_kind(root, "paraphrase_rules");
  json_io::check_schema_version(root);
  ParaphraseRules r;
  const auto& subs = json_io::require(root, "substitutions", "");
  json_io::require_object(subs, "substitutions");
  for (auto it = subs.begin(); it != subs.end(); ++it) {
    r.substitutions[it.key()] = json_io::read_string_list(subs, it.key(), "substitutions");
  }
  r.padding = json_io::read_string_list(root, "padding", "");
  r.articles = json_io::read_string_list(root, "articles", "");
  return r;
}

const ParaphraseRules& ParaphraseRules::standard() {
  static const ParaphraseRules rules = parse(doc::read_file(data_path("config/paraphrase.json")));
  return rules;
}

std::string paraphrase(std::string_view description, int k, const ParaphraseRules& rules) {
  if (k < 0) throw Error(ErrorCode::precondition, "variation index must be non-negative");
  auto [ws, tail] = tokenize(description);
  if (ws.empty()) return std::string(description);
  bool capital = std::isupper(static_cast<unsigned char>(ws[0][0]));
  if (k % 2 == 0) ws = reorder(ws, rules);
  for (auto& w : ws) w = substitute(w, k, rules);
  if (k % 3 == 1 && !rules.padding.empty()) {
    ws.push_back(rules.padding[static_cast<std::size_t>(k / 3) % rules.padding.size()]);
  }
  auto out = text::join(ws, " ");
  if (capital && !out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out + tail;
}

std::string restyle_name(std::string_view name, int k) {
  auto tokens = text::split_identifier(name);
  if (tokens.empty()) return std::string(name);
  switch (k % 3) {
    case 0: return text::join(tokens, "_");
    case 1: {
      std::string out = tokens[0];
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto t = tokens[i];
        t[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
        out += t;
      }
      return out;
    }
    default: return std::string(name);
  }
}

doc::ControlFunctionRequirement vary(const doc::ControlFunctionRequirement& req, int k, const ParaphraseRules& rules) {
  auto out = req;
  out.name = restyle_name(req.name, k);
  out.description = paraphrase(req.description, k, rules);
  return out;
}

doc::ControlFunctionRequirement vary_with_backend(const doc::ControlFunctionRequirement& req, int k,
                                                  gen::Backend& backend, gen::TokenUsage* usage) {
  gen::GenerationRequest request;
  request.task = "bench.paraphrase";
  request.system_prompt =
      "Rewrite the control function description in different words. Keep its meaning and every technical term. "
      "Reply with one sentence only.";
  request.user_prompt = "Description: " + req.description + "\nVariation: " + std::to_string(k);
  request.max_output_tokens = 128;
  request.hints = {{"description", req.description}, {"k", k}};
  auto out = req;
  out.name = restyle_name(req.name, k);
  std::string text;
  try {
    auto response = backend.generate(request);
    if (usage) *usage += response.usage;
    text = response.text;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::malformed_response && e.code() != ErrorCode::token_limit) throw;
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  bool usable = !text.empty() && text.find('\n') == std::string::npos;
  out.description = usable ? text : paraphrase(req.description, k, ParaphraseRules::standard());
  return out;
}

std::string paraphrase_rule(const gen::GenerationRequest& request) {
  const auto& h = request.hints;
  if (!h.contains("description") || !h.contains("k")) throw Error(ErrorCode::precondition, "paraphrase hints missing");
  return paraphrase(h["description"].get<std::string>(), h["k"].get<int>(), ParaphraseRules::standard());
}

}  // namespace ifgen::bench
