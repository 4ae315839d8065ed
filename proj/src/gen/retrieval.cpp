#include "ifgen/gen/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ifgen/error.hpp"
#include "ifgen/gen/cost.hpp"
#include "ifgen/gen/hash.hpp"

namespace ifgen::gen {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize_l2(Vector& v) {
  double n = std::sqrt(dot(v, v));
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::invariant, "cannot normalize a zero vector");
  for (auto& x : v) x /= n;
}

namespace {

bool word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string fold(std::string_view text) {
  std::string out = " ";
  for (unsigned char c : text) {
    if (word_byte(c)) {
      out += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    } else if (out.back() != ' ') {
      out += ' ';
    }
  }
  if (out.back() != ' ') out += ' ';
  return out;
}

}  // namespace

Vector TrigramEmbedder::embed(std::string_view text) const {
  if (text.empty()) throw Error(ErrorCode::precondition, "cannot embed empty text");
  std::string folded = fold(text);
  // Punctuation-only input keeps its raw bytes.
  if (folded.size() < 3) folded = " " + std::string(text) + " ";
  Vector v(dimension_, 0.0);
  for (std::size_t i = 0; i + 3 <= folded.size(); ++i) {
    v[fnv1a64(std::string_view(folded).substr(i, 3)) % dimension_] += 1.0;
  }
  normalize_l2(v);
  return v;
}

double cosine(const Embedder& embedder, std::string_view a, std::string_view b) {
  return dot(embedder.embed(a), embedder.embed(b));
}

namespace {

bool is_marker_line(std::string_view text, std::size_t line_start) {
  auto rest = text.substr(line_start);
  return rest.starts_with("## ") || rest.starts_with("func ");
}

std::size_t tokens(std::string_view s) { return static_cast<std::size_t>(estimate_tokens(s)); }

// Back off to a UTF-8 lead byte so multi-byte sequences stay intact.
std::size_t codepoint_boundary(std::string_view s, std::size_t pos) {
  while (pos > 0 && pos < s.size() && (static_cast<unsigned char>(s[pos]) & 0xC0) == 0x80) --pos;
  return pos;
}

// Greedy whitespace split; pieces stay within `target` tokens except for
// single words longer than 2*target, which are cut at codepoint boundaries.
void split_section(std::string_view section, std::size_t target, std::vector<std::string>& out) {
  const std::size_t max_bytes = target * 4;
  std::size_t start = 0;
  while (start < section.size()) {
    auto remaining = section.substr(start);
    if (tokens(remaining) <= target) {
      out.emplace_back(remaining);
      return;
    }
    // Last whitespace that keeps the piece within max_bytes.
    std::size_t cut = std::string_view::npos;
    for (std::size_t i = std::min(max_bytes, remaining.size()); i > 0; --i) {
      char c = remaining[i - 1];
      if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
        cut = i;
        break;
      }
    }
    if (cut == std::string_view::npos) {
      cut = codepoint_boundary(remaining, max_bytes);
      if (cut == 0) cut = max_bytes;
    }
    out.emplace_back(remaining.substr(0, cut));
    start += cut;
  }
}

}  // namespace

std::vector<std::string> chunk_document(std::string_view text, std::size_t target) {
  if (target == 0) throw Error(ErrorCode::precondition, "target_chunk_tokens must be positive");
  if (text.empty()) throw Error(ErrorCode::precondition, "cannot chunk an empty document");
  if (tokens(text) <= target) return {std::string(text)};

  std::vector<std::size_t> starts{0};
  for (std::size_t pos = 0; pos < text.size();) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
    if (pos < text.size() && is_marker_line(text, pos)) starts.push_back(pos);
  }
  bool has_markers = starts.size() > 1 || is_marker_line(text, 0);

  std::vector<std::string> out;
  if (!has_markers) {
    split_section(text, target, out);
    return out;
  }
  starts.push_back(text.size());
  for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
    auto section = text.substr(starts[i], starts[i + 1] - starts[i]);
    if (section.empty()) continue;
    if (tokens(section) <= 2 * target) {
      out.emplace_back(section);
    } else {
      split_section(section, target, out);
    }
  }
  return out;
}

RetrievalIndex RetrievalIndex::build(const std::vector<std::string>& texts, const Embedder& embedder) {
  RetrievalIndex index(embedder.dimension());
  for (std::size_t i = 0; i < texts.size(); ++i) index.add(i, texts[i], embedder.embed(texts[i]));
  return index;
}

void RetrievalIndex::add(std::uint64_t id, std::string text, Vector vector) {
  if (vector.size() != dimension_) {
    throw Error(ErrorCode::invariant, "vector dimension " + std::to_string(vector.size()) + " != index dimension " +
                                          std::to_string(dimension_));
  }
  normalize_l2(vector);
  chunks_.push_back(Chunk{id, std::move(text), std::move(vector)});
}

const Chunk* RetrievalIndex::find(std::uint64_t id) const {
  for (const auto& c : chunks_) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<ScoredChunk> retrieve_top_k(const RetrievalIndex& index, std::span<const double> query, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::precondition, "k must be at least 1");
  if (query.size() != index.dimension()) throw Error(ErrorCode::invariant, "query dimension mismatch");
  std::vector<ScoredChunk> scored;
  scored.reserve(index.size());
  for (const auto& c : index.chunks()) scored.push_back({c.id, dot(c.vector, query)});
  auto better = [](const ScoredChunk& a, const ScoredChunk& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  auto n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(), better);
  scored.resize(n);
  return scored;
}

std::vector<ScoredChunk> retrieve_top_k(const RetrievalIndex& index, std::string_view query, std::size_t k,
                                        const Embedder& embedder) {
  auto q = embedder.embed(query);
  return retrieve_top_k(index, q, k);
}

}  // namespace ifgen::gen
