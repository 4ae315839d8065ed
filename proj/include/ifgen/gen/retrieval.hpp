#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ifgen::gen {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
/// Scales to unit L2 norm. Throws Error(invariant) on a zero vector.
void normalize_l2(Vector& v);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dimension() const = 0;
  /// L2-normalized embedding; throws Error(precondition) on empty text.
  virtual Vector embed(std::string_view text) const = 0;
};

/// Hashed character-trigram term frequencies. Text is lowercased, every run
/// of non-alphanumeric bytes collapses to one space, and the result is padded
/// with a space on each side before trigrams are bucketed by FNV-1a.
class TrigramEmbedder final : public Embedder {
 public:
  explicit TrigramEmbedder(std::size_t dimension = 256) : dimension_(dimension) {}
  std::size_t dimension() const override { return dimension_; }
  Vector embed(std::string_view text) const override;

 private:
  std::size_t dimension_;
};

double cosine(const Embedder& embedder, std::string_view a, std::string_view b);

/// Splits a document into retrieval chunks.
///
/// Lines starting with "## " or "func " mark capability/function boundaries;
/// each marked section becomes its own chunk unless it exceeds twice the
/// target, in which case it is split at whitespace. Text before the first
/// marker is a chunk of its own. Documents within the target come back as a
/// single chunk. Chunks are exact substrings, so concatenating them
/// reproduces the input. Sizes use the estimate_tokens() heuristic.
std::vector<std::string> chunk_document(std::string_view text, std::size_t target_chunk_tokens);

struct Chunk {
  std::uint64_t id = 0;
  std::string text;
  Vector vector;
};

struct ScoredChunk {
  std::uint64_t id = 0;
  double score = 0.0;
  bool operator==(const ScoredChunk&) const = default;
};

class RetrievalIndex {
 public:
  explicit RetrievalIndex(std::size_t dimension) : dimension_(dimension) {}

  /// Embeds each text; ids are positions in `texts`.
  static RetrievalIndex build(const std::vector<std::string>& texts, const Embedder& embedder);

  /// Normalizes `vector`; throws Error(invariant) on dimension mismatch.
  void add(std::uint64_t id, std::string text, Vector vector);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return chunks_.size(); }
  bool empty() const { return chunks_.empty(); }
  const std::vector<Chunk>& chunks() const { return chunks_; }
  const Chunk* find(std::uint64_t id) const;

 private:
  std::size_t dimension_;
  std::vector<Chunk> chunks_;
};

/// Top-k chunks by cosine score, descending; ties go to the lower id.
/// Returns min(k, index.size()) results.
std::vector<ScoredChunk> retrieve_top_k(const RetrievalIndex& index, std::span<const double> query, std::size_t k);
std::vector<ScoredChunk> retrieve_top_k(const RetrievalIndex& index, std::string_view query, std::size_t k,
                                        const Embedder& embedder);

}  // namespace ifgen::gen
