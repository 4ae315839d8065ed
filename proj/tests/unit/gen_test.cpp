#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ifgen/error.hpp"
#include "ifgen/gen/backend.hpp"
#include "ifgen/gen/cost.hpp"
#include "ifgen/gen/retrieval.hpp"

namespace ifgen::gen {
namespace {

// Exhaustive scan: full sort of every chunk by (score desc, id asc).
std::vector<ScoredChunk> scan_oracle(const RetrievalIndex& index, const Vector& q, std::size_t k) {
  std::vector<ScoredChunk> all;
  for (const auto& c : index.chunks()) {
    double s = 0;
    for (std::size_t i = 0; i < q.size(); ++i) s += c.vector[i] * q[i];
    all.push_back({c.id, s});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.score > b.score || (a.score == b.score && a.id < b.id);
  });
  all.resize(std::min(k, all.size()));
  return all;
}

Vector random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n;
  Vector v(dim);
  for (auto& x : v) x = n(rng);
  return v;
}

std::string capability_text(int n) {
  std::string text = "Capability document for ap-test\n";
  for (int i = 0; i < n; ++i) {
    text += "## cap_" + std::to_string(i) + "\nfunc cap_" + std::to_string(i) +
            " (radio_id string)(ok boolean)\nDescription: adjusts setting number " + std::to_string(i) +
            " on the selected radio interface.\n";
  }
  return text;
}

TEST(Embedder, DeterministicAndUnitNorm) {
  TrigramEmbedder e;
  auto a = e.embed("set transmission power");
  auto b = e.embed("set transmission power");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 256u);
  EXPECT_NEAR(std::sqrt(dot(a, a)), 1.0, 1e-9);
  EXPECT_NEAR(std::sqrt(dot(e.embed("!!!"), e.embed("!!!"))), 1.0, 1e-9);
  EXPECT_THROW(e.embed(""), Error);
}

TEST(Embedder, ParaphraseCloserThanUnrelated) {
  TrigramEmbedder e;
  double close = cosine(e, "set transmission power", "set transmit power");
  double far = cosine(e, "set transmission power", "release user session");
  EXPECT_GT(close, far);
  EXPECT_GT(close, 0.7);
  EXPECT_GT(close - far, 0.3);
}

TEST(Chunker, ShortDocumentIsSingleChunk) {
  auto chunks = chunk_document("func reboot ()(ok boolean)", 128);
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0], "func reboot ()(ok boolean)");
}

TEST(Chunker, OneChunkPerCapability) {
  auto text = capability_text(30);
  auto chunks = chunk_document(text, 128);
  EXPECT_GE(chunks.size(), 30u);
  std::size_t with_cap = std::count_if(chunks.begin(), chunks.end(), [](const auto& c) { return c.starts_with("## cap_"); });
  EXPECT_EQ(with_cap, 30u);
}

TEST(Chunker, LosslessAndBounded) {
  std::mt19937_64 rng(3);
  const char* words[] = {"alpha ", "beta\n", "gamma\t", "## sec\n", "func f ()\n", "déjà ", "x", "😀",
                         "supercalifragilisticexpialidocious"};
  for (int round = 0; round < 300; ++round) {
    std::string text;
    auto n = rng() % 400 + 1;
    for (std::size_t i = 0; i < n; ++i) text += words[rng() % std::size(words)];
    std::size_t target = rng() % 40 + 1;
    auto chunks = chunk_document(text, target);
    std::string joined;
    for (const auto& c : chunks) {
      joined += c;
      EXPECT_LE(static_cast<std::size_t>(estimate_tokens(c)), 2 * target);
      EXPECT_FALSE(c.empty());
    }
    ASSERT_EQ(joined, text);
  }
  EXPECT_THROW(chunk_document("", 10), Error);
  EXPECT_THROW(chunk_document("x", 0), Error);
}

TEST(Retrieval, TopThreeFromThirtyChunks) {
  TrigramEmbedder e;
  auto chunks = chunk_document(capability_text(30), 128);
  auto index = RetrievalIndex::build(chunks, e);
  auto top = retrieve_top_k(index, "adjusts setting number 7", 3, e);
  EXPECT_EQ(top.size(), 3u);
  EXPECT_EQ(retrieve_top_k(index, "x", 500, e).size(), index.size());
}

TEST(Retrieval, SelfQueryRanksFirst) {
  TrigramEmbedder e;
  auto chunks = chunk_document(capability_text(30), 128);
  auto index = RetrievalIndex::build(chunks, e);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    auto top = retrieve_top_k(index, chunks[i], 1, e);
    ASSERT_EQ(top[0].id, i);
    EXPECT_NEAR(top[0].score, 1.0, 1e-9);
  }
}

TEST(Retrieval, MatchesExhaustiveScan) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 60; ++round) {
    std::size_t dim = rng() % 12 + 2;
    std::size_t n = rng() % 800 + 1;
    RetrievalIndex index(dim);
    for (std::size_t i = 0; i < n; ++i) {
      // Duplicate some vectors so ties exercise the id tie-break.
      auto v = (i > 0 && rng() % 5 == 0) ? index.chunks()[rng() % i].vector : random_vector(rng, dim);
      index.add(rng() % 100000, "", v);
    }
    auto q = random_vector(rng, dim);
    normalize_l2(q);
    std::size_t k = rng() % 20 + 1;
    ASSERT_EQ(retrieve_top_k(index, q, k), scan_oracle(index, q, k));
  }
}

TEST(Retrieval, RejectsBadInput) {
  RetrievalIndex index(3);
  EXPECT_THROW(index.add(0, "", {1.0, 2.0}), Error);
  EXPECT_THROW(index.add(0, "", {0.0, 0.0, 0.0}), Error);
  index.add(0, "", {1, 0, 0});
  Vector q{1, 0, 0};
  EXPECT_THROW(retrieve_top_k(index, q, 0), Error);
}

TEST(Money, ParseAndFormat) {
  EXPECT_EQ(Money::parse("2.50").to_string(), "2.50");
  EXPECT_EQ(Money::parse("0.000125").to_string(), "0.000125");
  EXPECT_EQ(Money::parse("10").picos(), 10'000'000'000'000);
  EXPECT_EQ(Money::parse("-1.5").to_string(), "-1.50");
  EXPECT_THROW(Money::parse("1.2.3"), Error);
  EXPECT_THROW(Money::parse("0.0000000000001"), Error);
  EXPECT_THROW(Money::parse(""), Error);
}

PriceTable fixture_prices() {
  return PriceTable::parse(R"({"prices": {
    "mock": {"prompt_per_million": "2.50", "completion_per_million": "10.00"},
    "odd": {"prompt_per_million": "0.3125", "completion_per_million": "1.875"}}})");
}

std::vector<TokenUsage> twelve_usages() {
  return {{1200, 340}, {980, 0},   {15000, 2200}, {1, 1},      {0, 999},     {4096, 512},
          {333, 333},  {70000, 1500}, {12, 7},    {2500, 2500}, {100000, 0}, {0, 0}};
}

TEST(Cost, EmptyIsZero) { EXPECT_EQ(accumulate_cost({}, fixture_prices(), "mock"), Money{}); }

TEST(Cost, OneMillionPromptTokens) {
  EXPECT_EQ(accumulate_cost({{1'000'000, 0}}, fixture_prices(), "mock").to_string(), "2.50");
}

TEST(Cost, TwelveUsageFixture) {
  // Hand sums: prompt 194122 tokens, completion 8392 tokens.
  // mock: 194122*2.5/1e6 + 8392*10/1e6 = 0.485305 + 0.08392 = 0.569225
  // odd:  194122*0.3125/1e6 + 8392*1.875/1e6 = 0.060663125 + 0.015735 = 0.076398125
  EXPECT_EQ(accumulate_cost(twelve_usages(), fixture_prices(), "mock").to_string(), "0.569225");
  EXPECT_EQ(accumulate_cost(twelve_usages(), fixture_prices(), "odd").to_string(), "0.076398125");
}

TEST(Cost, UnknownBackend) {
  try {
    accumulate_cost({}, fixture_prices(), "nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_backend);
  }
}

TEST(Cost, Monotone) {
  std::mt19937_64 rng(23);
  auto prices = fixture_prices();
  for (int round = 0; round < 200; ++round) {
    std::vector<TokenUsage> usages;
    Money prev = accumulate_cost(usages, prices, "odd");
    for (int i = 0; i < 30; ++i) {
      usages.push_back({static_cast<std::int64_t>(rng() % 200000), static_cast<std::int64_t>(rng() % 50000)});
      auto next = accumulate_cost(usages, prices, "odd");
      ASSERT_GE(next, prev);
      prev = next;
    }
  }
}

TEST(Cost, PriceWithTooManyDecimalsRejected) {
  EXPECT_THROW(PriceTable::parse(R"({"prices": {"x": {"prompt_per_million": "0.0000001", "completion_per_million": "1"}}})"),
               Error);
}

GenerationRequest sample_request() {
  GenerationRequest r;
  r.task = "echo";
  r.system_prompt = std::string(200, 's');
  r.user_prompt = std::string(200, 'u');
  return r;
}

TEST(MockBackend, DeterministicWithSyntheticUsage) {
  MockBackend backend;
  backend.register_rule("echo", [](const GenerationRequest& r) { return r.user_prompt.substr(0, 8); });
  auto a = backend.generate(sample_request());
  auto b = backend.generate(sample_request());
  EXPECT_EQ(a.text, b.text);
  EXPECT_EQ(a.latency, b.latency);
  EXPECT_EQ(a.usage.prompt_tokens, 100);  // ceil(400 / 4)
  EXPECT_EQ(a.usage.completion_tokens, 2);
  EXPECT_EQ(a.backend_id, "mock");
}

TEST(MockBackend, TokenLimitAndUnknownTask) {
  MockBackend backend;
  backend.register_rule("echo", [](const GenerationRequest&) { return std::string(100, 'x'); });
  auto r = sample_request();
  r.max_output_tokens = 10;
  try {
    backend.generate(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::token_limit);
  }
  r.task = "other";
  EXPECT_THROW(backend.generate(r), Error);
}

TEST(MockBackend, FaultSequenceReproducible) {
  auto run = [](std::uint64_t seed) {
    MockBackend backend({seed, 0.5, "mock"});
    backend.register_rule(
        "echo", [](const GenerationRequest& r) { return r.user_prompt; },
        [](const std::string&, const GenerationRequest&, std::uint64_t) { return std::string("broken"); });
    std::vector<bool> faults;
    for (int i = 0; i < 64; ++i) {
      auto r = sample_request();
      r.user_prompt += std::to_string(i);
      faults.push_back(backend.generate(r).fault_injected);
    }
    return faults;
  };
  auto a = run(42);
  EXPECT_EQ(a, run(42));
  EXPECT_NE(a, run(43));
  auto hits = std::count(a.begin(), a.end(), true);
  EXPECT_GT(hits, 16);
  EXPECT_LT(hits, 48);
}

TEST(MockBackend, RequestValidation) {
  MockBackend backend;
  backend.register_rule("echo", [](const GenerationRequest&) { return std::string("x"); });
  auto r = sample_request();
  r.context_chunks = {"a", "b", "c", "d"};
  EXPECT_THROW(backend.generate(r), Error);
  r.context_chunks.pop_back();
  EXPECT_NO_THROW(backend.generate(r));
  r.system_prompt.clear();
  EXPECT_THROW(backend.generate(r), Error);
}

TEST(RemoteBackend, UnsetCredentialsAreBackendUnavailable) {
  RemoteBackend backend(RemoteOptions{});
  try {
    backend.generate(sample_request());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::backend_unavailable);
  }
}

TEST(RemoteBackend, WireShapes) {
  RemoteOptions o;
  o.model = "m1";
  RemoteBackend backend(o);
  auto r = sample_request();
  r.context_chunks = {"chunk-a"};
  auto body = backend.build_body(r);
  EXPECT_EQ(body["model"], "m1");
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_NE(body["messages"][1]["content"].get<std::string>().find("chunk-a"), std::string::npos);

  auto ok = RemoteBackend::parse_body(
      R"({"choices":[{"message":{"content":"hi"},"finish_reason":"stop"}],"usage":{"prompt_tokens":12,"completion_tokens":3}})",
      100);
  EXPECT_EQ(ok.text, "hi");
  EXPECT_EQ(ok.usage.prompt_tokens, 12);
  EXPECT_THROW(RemoteBackend::parse_body("{}", 100), Error);
  EXPECT_THROW(RemoteBackend::parse_body("nope", 100), Error);
  try {
    RemoteBackend::parse_body(R"({"choices":[{"message":{"content":"x"},"finish_reason":"length"}]})", 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::token_limit);
  }
}

}  // namespace
}  // namespace ifgen::gen
