#include <gtest/gtest.h>

#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/documents.hpp"
#include "ifgen/error.hpp"
#include "support/random_docs.hpp"

namespace ifgen::doc {
namespace {

ParamSpec param(std::string name, SemanticType type, std::optional<std::string> unit = std::nullopt) {
  return ParamSpec{std::move(name), type, std::move(unit), ""};
}

CfrEntry setpower_entry() {
  CfrEntry e;
  e.requirement.name = "setpower";
  e.requirement.description = "set the transmit power of a radio";
  e.requirement.params = {param("radioID", SemanticType::text), param("pow", SemanticType::text, "dBm")};
  e.requirement.returns = {param("response", SemanticType::boolean)};
  e.matched_capability_name = "set_tx_power";
  e.match_kind = MatchKind::exact;
  e.match_score = 1.0;
  return e;
}

CfrDocument one_entry_cfr() {
  CfrDocument d;
  d.source_nf = "ric-1";
  d.dest_nf = "ap-vendor1";
  d.encoding_scheme = "json";
  d.entries.push_back(setpower_entry());
  return d;
}

const char* kTwoCapDoc = R"({
  "kind": "capability_document",
  "schema_version": "1.0.0",
  "nf_id": "ap-vendor1",
  "nf_class": "WLAN-AP",
  "vendor": "vendor1",
  "supported_encodings": ["json"],
  "capabilities": [
    {"name": "set_channel", "description": "Set the operating channel of a radio.",
     "params": [{"name": "radio_id", "type": "text", "description": ""},
                {"name": "channel", "type": "integer", "description": "channel number"}],
     "returns": [{"name": "ok", "type": "boolean", "description": ""}], "tags": ["radio"]},
    {"name": "get_tx_power", "description": "Read the transmit power.",
     "params": [{"name": "radio_id", "type": "text", "description": ""}],
     "returns": [{"name": "tx_power", "type": "real", "unit": "dBm", "description": ""}], "tags": []}
  ]
})";

TEST(Signature, RendersPowerExampleWithUnits) {
  auto e = setpower_entry();
  EXPECT_EQ(render_signature(e),
            "func setpower (radioID string, pow string dBm)(response boolean): set the transmit power of a radio: "
            "set_tx_power");
}

TEST(Signature, ZeroParameterFunction) {
  CfrEntry e;
  e.requirement.name = "reboot";
  e.requirement.description = "restart the node";
  e.requirement.returns = {param("ok", SemanticType::boolean)};
  e.matched_capability_name = "restart";
  EXPECT_EQ(render_signature(e), "func reboot ()(ok boolean): restart the node: restart");
}

TEST(Signature, ThreeParamsInDeclarationOrder) {
  CfrEntry e;
  e.requirement.name = "aoi_set_rate";
  e.requirement.description = "rate with deadline";
  e.requirement.params = {param("radio", SemanticType::text), param("rate", SemanticType::real, "Mbps"),
                          param("deadline", SemanticType::timestamp)};
  e.requirement.returns = {param("ok", SemanticType::boolean), param("applied_at", SemanticType::timestamp)};
  e.matched_capability_name = "set_rate";
  // Hand-rendered.
  EXPECT_EQ(render_signature(e),
            "func aoi_set_rate (radio string, rate float Mbps, deadline timestamp)(ok boolean, applied_at timestamp): "
            "rate with deadline: set_rate");
}

TEST(Signature, EveryParamNameAppearsOnceInOrder) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto cfr = testing::random_cfr(rng);
    for (const auto& e : cfr.entries) {
      auto sig = render_signature(e);
      auto head = sig.substr(0, sig.find(')') + 1);
      std::size_t pos = 0;
      for (const auto& p : e.requirement.params) {
        auto token = (pos == 0 ? "(" : ", ") + p.name + " ";
        auto at = head.find(token, pos);
        ASSERT_NE(at, std::string::npos) << sig;
        pos = at + token.size();
      }
    }
  }
}

TEST(CapabilityDocumentCodec, ParsesAndValidates) {
  auto d = parse_capability_document(kTwoCapDoc);
  EXPECT_EQ(d.nf_id, "ap-vendor1");
  EXPECT_EQ(d.nf_class, NfClass::wlan_ap);
  ASSERT_EQ(d.capabilities.size(), 2u);
  EXPECT_EQ(d.capabilities[1].returns[0].unit, "dBm");
  EXPECT_EQ(serialize(d), normalize(kTwoCapDoc));
}

TEST(CapabilityDocumentCodec, EmptyCapabilityListIsSchemaViolation) {
  std::string text = R"({"kind":"capability_document","schema_version":"1.0.0","nf_id":"x","nf_class":"gNB",
    "vendor":"v","supported_encodings":["json"],"capabilities":[]})";
  try {
    parse_capability_document(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schema);
    EXPECT_EQ(e.path(), "capabilities");
  }
}

TEST(CapabilityDocumentCodec, SyntaxErrorReportsPosition) {
  try {
    parse_capability_document(R"({"kind": "capability_document", "nf_id": )");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::syntax);
    EXPECT_EQ(e.path().rfind("byte ", 0), 0u);
  }
}

TEST(CapabilityDocumentCodec, SchemaViolationReportsFieldPath) {
  std::string text = kTwoCapDoc;
  text.replace(text.find("\"integer\""), 9, "\"complex\"");
  try {
    parse_capability_document(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schema);
    EXPECT_EQ(e.path(), "capabilities[0].params[1].type");
  }
}

TEST(CapabilityDocumentCodec, UnitOnBooleanRejected) {
  std::string text = kTwoCapDoc;
  text.replace(text.find(R"("type": "boolean")"), 17, R"("type": "boolean", "unit": "ms")");
  EXPECT_THROW(parse_capability_document(text), Error);
}

TEST(CfrCodec, RoundTripsOneEntry) {
  auto d = one_entry_cfr();
  auto bytes = serialize_cfr(d);
  EXPECT_EQ(parse_cfr(bytes), d);
  EXPECT_EQ(serialize_cfr(d), bytes);
}

TEST(CfrCodec, TruncatedBytesAreSyntaxError) {
  auto bytes = serialize_cfr(one_entry_cfr());
  try {
    parse_cfr(bytes.substr(0, bytes.size() / 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::syntax);
  }
}

TEST(CfrCodec, ScoreOutOfRangeIsSchemaViolation) {
  auto bytes = serialize_cfr(one_entry_cfr());
  auto pos = bytes.find("\"match_score\": 1.0");
  ASSERT_NE(pos, std::string::npos);
  bytes.replace(pos, 18, "\"match_score\": 1.2");
  try {
    parse_cfr(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schema);
    EXPECT_EQ(e.path(), "entries[0].match_score");
  }
}

TEST(CfrCodec, UnknownMajorVersionRejected) {
  auto bytes = serialize_cfr(one_entry_cfr());
  bytes.replace(bytes.find("1.0.0"), 5, "2.1.0");
  try {
    parse_cfr(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unsupported_version);
  }
  auto minor = serialize_cfr(one_entry_cfr());
  minor.replace(minor.find("1.0.0"), 5, "1.4.2");
  EXPECT_EQ(parse_cfr(minor).schema_version, "1.4.2");
}

TEST(CfrCodec, ExactRequiresUnitScoreAndClosestExcludesEnds) {
  auto d = one_entry_cfr();
  d.entries[0].match_score = 0.97;
  EXPECT_THROW(serialize_cfr(d), Error);
  d.entries[0].match_kind = MatchKind::closest;
  EXPECT_NO_THROW(serialize_cfr(d));
  d.entries[0].match_score = 1.0;
  EXPECT_THROW(serialize_cfr(d), Error);
}

TEST(CfrCodec, TenEntryFixedPoint) {
  CfrDocument d = one_entry_cfr();
  for (int i = 1; i < 10; ++i) {
    auto e = setpower_entry();
    e.requirement.name = "fn" + std::to_string(i);
    e.match_kind = i % 2 ? MatchKind::closest : MatchKind::exact;
    e.match_score = i % 2 ? 0.5 + i / 100.0 : 1.0;
    d.entries.push_back(e);
  }
  auto once = serialize_cfr(d);
  auto twice = serialize_cfr(parse_cfr(once));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(normalize(once), once);
}

TEST(CfrCodec, RandomDocumentsRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto cfr = testing::random_cfr(rng);
    ASSERT_EQ(parse_cfr(serialize_cfr(cfr)), cfr);
    auto cap = testing::random_capability_document(rng);
    ASSERT_EQ(parse_capability_document(serialize(cap)), cap);
  }
}

TEST(DetectKind, ReadsKindField) {
  EXPECT_EQ(detect_kind(kTwoCapDoc), DocumentKind::capability_document);
  EXPECT_EQ(detect_kind(serialize_cfr(one_entry_cfr())), DocumentKind::cfr_document);
  EXPECT_EQ(detect_kind("[1,2]"), DocumentKind::unknown);
}

TEST(ValidateRequirements, EmptyDescriptionIsOneViolation) {
  RequirementSet reqs;
  reqs.requirements.push_back({"set_channel", "", {param("ch", SemanticType::integer)}, {}, std::nullopt});
  auto report = validate_requirements(reqs);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].path, "requirements[0].description");
}

TEST(ValidateRequirements, OneViolationPerDuplicate) {
  RequirementSet reqs;
  for (int i = 0; i < 3; ++i) reqs.requirements.push_back({"reboot", "restart", {}, {}, std::nullopt});
  reqs.requirements.push_back({"other", "x", {}, {}, std::nullopt});
  auto report = validate_requirements(reqs);
  EXPECT_EQ(report.violations.size(), 2u);
}

TEST(ValidateRequirements, RoundTripThroughText) {
  RequirementSet reqs;
  reqs.requirements.push_back({"aoi_rate", "rate unless late", {param("deadline", SemanticType::timestamp)}, {},
                               AugmentationHint{"guard_on_timestamp", "deadline", ""}});
  reqs.requirements.push_back({"threads", "do it in parallel", {}, {}, AugmentationHint{"", "", "make it multi-threaded"}});
  auto parsed = parse_requirement_set(serialize(reqs));
  EXPECT_EQ(parsed, reqs);
  EXPECT_TRUE(validate_requirements(parsed).ok());
}

TEST(Identifiers, Grammar) {
  EXPECT_TRUE(is_identifier("set_channel"));
  EXPECT_TRUE(is_identifier("_x9"));
  EXPECT_FALSE(is_identifier("9x"));
  EXPECT_FALSE(is_identifier("ap-vendor3"));
  EXPECT_TRUE(is_nf_identifier("ap-vendor3"));
  EXPECT_FALSE(is_identifier(""));
}

}  // namespace
}  // namespace ifgen::doc
