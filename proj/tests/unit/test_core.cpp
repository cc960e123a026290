#include <doctest.h>

#include "fixtures.hpp"
#include "guardrail/core/error.hpp"
#include "guardrail/core/tokenize.hpp"
#include "guardrail/core/utf8.hpp"
#include "guardrail/core/validate.hpp"

using namespace guardrail;

namespace {

bool known_policy(std::string_view id) { return id == "default" || id == "strict"; }

ShieldRequest request(std::string text) {
  ShieldRequest r;
  r.request_id = "r1";
  r.text = std::move(text);
  r.policy_ids = {"default"};
  return r;
}

}  // namespace

TEST_CASE("validate_request accepts a well-formed request") {
  CHECK_FALSE(validate_request(request("hello"), known_policy).has_value());
}

TEST_CASE("validate_request reports the first violation") {
  auto blank = validate_request(request("   \n\t"), known_policy);
  REQUIRE(blank);
  CHECK(blank->code == ErrorCode::EmptyText);
  CHECK(blank->field == "text");

  auto unknown = request("hi");
  unknown.policy_ids = {"nope"};
  auto err = validate_request(unknown, known_policy);
  REQUIRE(err);
  CHECK(err->code == ErrorCode::UnknownPolicyId);

  auto bad_tag = request("hi");
  bad_tag.jurisdiction = "not a tag!";
  err = validate_request(bad_tag, known_policy);
  REQUIRE(err);
  CHECK(err->code == ErrorCode::BadJurisdictionTag);

  // Empty text is reported before the unknown policy.
  auto both = request("");
  both.policy_ids = {"nope"};
  CHECK(validate_request(both, known_policy)->code == ErrorCode::EmptyText);
}

TEST_CASE("jurisdiction tags") {
  CHECK(is_valid_jurisdiction_tag("default"));
  CHECK(is_valid_jurisdiction_tag("gdpr"));
  CHECK(is_valid_jurisdiction_tag("us-ca"));
  CHECK_FALSE(is_valid_jurisdiction_tag(""));
  CHECK_FALSE(is_valid_jurisdiction_tag("GDPR law"));
}

TEST_CASE("slice uses half-open scalar ranges") {
  CHECK(slice("abcdef", Span{1, 4}) == "bcd");
  CHECK(slice("héllo", Span{1, 2}) == "é");
  CHECK(slice("héllo", Span{0, 5}) == "héllo");
  try {
    slice("ab", Span{0, 3});
    FAIL("expected SPAN_OUT_OF_RANGE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpanOutOfRange);
  }
  CHECK_THROWS_AS(slice("ab", Span{1, 1}), Error);
  CHECK_THROWS_AS(slice("ab", Span{2, 1}), Error);
}

TEST_CASE("Utf8Text maps between bytes and scalars") {
  Utf8Text t("a€b😀c");
  REQUIRE(t.size() == 5);
  CHECK(t.at(1) == U'€');
  CHECK(t.at(3) == U'😀');
  CHECK(t.byte_offset(2) == 4);
  CHECK(t.scalar_at_byte(4) == 2);
  CHECK(t.scalar_at_byte(t.text().size()) == 5);
  CHECK(t.slice(Span{3, 5}) == "😀c");
  CHECK(scalar_length("a€b😀c") == 5);

  // Malformed bytes count one scalar each.
  std::string bad = "a\xff\xfe" "b";
  CHECK(scalar_length(bad) == 4);
}

TEST_CASE("decision order is total and combine is the maximum") {
  const std::array<Decision, 4> all = {Decision::Pass, Decision::Warn, Decision::Mask, Decision::Block};
  for (auto a : all) {
    for (auto b : all) {
      CHECK(combine(a, b) == std::max(a, b));
      CHECK(combine(a, b) == combine(b, a));
      CHECK((a < b || b < a || a == b));
    }
  }
  CHECK(Decision::Block > Decision::Mask);
  CHECK(Decision::Mask > Decision::Warn);
  CHECK(Decision::Warn > Decision::Pass);
}

TEST_CASE("enum string round trips") {
  for (auto d : {Decision::Pass, Decision::Warn, Decision::Mask, Decision::Block}) {
    CHECK(parse_decision(to_string(d)) == d);
  }
  for (auto s : {Sensitivity::Low, Sensitivity::Moderate, Sensitivity::High}) {
    CHECK(parse_sensitivity(to_string(s)) == s);
  }
  CHECK(parse_direction("prompt") == Direction::Prompt);
  CHECK(parse_direction("response") == Direction::Response);
  CHECK_FALSE(parse_decision("ALLOW").has_value());
  CHECK(raise(Sensitivity::High) == Sensitivity::High);
  CHECK(lower(Sensitivity::Low) == Sensitivity::Low);
  CHECK(raise(Sensitivity::Low) == Sensitivity::Moderate);
}

TEST_CASE("error messages carry the code") {
  Error e(ErrorCode::ConfigInvalid, "bad thing");
  CHECK(std::string(e.what()).find("CONFIG_INVALID") != std::string::npos);
  CHECK(to_string(ErrorCode::NoDetectorsApplicable) == "NO_DETECTORS_APPLICABLE");
}

TEST_CASE("word tokens carry scalar spans") {
  auto toks = word_tokens("Héllo, wörld! 42x");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].surface == "Héllo");
  CHECK(toks[0].span == Span{0, 5});
  CHECK(toks[1].lower == "wörld");
  CHECK(toks[1].span == Span{7, 12});
  CHECK(toks[2].surface == "42x");
}

TEST_CASE("property: every token span slices back to its surface") {
  fixtures::Rng rng(7);
  const std::vector<std::string> pieces = {"alpha", "é", "€uro", " ", "  ", ".", ",", "x1", "日本", "\n", "-"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (int i = rng.uniform(1, 30); i > 0; --i) text += rng.pick(pieces);
    for (const auto& tok : word_tokens(text)) {
      CHECK(slice(text, tok.span) == tok.surface);
    }
  }
}
