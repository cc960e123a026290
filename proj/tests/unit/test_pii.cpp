#include <doctest.h>

#include "fixtures.hpp"
#include "guardrail/core/error.hpp"
#include "guardrail/core/tokenize.hpp"
#include "guardrail/pii/detector.hpp"
#include "guardrail/pii/extractor.hpp"
#include "guardrail/pii/redact.hpp"
#include "guardrail/pii/rule_pack.hpp"
#include "guardrail/pii/validators.hpp"

using namespace guardrail;
using namespace guardrail::pii;

namespace {

const Extractor& extractor() {
  static const Extractor ex;
  return ex;
}

ExtractionPair pair_of(std::string_view text, PiiType type) {
  for (const auto& p : extractor().extract(text)) {
    if (p.pii_type == type) return p;
  }
  FAIL("no pair of type " << tag(type) << " in: " << text);
  return {};
}

}  // namespace

TEST_CASE("the 13 categories") {
  CHECK(all_pii_types().size() == 13);
  std::set<std::string> tags;
  for (auto t : all_pii_types()) {
    tags.insert(std::string(tag(t)));
    CHECK(parse_pii_type(tag(t)) == t);
    CHECK(pii_type_from_category(category(t)) == t);
  }
  CHECK(tags.size() == 13);
  CHECK(category(PiiType::EmailAddress) == "pii.email_address");
  CHECK(placeholder(PiiType::EmailAddress) == "[EMAIL_ADDRESS]");
  CHECK_FALSE(pii_type_from_category("hap").has_value());
}

TEST_CASE("Luhn: hand-computed sums for the fixture cards") {
  // 4111111111111111: doubled digits 4->8 and seven 1->2 (14), plain eight 1s: 8+14+8 = 30.
  CHECK(fixtures::luhn_sum("4111111111111111") == 30);
  CHECK(fixtures::luhn_sum("4111111111111112") == 31);
  // 5500000000000004: 5 doubled -> 1, 5 plain, 4 plain: 10.
  CHECK(fixtures::luhn_sum("5500000000000004") == 10);
  for (const auto& card : fixtures::fixture_card_numbers()) {
    CHECK(fixtures::luhn_sum(card) % 10 == 0);
    CHECK(luhn_valid(card));
    auto bumped = card;
    bumped.back() = static_cast<char>('0' + (bumped.back() - '0' + 1) % 10);
    CHECK(fixtures::luhn_sum(bumped) % 10 != 0);
    CHECK_FALSE(luhn_valid(bumped));
  }
  CHECK_FALSE(luhn_valid("4111"));
}

TEST_CASE("validators") {
  CHECK(ssn_valid("123-45-6789"));
  CHECK_FALSE(ssn_valid("000-45-6789"));
  CHECK_FALSE(ssn_valid("666-45-6789"));
  CHECK_FALSE(ssn_valid("912-45-6789"));
  CHECK_FALSE(ssn_valid("123-00-6789"));
  CHECK_FALSE(ssn_valid("123-45-0000"));
  CHECK(iban_valid("GB82WEST12345698765432"));
  CHECK(iban_valid("DE89370400440532013000"));
  CHECK_FALSE(iban_valid("GB83WEST12345698765432"));
  CHECK(calendar_date_valid("2000-02-29"));
  CHECK_FALSE(calendar_date_valid("1900-02-29"));
  CHECK_FALSE(calendar_date_valid("1984-02-30"));
  CHECK(calendar_date_valid("7/4/1990"));
  CHECK_FALSE(calendar_date_valid("13/1/1990"));
  CHECK(ein_valid("12-3456789"));
  CHECK_FALSE(ein_valid("07-3456789"));
  CHECK(find_validator("luhn") == &luhn_valid);
  CHECK(find_validator("nope") == nullptr);
}

TEST_CASE("extract: pattern-forced examples") {
  auto email = extractor().extract("Contact me at jane.doe@example.com");
  REQUIRE(email.size() == 1);
  CHECK(email[0].surface == "jane.doe@example.com");
  CHECK(email[0].pii_type == PiiType::EmailAddress);
  CHECK(email[0].span == Span{14, 34});

  auto card = extractor().extract("My card is 4111 1111 1111 1111");
  REQUIRE(card.size() == 1);
  CHECK(card[0].surface == "4111 1111 1111 1111");
  CHECK(card[0].pii_type == PiiType::CreditCardNumber);

  CHECK(extractor().extract("My card is 4111 1111 1111 1112").empty());
  CHECK(extractor().extract("nothing personal here, just weather").empty());
}

TEST_CASE("extract: anchored patterns report only the entity") {
  auto p = pair_of("She was born on 1984-07-12 in town.", PiiType::DateOfBirth);
  CHECK(p.surface == "1984-07-12");
  auto pass = pair_of("passport number C12345678 expires", PiiType::PassportNumber);
  CHECK(pass.surface == "C12345678");
  auto mrn = pair_of("MRN 00123456", PiiType::HealthIdentifier);
  CHECK(mrn.surface == "00123456");
  CHECK(mrn.sensitivity == Sensitivity::High);
}

TEST_CASE("extract: spans count scalars, not bytes") {
  const std::string text = "Café: über jane@example.org";
  auto pairs = extractor().extract(text);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].span == Span{11, 27});
  CHECK(slice(text, pairs[0].span) == "jane@example.org");
}

TEST_CASE("extract: person names from the lexicon") {
  auto p = pair_of("Yesterday Maria Garcia called.", PiiType::PersonName);
  CHECK(p.surface == "Maria Garcia");
  auto t = pair_of("We met Dr. Okafor today.", PiiType::PersonName);
  CHECK(t.surface.find("Okafor") != std::string::npos);
}

TEST_CASE("contextual sensitivity") {
  SUBCASE("ssn near 'social security' stays HIGH") {
    std::string text = "Her social security number is 123-45-6789.";
    auto p = pair_of(text, PiiType::Ssn);
    CHECK(score_context(text, p, *RulePack::builtin().find(PiiType::Ssn)) == Sensitivity::High);
    CHECK(p.sensitivity == Sensitivity::High);
  }
  SUBCASE("phone without context keeps its base") {
    std::string text = "Dial 415-555-0123 later.";
    auto p = pair_of(text, PiiType::PhoneNumber);
    CHECK(score_context(text, p, *RulePack::builtin().find(PiiType::PhoneNumber)) == Sensitivity::Moderate);
  }
  SUBCASE("two +1 terms over threshold 1.5 raise LOW to MODERATE") {
    PiiRule rule;
    rule.pii_type = PiiType::PersonName;
    rule.base_sensitivity = Sensitivity::Low;
    rule.context_terms = {{"patient", 1.0}, {"diagnosed", 1.0}};
    rule.context_window = 8;
    rule.context_threshold = 1.5;
    std::string text = "The patient Maria Garcia was diagnosed yesterday.";
    ExtractionPair p{"Maria Garcia", PiiType::PersonName, Span{12, 24}, Sensitivity::Low};
    auto tokens = word_tokens(text);
    CHECK(context_weight(tokens, p.span, rule) == doctest::Approx(2.0));
    CHECK(score_context(text, p, rule) == Sensitivity::Moderate);
    // A single term (sum 1.0) is not enough.
    std::string one = "The patient Maria Garcia was seen yesterday.";
    CHECK(score_context(one, p, rule) == Sensitivity::Low);
  }
  SUBCASE("negative terms lower the level") {
    std::string text = "For testing use card 4111 1111 1111 1111 in test mode.";
    auto p = pair_of(text, PiiType::CreditCardNumber);
    CHECK(p.sensitivity == Sensitivity::Moderate);
  }
  SUBCASE("terms outside the window are ignored") {
    PiiRule rule;
    rule.context_terms = {{"patient", 2.0}};
    rule.context_window = 2;
    std::string text = "patient one two three four Maria Garcia";
    ExtractionPair p{"Maria Garcia", PiiType::PersonName, Span{27, 39}, Sensitivity::Low};
    CHECK(score_context(text, p, rule) == Sensitivity::Low);
  }
}

TEST_CASE("redaction") {
  std::string text = "mail jane@x.com now";
  ExtractionPair p{"jane@x.com", PiiType::EmailAddress, Span{5, 15}, Sensitivity::Moderate};
  CHECK(redact(text, {p}, RedactStyle::MaskType) == "mail [EMAIL_ADDRESS] now");
  CHECK(redact(text, {}, RedactStyle::MaskType) == text);
  CHECK(redact(text, {}, RedactStyle::RedactFull) == text);
  CHECK(redact(text, {p}, RedactStyle::RedactFull) == "mail ██████████ now");

  std::string two = "a@b.c d@e.f";
  std::vector<ExtractionPair> both = {{"a@b.c", PiiType::EmailAddress, Span{0, 5}, Sensitivity::Low},
                                      {"d@e.f", PiiType::EmailAddress, Span{6, 11}, Sensitivity::Low}};
  CHECK(redact(two, both, RedactStyle::MaskType) == "[EMAIL_ADDRESS] [EMAIL_ADDRESS]");

  CHECK_THROWS_AS(apply_replacements("abcdef", {{Span{0, 3}, "x"}, {Span{2, 4}, "y"}}), Error);
  CHECK_THROWS_AS(apply_replacements("abc", {{Span{1, 9}, "x"}}), Error);
  CHECK(apply_replacements("héllo wörld", {{Span{6, 11}, "X"}}) == "héllo X");
  CHECK(parse_redact_style("REDACT_FULL") == RedactStyle::RedactFull);
}

TEST_CASE("property: same-type pairs never overlap") {
  fixtures::Rng rng(11);
  auto sentences = fixtures::pii_fixture(130, 5);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    for (int i = 0; i < 4; ++i) text += rng.pick(sentences).text + " ";
    // Phone runs nest the short pattern inside the long one.
    text += "Call 415-555-0123 or (212) 555-0199.";
    auto pairs = extractor().extract(text);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      CHECK(slice(text, pairs[i].span) == pairs[i].surface);
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        if (pairs[i].pii_type == pairs[j].pii_type) CHECK_FALSE(pairs[i].span.overlaps(pairs[j].span));
      }
    }
  }
  std::vector<ExtractionPair> raw = {{"a", PiiType::PhoneNumber, Span{0, 4}, Sensitivity::Low},
                                     {"b", PiiType::PhoneNumber, Span{2, 10}, Sensitivity::Low},
                                     {"c", PiiType::EmailAddress, Span{2, 5}, Sensitivity::Low}};
  auto merged = merge_same_type(raw);
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].span == Span{2, 10});
  CHECK(merged[1].pii_type == PiiType::EmailAddress);
}

TEST_CASE("property: redaction is idempotent and leaves other bytes alone") {
  fixtures::Rng rng(3);
  auto sentences = fixtures::pii_fixture(260, 9);
  for (int trial = 0; trial < 150; ++trial) {
    std::string text;
    for (int i = rng.uniform(1, 5); i > 0; --i) text += rng.pick(sentences).text + " ";
    auto style = rng.chance(0.5) ? RedactStyle::MaskType : RedactStyle::RedactFull;
    auto pairs = extractor().extract(text);
    auto once = redact(text, pairs, style);
    CHECK(redact(once, extractor().extract(once), style) == once);
    if (pairs.empty()) CHECK(once == text);
  }
}

TEST_CASE("fixture: precision and recall on a small generated sample") {
  auto sentences = fixtures::pii_fixture(260, 21);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& s : sentences) {
    auto pairs = extractor().extract(s.text);
    bool hit = false;
    for (const auto& p : pairs) {
      if (s.valid && p.pii_type == s.type && p.span == s.span) {
        hit = true;
        ++tp;
      } else {
        ++fp;
        INFO("unexpected " << tag(p.pii_type) << " '" << p.surface << "' in: " << s.text);
        CHECK(false);
      }
    }
    if (s.valid && !hit) {
      ++fn;
      INFO("missed " << tag(s.type) << " in: " << s.text);
      CHECK(false);
    }
  }
  CHECK(fp == 0);
  CHECK(fn == 0);
  CHECK(tp > 0);
}

TEST_CASE("batch kernels agree") {
  auto sentences = fixtures::pii_fixture(200, 4);
  std::vector<std::string> texts;
  for (const auto& s : sentences) texts.push_back(s.text);
  CHECK(extract_batch_serial(extractor(), texts) == extract_batch_parallel(extractor(), texts));
}

TEST_CASE("rule pack parsing") {
  auto pack = RulePack::parse(R"(
version: 1
rules:
  - pii_type: email_address
    base_sensitivity: HIGH
    patterns: ['\b\w+@\w+\.com\b']
)");
  REQUIRE(pack.rules().size() == 1);
  Extractor ex(std::make_shared<RulePack>(pack));
  auto pairs = ex.extract("write to bob@site.com");
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].sensitivity == Sensitivity::High);
  CHECK(pack.find(PiiType::Ssn) == nullptr);

  CHECK_THROWS_AS(RulePack::parse("rules:\n  - pii_type: shoe_size\n    base_sensitivity: LOW\n    patterns: ['x']\n"), Error);
  CHECK_THROWS_AS(RulePack::parse("rules:\n  - pii_type: ssn\n    base_sensitivity: LOW\n    patterns: ['(']\n"), Error);
  CHECK_THROWS_AS(RulePack::parse("rules:\n  - pii_type: ssn\n    base_sensitivity: LOW\n    validator: nope\n    patterns: ['x']\n"), Error);
}

TEST_CASE("pii detector findings") {
  PiiDetector det(std::make_shared<Extractor>());
  auto fs = det.detect("SSN 123-45-6789", {});
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].category == "pii.ssn");
  CHECK(fs[0].sensitivity == Sensitivity::High);
  CHECK(fs[0].score > 0.0);
  CHECK(fs[0].score <= 1.0);
  CHECK(pii_descriptor().categories.size() == 13);
}
