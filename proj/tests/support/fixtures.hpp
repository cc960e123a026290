#pragma once
// Test-only helpers: temp dirs, mock detectors, seeded generators for PII,
// attribution and policy fixtures. Header-only so the unit tests, the
// acceptance runner and the benchmark share one definition.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "guardrail/core/types.hpp"
#include "guardrail/core/utf8.hpp"
#include "guardrail/detect/detector.hpp"
#include "guardrail/pii/categories.hpp"
#include "guardrail/policy/template.hpp"

namespace fixtures {

namespace fs = std::filesystem;
using namespace guardrail;

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "guardrail-test-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_text(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

// Runs a shell command and captures stdout.
inline CommandResult run_command(const std::string& command) {
  CommandResult r;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Sleeps, then returns canned findings or throws.
class MockDetector : public detect::Detector {
 public:
  explicit MockDetector(std::vector<Finding> findings = {}, std::chrono::milliseconds delay = {},
                        bool fail = false)
      : findings_(std::move(findings)), delay_(delay), fail_(fail) {}
  std::vector<Finding> detect(std::string_view, const detect::DetectContext&) const override {
    if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
    if (fail_) throw std::runtime_error("mock failure");
    return findings_;
  }

 private:
  std::vector<Finding> findings_;
  std::chrono::milliseconds delay_;
  bool fail_;
};

inline detect::DetectorDescriptor mock_descriptor(std::string id, std::vector<std::string> categories,
                                                  int timeout_ms = 2000,
                                                  std::optional<detect::FailMode> mode = std::nullopt) {
  detect::DetectorDescriptor d;
  d.detector_id = std::move(id);
  d.categories = std::move(categories);
  d.timeout_ms = timeout_ms;
  d.fail_mode = mode;
  return d;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  bool chance(double p) { return real(0.0, 1.0) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
  std::string digits(int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += static_cast<char>('0' + uniform(0, 9));
    return s;
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// PII fixture

// Card numbers whose Luhn sums were worked out by hand; the invalid variants
// bump the final digit by one.
inline const std::vector<std::string>& fixture_card_numbers() {
  static const std::vector<std::string> cards = {
      "4111111111111111", "5500000000000004", "4012888888881881",
      "6011111111111117", "5105105105105100", "378282246310005",
  };
  return cards;
}

// Independent Luhn oracle: digit sum with every second digit from the right
// doubled (minus 9 when above 9).
inline int luhn_sum(std::string_view digits) {
  int sum = 0;
  bool twice = false;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (*it < '0' || *it > '9') continue;
    int v = *it - '0';
    if (twice) v = v * 2 > 9 ? v * 2 - 9 : v * 2;
    sum += v;
    twice = !twice;
  }
  return sum;
}

struct PiiPlant {
  std::string text;          // inserted verbatim
  std::size_t entity_off;    // byte offset of the entity inside `text` (ASCII)
  std::size_t entity_len;
  bool valid = true;
};

struct PiiFixtureSentence {
  std::string text;
  pii::PiiType type;
  Span span;  // expected entity span, scalars
  bool valid = true;
};

inline bool has_checksum(pii::PiiType t) {
  using pii::PiiType;
  return t == PiiType::DateOfBirth || t == PiiType::BankAccountNumber || t == PiiType::CreditCardNumber ||
         t == PiiType::TaxId || t == PiiType::Ssn;
}

inline PiiPlant anchored(std::string anchor, std::string entity, bool valid = true) {
  return {anchor + entity, anchor.size(), entity.size(), valid};
}

inline PiiPlant whole(std::string entity, bool valid = true) {
  auto n = entity.size();
  return {std::move(entity), 0, n, valid};
}

inline std::string iban_de(Rng& rng, bool valid) {
  std::string bban = rng.digits(18);
  // Rearranged: BBAN + "DE00" with D=13, E=14; check = 98 - mod 97.
  std::string num = bban + "131400";
  int rem = 0;
  for (char c : num) rem = (rem * 10 + (c - '0')) % 97;
  int check = 98 - rem;
  if (!valid) check = check == 98 ? 97 : check + 1;
  return fmt::format("DE{:02d}{}", check, bban);
}

inline std::string format_card(const std::string& digits, int style) {
  if (digits.size() == 15) {
    return style == 0 ? digits : digits.substr(0, 4) + " " + digits.substr(4, 6) + " " + digits.substr(10);
  }
  if (style == 0) return digits;
  char sep = style == 1 ? ' ' : '-';
  std::string out;
  for (std::size_t i = 0; i < digits.size(); i += 4) {
    if (i > 0) out += sep;
    out += digits.substr(i, 4);
  }
  return out;
}

inline PiiPlant make_plant(pii::PiiType type, Rng& rng, bool valid) {
  using pii::PiiType;
  static const std::vector<std::string> given = {"Maria", "James", "Priya", "Carlos", "Emily", "Ahmed", "Olga", "Hiroshi"};
  static const std::vector<std::string> surname = {"Garcia", "Smith", "Patel", "Nguyen", "Okafor", "Kowalski", "Tanaka", "Rossi"};
  static const std::vector<std::string> street = {"Maple", "Cedar", "Orchard", "Willow", "Harbor", "Lakeview"};
  static const std::vector<std::string> suffix = {"Street", "Avenue", "Road", "Lane", "Court", "Terrace"};
  static const std::vector<std::string> local = {"jane.doe", "r.kumar", "mlopez", "team.lead7", "a_b+tag"};
  static const std::vector<std::string> domain = {"example.org", "mail.example.com", "uni.edu", "corp.example.net"};
  static const std::vector<std::string> handle = {"river_fox", "quietcoder", "night_owl42", "blue_finch"};
  static const std::vector<int> ein_ok = {12, 20, 35, 46, 52, 61, 74, 81, 94};
  static const std::vector<int> ein_bad = {7, 17, 28, 49, 69, 78, 89, 97};

  switch (type) {
    case PiiType::PersonName:
      return whole(rng.pick(given) + " " + rng.pick(surname));
    case PiiType::StreetAddress:
      return whole(fmt::format("{} {} {}", rng.uniform(1, 9999), rng.pick(street), rng.pick(suffix)));
    case PiiType::DateOfBirth: {
      std::string date;
      if (valid) {
        int y = rng.uniform(1930, 2005), m = rng.uniform(1, 12), d = rng.uniform(1, 28);
        date = rng.chance(0.5) ? fmt::format("{}-{:02d}-{:02d}", y, m, d) : fmt::format("{}/{}/{}", m, d, y);
      } else {
        static const std::vector<std::string> bad = {"1984-02-30", "1990-13-05", "2001-04-31", "2/30/1977",
                                                     "13/1/1988", "1975-00-10"};
        date = rng.pick(bad);
      }
      return anchored(rng.chance(0.5) ? "born on " : "date of birth: ", date, valid);
    }
    case PiiType::PhoneNumber: {
      int area = rng.uniform(201, 989), ex = rng.uniform(200, 999);
      auto line = rng.digits(4);
      switch (rng.uniform(0, 3)) {
        case 0: return whole(fmt::format("({}) {}-{}", area, ex, line));
        case 1: return whole(fmt::format("{}-{}-{}", area, ex, line));
        case 2: return whole(fmt::format("{}.{}.{}", area, ex, line));
        default: return whole(fmt::format("+1 {}-{}-{}", area, ex, line));
      }
    }
    case PiiType::EmailAddress:
      return whole(rng.pick(local) + "@" + rng.pick(domain));
    case PiiType::SocialMediaHandle:
      return whole("@" + rng.pick(handle));
    case PiiType::BankAccountNumber:
      if (!valid || rng.chance(0.5)) return whole(iban_de(rng, valid), valid);
      return anchored("account number ", rng.digits(rng.uniform(8, 12)));
    case PiiType::CreditCardNumber: {
      auto digits = rng.pick(fixture_card_numbers());
      if (!valid) digits.back() = static_cast<char>('0' + (digits.back() - '0' + 1) % 10);
      return whole(format_card(digits, rng.uniform(0, 2)), valid);
    }
    case PiiType::TaxId:
      if (!valid) return whole(fmt::format("{:02d}-{}", rng.pick(ein_bad), rng.digits(7)), false);
      if (rng.chance(0.5)) return whole(fmt::format("{:02d}-{}", rng.pick(ein_ok), rng.digits(7)));
      return whole(fmt::format("9{}-7{}-{}", rng.digits(2), rng.digits(1), rng.digits(4)));
    case PiiType::Ssn: {
      if (valid) {
        int area = rng.uniform(1, 898);
        if (area == 666) area = 667;
        return whole(fmt::format("{:03d}-{:02d}-{:04d}", area, rng.uniform(1, 99), rng.uniform(1, 9999)));
      }
      switch (rng.uniform(0, 4)) {
        case 0: return whole(fmt::format("000-{:02d}-{:04d}", rng.uniform(1, 99), rng.uniform(1, 9999)), false);
        case 1: return whole(fmt::format("666-{:02d}-{:04d}", rng.uniform(1, 99), rng.uniform(1, 9999)), false);
        // 9xx areas with groups outside the ITIN ranges.
        case 2: return whole(fmt::format("9{:02d}-{:02d}-{:04d}", rng.uniform(0, 99), rng.uniform(1, 49), rng.uniform(1, 9999)), false);
        case 3: return whole(fmt::format("{:03d}-00-{:04d}", rng.uniform(1, 665), rng.uniform(1, 9999)), false);
        default: return whole(fmt::format("{:03d}-{:02d}-0000", rng.uniform(1, 665), rng.uniform(1, 99)), false);
      }
    }
    case PiiType::PassportNumber:
      if (rng.chance(0.5)) return anchored("passport number ", std::string(1, static_cast<char>('A' + rng.uniform(0, 25))) + rng.digits(8));
      return anchored("passport ", std::to_string(rng.uniform(1, 9)) + rng.digits(8));
    case PiiType::DriversLicenseNumber:
      return anchored(rng.chance(0.5) ? "driver's license " : "driver license number ",
                      std::string(1, static_cast<char>('A' + rng.uniform(0, 25))) + rng.digits(rng.uniform(7, 10)));
    case PiiType::HealthIdentifier: {
      static const std::vector<std::string> anchors = {"MRN ", "member id ", "medical record number ",
                                                       "health insurance id "};
      static const std::vector<std::string> prefixes = {"", "MR", "HI", "XK"};
      return anchored(rng.pick(anchors), rng.pick(prefixes) + rng.digits(rng.uniform(6, 9)));
    }
  }
  return whole("");
}

// Neutral carrier sentences: no capitalised words after the first, no
// context terms, one non-ASCII scalar so byte and scalar offsets differ.
inline const std::vector<std::pair<std::string, std::string>>& pii_wrappers() {
  static const std::vector<std::pair<std::string, std::string>> w = {
      {"Please note that ", " was recorded yesterday."},
      {"The form listed ", " among the details."},
      {"According to the café notes, ", " appeared twice."},
      {"We found ", " in the archived thread."},
      {"For reference: ", "."},
  };
  return w;
}

// Sentence i plants one entity of type i % 13. Checksum-guarded types get an
// invalid variant about a third of the time.
inline std::vector<PiiFixtureSentence> pii_fixture(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PiiFixtureSentence> out;
  out.reserve(n);
  const auto& types = pii::all_pii_types();
  for (std::size_t i = 0; i < n; ++i) {
    auto type = types[i % types.size()];
    bool valid = !has_checksum(type) || (i / types.size()) % 3 != 1;
    auto plant = make_plant(type, rng, valid);
    const auto& [pre, post] = rng.pick(pii_wrappers());
    PiiFixtureSentence s;
    s.text = pre + plant.text + post;
    s.type = type;
    s.valid = plant.valid;
    auto start = scalar_length(pre) + plant.entity_off;
    s.span = Span{start, start + plant.entity_len};
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Attribution fixture

// Pseudo-words over two disjoint alphabets so corpus text and filler text
// never share a token.
inline std::vector<std::string> make_vocabulary(Rng& rng, std::size_t n, std::string_view consonants,
                                                std::string_view vowels) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w;
    int syllables = rng.uniform(2, 4);
    for (int s = 0; s < syllables; ++s) {
      w += consonants[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(consonants.size()) - 1))];
      w += vowels[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(vowels.size()) - 1))];
    }
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

inline std::string join_words(const std::vector<std::string>& words, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += words[i];
  }
  return out;
}

struct AttributionCorpus {
  std::vector<std::pair<std::string, std::string>> docs;  // (doc_id, text)
  std::vector<std::vector<std::string>> doc_words;
  std::vector<std::string> corpus_vocab;
  std::vector<std::string> filler_vocab;
};

inline AttributionCorpus attribution_corpus(std::size_t docs, std::uint64_t seed, int min_words = 120,
                                            int max_words = 220) {
  Rng rng(seed);
  AttributionCorpus c;
  c.corpus_vocab = make_vocabulary(rng, 4000, "bdfgklmnprstvz", "aeiou");
  c.filler_vocab = make_vocabulary(rng, 1000, "chjqwxy", "aeiou");
  for (std::size_t d = 0; d < docs; ++d) {
    int n = rng.uniform(min_words, max_words);
    std::vector<std::string> words;
    for (int i = 0; i < n; ++i) words.push_back(rng.pick(c.corpus_vocab));
    c.docs.emplace_back(fmt::format("doc-{:03d}", d), join_words(words, 0, words.size()));
    c.doc_words.push_back(std::move(words));
  }
  return c;
}

struct AttributionPlant {
  std::string query;
  std::string doc_id;
  Span query_span;        // scalars, covering the planted words
  Span doc_span;          // scalars in the source doc
  std::size_t words = 0;
  std::size_t substituted = 0;
  double expected_similarity() const {
    return static_cast<double>(words - substituted) / static_cast<double>(words);
  }
};

// A run of `words` corpus words copied from a random doc and wrapped in
// filler. With `semi`, one interior word of every ten is replaced by a
// filler word (positions 5, 15, 25, ...).
inline AttributionPlant plant_query(const AttributionCorpus& c, Rng& rng, std::size_t words, bool semi) {
  AttributionPlant p;
  auto d = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(c.docs.size()) - 1));
  const auto& dw = c.doc_words[d];
  auto start = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(dw.size() - words)));
  std::vector<std::string> run(dw.begin() + static_cast<std::ptrdiff_t>(start),
                               dw.begin() + static_cast<std::ptrdiff_t>(start + words));
  if (semi) {
    for (std::size_t i = 5; i + 1 < run.size(); i += 10) {
      run[i] = rng.pick(c.filler_vocab);
      ++p.substituted;
    }
  }
  std::vector<std::string> before, after;
  for (int i = rng.uniform(3, 15); i > 0; --i) before.push_back(rng.pick(c.filler_vocab));
  for (int i = rng.uniform(3, 15); i > 0; --i) after.push_back(rng.pick(c.filler_vocab));
  auto head = join_words(before, 0, before.size()) + " ";
  auto body = join_words(run, 0, run.size());
  p.query = head + body + " " + join_words(after, 0, after.size());
  p.doc_id = c.docs[d].first;
  p.query_span = Span{head.size(), head.size() + body.size()};
  std::size_t doc_start = 0;
  for (std::size_t i = 0; i < start; ++i) doc_start += dw[i].size() + 1;
  std::size_t doc_len = 0;
  for (std::size_t i = start; i < start + words; ++i) doc_len += dw[i].size() + (i + 1 < start + words ? 1 : 0);
  p.doc_span = Span{doc_start, doc_start + doc_len};
  p.words = words;
  return p;
}

inline std::string disjoint_query(const AttributionCorpus& c, Rng& rng, int words) {
  std::vector<std::string> w;
  for (int i = 0; i < words; ++i) w.push_back(rng.pick(c.filler_vocab));
  return join_words(w, 0, w.size());
}

// ---------------------------------------------------------------------------
// Policy fixture

inline const std::vector<std::string>& finding_categories() {
  static const std::vector<std::string> cats = {"pii.email_address", "pii.ssn",  "pii.person_name",
                                                "pii.phone_number",  "hap",      "attribution",
                                                "inappropriate.adult", "custom.signal"};
  return cats;
}

// Random prose with sentence breaks, ASCII only.
inline std::string random_text(Rng& rng, int words) {
  static const std::vector<std::string> vocab = {"alpha", "river", "stone", "quiet", "lamp", "orbit", "field",
                                                 "copper", "meadow", "signal", "window", "harbor", "echo"};
  std::string out;
  for (int i = 0; i < words; ++i) {
    if (i > 0) out += (rng.chance(0.12) ? ". " : " ");
    out += rng.pick(vocab);
  }
  return out + ".";
}

inline Finding random_finding(Rng& rng, std::size_t text_len) {
  Finding f;
  f.category = rng.pick(finding_categories());
  f.detector_id = f.category.substr(0, f.category.find('.'));
  bool spanned = f.category.starts_with("pii.") || rng.chance(0.6);
  if (spanned && text_len > 1) {
    auto a = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(text_len) - 1));
    auto len = static_cast<std::size_t>(rng.uniform(1, 12));
    f.span = Span{a, std::min(text_len, a + len)};
  }
  f.score = std::round(rng.real(0.0, 1.0) * 100.0) / 100.0;
  f.label = "positive";
  if (f.category.starts_with("pii.") && rng.chance(0.7)) f.sensitivity = static_cast<Sensitivity>(rng.uniform(0, 2));
  return f;
}

inline std::string random_glob(Rng& rng) {
  static const std::vector<std::string> globs = {"pii.*", "pii.ssn", "pii.email_address", "hap", "attribution",
                                                 "inappropriate.*", "*", "custom.?ignal", "pii.person_name"};
  return rng.pick(globs);
}

inline std::string random_atom(Rng& rng) {
  static const std::vector<std::string> ops = {"<", "<=", ">", ">=", "==", "!="};
  static const std::vector<std::string> levels = {"LOW", "MODERATE", "HIGH"};
  switch (rng.uniform(0, 5)) {
    case 0:
    case 1: return fmt::format("category({})", random_glob(rng));
    case 2: return fmt::format("score {} {:.2f}", rng.pick(ops), rng.real(0.0, 1.0));
    case 3: return fmt::format("sensitivity {} {}", rng.pick(ops), rng.pick(levels));
    case 4: return rng.chance(0.5) ? "direction(prompt)" : "direction(response)";
    default: return fmt::format("SAME_SENTENCE({}, {})", random_glob(rng), random_glob(rng));
  }
}

inline std::string random_expression(Rng& rng, int depth = 0) {
  int choice = depth > 2 ? 0 : rng.uniform(0, 4);
  switch (choice) {
    case 1: return fmt::format("{} and {}", random_expression(rng, depth + 1), random_expression(rng, depth + 1));
    case 2: return fmt::format("({} or {})", random_expression(rng, depth + 1), random_expression(rng, depth + 1));
    case 3: return fmt::format("not (score >= {:.2f})", rng.real(0.0, 1.0));
    default: return random_atom(rng);
  }
}

inline policy::PolicyTemplate random_template(Rng& rng, const std::string& id = "rand") {
  policy::PolicyTemplate t;
  t.policy_id = id;
  t.jurisdiction = rng.chance(0.3) ? "gdpr" : "default";
  t.default_action = rng.chance(0.7) ? Decision::Pass : static_cast<Decision>(rng.uniform(0, 3));
  t.block_message = "blocked";
  int rules = rng.uniform(1, 4);
  for (int r = 0; r < rules; ++r) {
    policy::PolicyRule rule;
    rule.rule_id = fmt::format("r{}", r);
    rule.action = static_cast<Decision>(rng.uniform(0, 3));
    auto expr = random_expression(rng);
    if (rule.action == Decision::Mask) {
      expr = fmt::format("category(pii.*) and ({})", expr);
      rule.mask_style = rng.chance(0.5) ? pii::RedactStyle::MaskType : pii::RedactStyle::RedactFull;
    }
    rule.when = policy::Predicate::parse(expr);
    t.rules.push_back(std::move(rule));
  }
  return t;
}

inline policy::JurisdictionTables fixture_jurisdictions() {
  policy::JurisdictionTables tables;
  tables["gdpr"] = {"gdpr", {{"pii.email_address", Sensitivity::High}, {"pii.person_name", Sensitivity::Moderate}}};
  tables["ccpa"] = {"ccpa", {{"pii.*", Sensitivity::Moderate}}};
  return tables;
}

}  // namespace fixtures
