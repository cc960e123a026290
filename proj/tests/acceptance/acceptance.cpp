// Acceptance runner: one PASS/FAIL line per headline criterion, exit 1 if
// any fails. Tolerances are fixed here, not tuned per run.

#include <json.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>

#include "fixtures.hpp"
#include "guardrail/attribution/engine.hpp"
#include "guardrail/attribution/index.hpp"
#include "guardrail/classify/classifier.hpp"
#include "guardrail/classify/lexicon.hpp"
#include "guardrail/core/paths.hpp"
#include "guardrail/detect/registry.hpp"
#include "guardrail/orchestrator/config.hpp"
#include "guardrail/orchestrator/orchestrator.hpp"
#include "guardrail/pii/extractor.hpp"
#include "guardrail/pii/redact.hpp"
#include "guardrail/pii/validators.hpp"
#include "guardrail/policy/engine.hpp"
#include "guardrail/policy/loader.hpp"
#include "guardrail/policy/policy_set.hpp"

using namespace guardrail;
using fixtures::Rng;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Finding finding(std::string category, std::optional<Span> span, double score = 0.9) {
  Finding f;
  f.category = std::move(category);
  f.span = span;
  f.score = score;
  f.label = "positive";
  return f;
}

ShieldRequest request(std::string text, Direction dir = Direction::Prompt) {
  ShieldRequest r;
  r.request_id = "acceptance";
  r.text = std::move(text);
  r.direction = dir;
  return r;
}

std::shared_ptr<policy::PolicyRegistry> single_policy(const std::string& yaml) {
  return std::make_shared<policy::PolicyRegistry>(policy::make_policy_set({policy::parse_policy(yaml)}));
}

struct Mock {
  std::string id;
  std::vector<std::string> categories;
  int delay_ms = 0;
  int timeout_ms = 2000;
  std::optional<detect::FailMode> mode;
};

std::shared_ptr<orchestrator::Orchestrator> mock_orchestrator(const std::vector<Mock>& mocks, const std::string& policy) {
  auto reg = std::make_shared<detect::DetectorRegistry>();
  for (const auto& m : mocks) {
    reg->add(fixtures::mock_descriptor(m.id, m.categories, m.timeout_ms, m.mode),
             std::make_shared<fixtures::MockDetector>(std::vector<Finding>{}, std::chrono::milliseconds(m.delay_ms)));
  }
  auto pol = single_policy(policy);
  auto id = pol->snapshot()->ids().front();
  return std::make_shared<orchestrator::Orchestrator>(reg, pol, 64, std::vector<std::string>{id});
}

const char* kPlainPolicy = "policy_id: p\ndefault_action: PASS\nrules:\n  - id: w\n    when: category(misc)\n    action: WARN\n";

// 1. Wall time tracks the slowest detector, not the sum.
Outcome latency() {
  auto t0 = Clock::now();
  auto fixed = mock_orchestrator({{"a", {"misc"}, 50}, {"b", {"misc"}, 100}, {"c", {"misc"}, 150}}, kPlainPolicy);
  double worst = 0.0;
  int over = 0;
  for (int i = 0; i < 100; ++i) {
    auto s = Clock::now();
    fixed->shield(request("latency probe"));
    double ms = ms_since(s);
    worst = std::max(worst, ms);
    if (ms > 200.0) ++over;
  }

  Rng rng(1);
  int within = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Mock> mocks;
    int slowest = 0;
    for (int d = 0; d < 16; ++d) {
      int delay = rng.uniform(10, 150);
      slowest = std::max(slowest, delay);
      mocks.push_back({fmt::format("m{}", d), {"misc"}, delay});
    }
    auto orch = mock_orchestrator(mocks, kPlainPolicy);
    auto s = Clock::now();
    orch->shield(request("latency probe"));
    if (ms_since(s) <= slowest + 50.0) ++within;
  }
  double total_s = ms_since(t0) / 1000.0;
  return {over == 0 && within >= 99 && total_s < 60.0,
          fmt::format("fixed: {}/100 over 200 ms (worst {:.1f} ms); random 16: {}/100 within max+50 ms; {:.1f} s",
                      over, worst, within, total_s)};
}

// 2. Planted entities across all 13 categories.
Outcome pii_fixture_suite() {
  auto t0 = Clock::now();
  // Luhn oracle first; the sums were worked by hand.
  bool luhn_ok = fixtures::luhn_sum("4111111111111111") == 30 && fixtures::luhn_sum("5500000000000004") == 10;
  for (const auto& card : fixtures::fixture_card_numbers()) {
    luhn_ok = luhn_ok && fixtures::luhn_sum(card) % 10 == 0 && pii::luhn_valid(card);
  }

  static const pii::Extractor ex;
  auto sentences = fixtures::pii_fixture(500, 2024);
  std::size_t tp = 0, fp = 0, fn = 0, invalid_flagged = 0, invalid = 0;
  std::set<pii::PiiType> covered;
  for (const auto& s : sentences) {
    covered.insert(s.type);
    if (!s.valid) ++invalid;
    bool hit = false;
    for (const auto& p : ex.extract(s.text)) {
      if (s.valid && p.pii_type == s.type && p.span == s.span) {
        hit = true;
        ++tp;
      } else if (!s.valid && p.pii_type == s.type) {
        ++invalid_flagged;
      } else {
        ++fp;
      }
    }
    if (s.valid && !hit) ++fn;
  }
  double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  double secs = ms_since(t0) / 1000.0;
  return {luhn_ok && covered.size() == 13 && precision == 1.0 && recall == 1.0 && invalid_flagged == 0 && secs < 10.0,
          fmt::format("P={:.4f} R={:.4f} ({} tp, {} fp, {} fn); invalid flagged {}/{}; categories {}; luhn {}; {:.2f} s",
                      precision, recall, tp, fp, fn, invalid_flagged, invalid, covered.size(), luhn_ok ? "ok" : "bad",
                      secs)};
}

// Uniform synthetic text: filler words with a PII entity every ten tokens.
std::string synthetic_text(std::size_t tokens) {
  static const std::vector<std::string> filler = {"river", "stone", "lamp", "orbit", "field",
                                                  "cloud", "paper", "tower", "metal"};
  static const std::vector<std::string> entities = {"jane.doe@example.com", "415-555-0123", "123-45-6789",
                                                    "@river_fan"};
  std::string out;
  for (std::size_t i = 0; i < tokens; ++i) {
    if (i > 0) out += ' ';
    out += i % 10 == 9 ? entities[(i / 10) % entities.size()] : filler[i % filler.size()];
  }
  return out;
}

// 3. Extraction time grows linearly with tokens.
Outcome pii_scaling() {
  static const pii::Extractor ex;
  const std::vector<double> sizes = {150, 300, 600, 1200};
  std::vector<double> times;
  for (double n : sizes) {
    auto text = synthetic_text(static_cast<std::size_t>(n));
    for (int i = 0; i < 3; ++i) ex.extract(text);  // warm up
    std::vector<double> runs;
    for (int rep = 0; rep < 15; ++rep) {
      auto s = Clock::now();
      const int inner = 10;
      for (int i = 0; i < inner; ++i) ex.extract(text);
      runs.push_back(ms_since(s) / inner);
    }
    std::nth_element(runs.begin(), runs.begin() + runs.size() / 2, runs.end());
    times.push_back(runs[runs.size() / 2]);
  }
  double mx = std::accumulate(sizes.begin(), sizes.end(), 0.0) / 4.0;
  double my = std::accumulate(times.begin(), times.end(), 0.0) / 4.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    sxy += (sizes[i] - mx) * (times[i] - my);
    sxx += (sizes[i] - mx) * (sizes[i] - mx);
    syy += (times[i] - my) * (times[i] - my);
  }
  double r2 = syy == 0.0 ? 0.0 : (sxy * sxy) / (sxx * syy);
  double ratio = times[3] / times[0];
  return {r2 >= 0.95 && ratio <= 10.0,
          fmt::format("t(ms) 150:{:.3f} 300:{:.3f} 600:{:.3f} 1200:{:.3f}; R2={:.4f}; t1200/t150={:.2f}", times[0],
                      times[1], times[2], times[3], r2, ratio)};
}

// 4. Redaction is idempotent, keeps other bytes, uses the right placeholder.
Outcome masking() {
  static const pii::Extractor ex;
  Rng rng(4);
  auto sentences = fixtures::pii_fixture(520, 44);
  int failures = 0, masked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    for (int i = rng.uniform(1, 4); i > 0; --i) text += rng.pick(sentences).text + " ";
    auto pairs = ex.extract(text);
    auto once = pii::redact(text, pairs, pii::RedactStyle::MaskType);
    bool ok = pii::redact(once, ex.extract(once), pii::RedactStyle::MaskType) == once;

    // Rebuild the expected output by hand: untouched gaps plus the placeholder
    // of the winning pair for every region (longest first, then start order).
    auto order = pairs;
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.span.length() > b.span.length(); });
    std::vector<pii::ExtractionPair> chosen;
    for (const auto& p : order) {
      if (std::none_of(chosen.begin(), chosen.end(), [&](const auto& c) { return c.span.overlaps(p.span); })) {
        chosen.push_back(p);
      }
    }
    std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) { return a.span.start < b.span.start; });
    std::string expected;
    std::size_t at = 0;
    for (const auto& c : chosen) {
      expected += slice(text, Span{at, c.span.start});
      expected += pii::placeholder(c.pii_type);
      at = c.span.end;
    }
    expected += slice(text, Span{at, scalar_length(text)});
    ok = ok && once == expected;
    if (!chosen.empty()) ++masked;
    if (!ok) ++failures;
  }
  return {failures == 0 && masked > 900,
          fmt::format("1000 texts ({} with entities), {} failures", masked, failures)};
}

bool fired(const Verdict& v, std::string_view rule) {
  return std::any_of(v.audit.begin(), v.audit.end(), [&](const RuleFiring& f) { return f.rule_id == rule; });
}

// 5. Name and hate term in one sentence blocks; in different sentences it does not.
Outcome cross_detector() {
  auto cfg = orchestrator::load_config(data_dir() / "config" / "default.yaml");
  auto orch = orchestrator::build_orchestrator(cfg);
  const std::string same = "Maria Garcia is a worthless idiot. The weather is fine today.";
  const std::string apart = "Maria Garcia arrived this morning. That plan was a worthless idiot move.";
  std::vector<std::string> lines;
  bool ok = true;
  for (auto dir : {Direction::Prompt, Direction::Response}) {
    auto pos = orch->shield(request(same, dir));
    auto neg = orch->shield(request(apart, dir));
    bool case_ok = pos.decision == Decision::Block && fired(pos, "name-with-hate") && !fired(neg, "name-with-hate");
    ok = ok && case_ok;
    lines.push_back(fmt::format("{}: same-sentence {} ({}), split {}", to_string(dir), to_string(pos.decision),
                                fired(pos, "name-with-hate") ? "fired" : "not fired",
                                fired(neg, "name-with-hate") ? "fired" : "not fired"));
  }

  // The same rule on hand-placed findings, independent of the detectors.
  policy::PolicyTemplate t;
  t.policy_id = "t";
  t.rules.push_back({"nh", policy::Predicate::parse("SAME_SENTENCE(pii.person_name, hap)"), Decision::Block, {}, {}});
  auto eval = [&](const std::string& text, Span hate) {
    return policy::evaluate(text, {finding("pii.person_name", Span{0, 12}), finding("hap", hate)}, {&t}, "default",
                            Direction::Prompt, {});
  };
  bool hand = eval("Maria Garcia is an idiot. Fine.", Span{0, 25}).decision == Decision::Block &&
              eval("Maria Garcia is here. You idiot.", Span{22, 32}).decision == Decision::Pass;
  ok = ok && hand;
  return {ok, fmt::format("{}; hand-placed findings {}", fmt::join(lines, "; "), hand ? "ok" : "wrong")};
}

// 6. Identical inputs, identical verdicts; more findings never lower the decision.
Outcome determinism() {
  Rng rng(6);
  auto tables = fixtures::fixture_jurisdictions();
  int nondet = 0, lowered = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto text = fixtures::random_text(rng, rng.uniform(5, 40));
    auto n = scalar_length(text);
    auto t = fixtures::random_template(rng);
    std::vector<Finding> fs;
    for (int i = rng.uniform(0, 6); i > 0; --i) fs.push_back(fixtures::random_finding(rng, n));
    auto dir = rng.chance(0.5) ? Direction::Prompt : Direction::Response;
    std::string juris = rng.chance(0.5) ? "gdpr" : "default";
    auto a = policy::evaluate(text, fs, {&t}, juris, dir, tables);
    if (!(a == policy::evaluate(text, fs, {&t}, juris, dir, tables))) ++nondet;
    auto more = fs;
    more.insert(more.begin() + rng.uniform(0, static_cast<int>(more.size())), fixtures::random_finding(rng, n));
    if (policy::evaluate(text, more, {&t}, juris, dir, tables).decision < a.decision) ++lowered;
  }
  return {nondet == 0 && lowered == 0,
          fmt::format("1000 instances: {} nondeterministic, {} lowered by an extra finding", nondet, lowered)};
}

// 7. Planted reuse is found at the right similarity; unrelated text is not.
Outcome attribution_oracle() {
  auto t0 = Clock::now();
  auto corpus = fixtures::attribution_corpus(100, 7);
  auto idx = attribution::CorpusIndex::build_parallel(corpus.docs, 5);
  attribution::AttributionParams params;
  Rng rng(70);

  auto locate = [&](const fixtures::AttributionPlant& p) -> std::optional<attribution::AttributionMatch> {
    for (const auto& m : attribution::attribute(idx, p.query, params)) {
      if (m.doc_id == p.doc_id && m.query_span.overlaps(p.query_span)) return m;
    }
    return std::nullopt;
  };

  int verbatim_hit = 0;
  for (int i = 0; i < 50; ++i) {
    auto plant = fixtures::plant_query(corpus, rng, static_cast<std::size_t>(rng.uniform(12, 40)), false);
    auto m = locate(plant);
    if (m && m->similarity == 1.0 && m->query_span == plant.query_span && m->doc_span == plant.doc_span) ++verbatim_hit;
  }
  int semi_hit = 0;
  double worst_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto plant = fixtures::plant_query(corpus, rng, static_cast<std::size_t>(rng.uniform(20, 40)), true);
    auto m = locate(plant);
    if (!m) continue;
    double err = std::abs(m->similarity - plant.expected_similarity());
    worst_err = std::max(worst_err, err);
    if (err <= 0.05) ++semi_hit;
  }
  std::size_t disjoint_matches = 0;
  for (int i = 0; i < 50; ++i) {
    disjoint_matches += attribution::attribute(idx, fixtures::disjoint_query(corpus, rng, rng.uniform(12, 60)), params).size();
  }
  double secs = ms_since(t0) / 1000.0;
  return {verbatim_hit == 50 && semi_hit == 50 && disjoint_matches == 0 && secs < 30.0,
          fmt::format("verbatim {}/50 at 1.0; semi-verbatim {}/50 within 0.05 (worst {:.4f}); disjoint matches {}; {:.2f} s",
                      verbatim_hit, semi_hit, worst_err, disjoint_matches, secs)};
}

// 8. Lexicon learning and scoring against hand-computed values.
Outcome tfidf_oracle() {
  std::vector<classify::LabeledDoc> toy = {{"casino poker bets", true}, {"poker night fun", true},
                                           {"weather is sunny", false}};
  const double poker = (std::log(4.0 / 3.0) + 1.0) / 3.0;
  const double single = (std::log(2.0) + 1.0) / 6.0;
  auto ranked = classify::rank_terms(toy);
  std::vector<std::string> order;
  for (const auto& r : ranked) order.push_back(r.term);
  const std::vector<std::string> expected_order = {"poker", "bets", "casino", "fun", "night", "is", "sunny", "weather"};
  bool ranking = order == expected_order && std::abs(ranked[0].mean_positive - poker) < 1e-12;
  for (std::size_t i = 1; i < 5 && ranking; ++i) ranking = std::abs(ranked[i].mean_positive - single) < 1e-12;

  auto lex = classify::build_lexicon(toy, "gambling", 2);
  ranking = ranking && lex.keywords.size() == 2 && lex.keywords.count("poker") == 1 && lex.keywords.count("bets") == 1;

  // s = mass / tokens; score = s / (s + 1).
  struct Case {
    const char* text;
    double s;
  };
  const std::vector<Case> cases = {{"poker", poker},
                                   {"poker bets", (poker + single) / 2.0},
                                   {"Poker tonight with friends", poker / 4.0},
                                   {"bets bets on the table", 2.0 * single / 5.0},
                                   {"sunny weather", 0.0}};
  double worst = 0.0;
  for (const auto& c : cases) {
    worst = std::max(worst, std::abs(classify::classify(lex, c.text).score - c.s / (c.s + 1.0)));
  }
  return {ranking && worst <= 1e-9,
          fmt::format("ranking [{}] {}; max score error {:.2e}", fmt::join(order, ", "), ranking ? "exact" : "WRONG",
                      worst)};
}

// 9. A timed-out FAIL_CLOSED detector whose categories block forces BLOCK.
Outcome fail_closed() {
  const char* policy = "policy_id: p\ndefault_action: PASS\nrules:\n  - id: tox\n    when: category(tox)\n    action: BLOCK\n";
  auto orch = mock_orchestrator(
      {{"tox", {"tox"}, 500, 50, detect::FailMode::FailClosed}, {"fast", {"misc"}, 0}}, policy);
  auto v = orch->shield(request("perfectly harmless text"));
  bool listed = v.degraded == std::vector<std::string>{"tox"};
  return {v.decision == Decision::Block && listed,
          fmt::format("decision {}, degraded [{}]", to_string(v.decision), fmt::join(v.degraded, ", "))};
}

// 10. Batch vetting a contribution tree through the command line.
Outcome end_to_end_vet() {
  fixtures::TempDir dir;
  static const std::vector<std::string> topics = {"tides", "volcanoes", "bread", "orbits", "glaciers",
                                                  "bridges", "forests", "rivers", "deserts", "comets"};
  static const std::vector<std::string> verbs = {"shape", "follow", "explain", "change", "support"};

  struct Plant {
    int file;
    std::string field;
    std::string text;
    std::string entity;
    std::string category;
  };
  const std::vector<Plant> plants = {
      {3, "seed_examples[1].answer", "You can write to jane.doe@example.com for the dataset.", "jane.doe@example.com",
       "pii.email_address"},
      {11, "seed_examples[0].context", "The applicant listed 123-45-6789 on the intake form.", "123-45-6789", "pii.ssn"},
      {17, "seed_examples[2].question", "Why was the card 4111 1111 1111 1111 declined at checkout?",
       "4111 1111 1111 1111", "pii.credit_card_number"},
  };

  Rng rng(10);
  for (int f = 0; f < 20; ++f) {
    std::string doc = fmt::format("created_by: contributor{}\ndomain: science\nseed_examples:\n", f);
    for (int e = 0; e < 3; ++e) {
      auto sentence = [&] {
        return fmt::format("Studies of {} {} how {} {} over time.", rng.pick(topics), rng.pick(verbs), rng.pick(topics),
                           rng.pick(verbs));
      };
      std::map<std::string, std::string> fields = {
          {"context", sentence()}, {"question", "How do " + rng.pick(topics) + " form?"}, {"answer", sentence()}};
      for (const auto& p : plants) {
        if (p.file == f && p.field.find(fmt::format("[{}]", e)) != std::string::npos) {
          fields[p.field.substr(p.field.rfind('.') + 1)] = p.text;
        }
      }
      doc += fmt::format("  - context: {}\n    question: {}\n    answer: {}\n", fields["context"], fields["question"],
                         fields["answer"]);
    }
    fixtures::write_text(dir / fmt::format("contrib/record{:02}/qna.yaml", f), doc);
  }

  auto cmd = fmt::format("env -u GUARDRAIL_CONFIG {} check --format annotations {}", fixtures::shell_quote(VET_BINARY),
                         fixtures::shell_quote((dir / "contrib").string()));
  auto r = fixtures::run_command(cmd);
  int correct = 0;
  std::size_t count = 0;
  try {
    auto ann = nlohmann::json::parse(r.output)["annotations"];
    count = ann.size();
    for (const auto& p : plants) {
      auto file = (dir / fmt::format("contrib/record{:02}/qna.yaml", p.file)).string();
      auto start = p.text.find(p.entity);
      for (const auto& a : ann) {
        if (a["file"] == file && a["field"] == p.field && a["category"] == p.category && !a["span"].is_null() &&
            a["span"]["start"] == start && a["span"]["end"] == start + p.entity.size()) {
          ++correct;
          break;
        }
      }
    }
  } catch (const std::exception& e) {
    return {false, fmt::format("exit {}; unparsable output: {}", r.exit_code, e.what())};
  }
  return {r.exit_code == 1 && count == 3 && correct == 3,
          fmt::format("exit {}; {} annotations, {}/3 at the planted file/field/span", r.exit_code, count, correct)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"latency-contract", latency},
      {"pii-fixture-suite", pii_fixture_suite},
      {"pii-linear-scaling", pii_scaling},
      {"masking-correctness", masking},
      {"cross-detector-policy", cross_detector},
      {"policy-determinism-dominance", determinism},
      {"attribution-oracle", attribution_oracle},
      {"tfidf-oracle", tfidf_oracle},
      {"fail-closed", fail_closed},
      {"end-to-end-vet", end_to_end_vet},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << fmt::format("{}/{} criteria passed", criteria.size() - static_cast<std::size_t>(failed), criteria.size())
            << std::endl;
  return failed == 0 ? 0 : 1;
}
