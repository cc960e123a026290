#include "guardrail/pii/extractor.hpp"

#include <algorithm>

#include <boost/regex.hpp>

#include "compiled_pattern.hpp"
#include "guardrail/core/utf8.hpp"

namespace guardrail::pii {
namespace {

bool capitalized(const WordToken& t) {
  const auto& s = t.surface;
  if (s.size() < 2 || s[0] < 'A' || s[0] > 'Z') return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80 && !(c >= 'a' && c <= 'z')) return false;
  }
  return true;
}

bool only_spaces_between(const Utf8Text& text, std::size_t from, std::size_t to) {
  if (from >= to) return false;
  for (std::size_t i = from; i < to; ++i) {
    auto cp = text.at(i);
    if (cp != ' ' && cp != '\t') return false;
  }
  return true;
}

void match_patterns(const Utf8Text& text, const PiiRule& rule, std::vector<ExtractionPair>& out) {
  const std::string_view bytes = text.text();
  for (const auto& pattern : rule.patterns) {
    boost::cregex_iterator it(bytes.data(), bytes.data() + bytes.size(), pattern.compiled->regex);
    for (boost::cregex_iterator end; it != end; ++it) {
      const auto& m = *it;
      const auto& g = (m.size() > 1 && m[1].matched) ? m[1] : m[0];
      auto b = static_cast<std::size_t>(g.first - bytes.data());
      auto e = static_cast<std::size_t>(g.second - bytes.data());
      if (b >= e) continue;
      std::string_view surface = bytes.substr(b, e - b);
      if (pattern.validator != nullptr && !pattern.validator(surface)) continue;
      Span span{text.scalar_at_byte(b), text.scalar_at_byte(e)};
      if (span.start >= span.end) continue;
      out.push_back({std::string(text.slice(span)), rule.pii_type, span, rule.base_sensitivity});
    }
  }
}

void match_names(const Utf8Text& text, const std::vector<WordToken>& tokens, const PiiRule& rule,
                 std::vector<ExtractionPair>& out) {
  const auto& lex = *rule.names;
  auto emit = [&](const Span& span) {
    out.push_back({std::string(text.slice(span)), rule.pii_type, span, rule.base_sensitivity});
  };
  auto surname_like = [&](const WordToken& t) {
    return capitalized(t) && (lex.surnames.count(t.lower) != 0 || lex.stopwords.count(t.lower) == 0);
  };
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (!capitalized(tok)) continue;
    const auto& next = tokens[i + 1];
    if (lex.given_names.count(tok.lower) != 0 && only_spaces_between(text, tok.span.end, next.span.start) &&
        surname_like(next)) {
      emit(Span{tok.span.start, next.span.end});
      continue;
    }
    if (lex.titles.count(tok.lower) != 0) {
      // "Dr. Lopez", "Mrs Chen": optional dot then spaces.
      std::size_t gap = tok.span.end;
      if (gap < text.size() && text.at(gap) == '.') ++gap;
      if (only_spaces_between(text, gap, next.span.start) && surname_like(next)) {
        emit(next.span);
      }
    }
  }
}

// Token index range [first, last] overlapping `span`; first > last when none.
std::pair<std::size_t, std::size_t> covered_tokens(const std::vector<WordToken>& tokens, const Span& span) {
  auto first = static_cast<std::size_t>(
      std::partition_point(tokens.begin(), tokens.end(),
                           [&](const WordToken& t) { return t.span.end <= span.start; }) -
      tokens.begin());
  auto stop = static_cast<std::size_t>(
      std::partition_point(tokens.begin(), tokens.end(),
                           [&](const WordToken& t) { return t.span.start < span.end; }) -
      tokens.begin());
  return {first, stop};
}

bool window_contains(const std::vector<WordToken>& tokens, std::size_t from, std::size_t to,
                     const std::vector<std::string>& words) {
  if (words.empty() || to < from || to - from < words.size()) return false;
  for (std::size_t i = from; i + words.size() <= to; ++i) {
    bool all = true;
    for (std::size_t k = 0; k < words.size() && all; ++k) all = tokens[i + k].lower == words[k];
    if (all) return true;
  }
  return false;
}

}  // namespace

Extractor::Extractor(std::shared_ptr<const RulePack> pack) : pack_(std::move(pack)) {}

Extractor::Extractor()
    : pack_(std::shared_ptr<const RulePack>(&RulePack::builtin(), [](const RulePack*) {})) {}

double context_weight(const std::vector<WordToken>& tokens, const Span& span, const PiiRule& rule) {
  if (rule.context_terms.empty()) return 0.0;
  auto [first, stop] = covered_tokens(tokens, span);
  const auto w = static_cast<std::size_t>(rule.context_window);
  std::size_t left_from = first >= w ? first - w : 0;
  std::size_t right_to = std::min(tokens.size(), stop + w);
  double sum = 0.0;
  for (const auto& term : rule.context_terms) {
    std::vector<std::string> words;
    for (auto& t : word_tokens(term.term)) words.push_back(t.lower);
    if (window_contains(tokens, left_from, first, words) || window_contains(tokens, stop, right_to, words)) {
      sum += term.weight;
    }
  }
  return sum;
}

Sensitivity score_context(const std::vector<WordToken>& tokens, const Span& span, const PiiRule& rule) {
  double sum = context_weight(tokens, span, rule);
  if (sum > rule.context_threshold) return raise(rule.base_sensitivity);
  if (sum < -rule.context_threshold) return lower(rule.base_sensitivity);
  return rule.base_sensitivity;
}

Sensitivity score_context(std::string_view text, const ExtractionPair& pair, const PiiRule& rule) {
  return score_context(word_tokens(text), pair.span, rule);
}

void sort_pairs(std::vector<ExtractionPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const ExtractionPair& a, const ExtractionPair& b) {
    if (a.span.start != b.span.start) return a.span.start < b.span.start;
    if (a.span.end != b.span.end) return a.span.end > b.span.end;
    return a.pii_type < b.pii_type;
  });
}

std::vector<ExtractionPair> merge_same_type(std::vector<ExtractionPair> pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const ExtractionPair& a, const ExtractionPair& b) {
    if (a.span.length() != b.span.length()) return a.span.length() > b.span.length();
    return a.span.start < b.span.start;
  });
  std::vector<ExtractionPair> kept;
  kept.reserve(pairs.size());
  for (auto& p : pairs) {
    bool clash = std::any_of(kept.begin(), kept.end(), [&](const ExtractionPair& k) {
      return k.pii_type == p.pii_type && k.span.overlaps(p.span);
    });
    if (!clash) kept.push_back(std::move(p));
  }
  sort_pairs(kept);
  return kept;
}

std::vector<ExtractionPair> Extractor::extract(std::string_view text) const {
  Utf8Text utext(text);
  auto tokens = word_tokens(utext);
  std::vector<ExtractionPair> raw;
  for (const auto& rule : pack_->rules()) {
    match_patterns(utext, rule, raw);
    if (rule.names) match_names(utext, tokens, rule, raw);
  }
  auto pairs = merge_same_type(std::move(raw));
  for (auto& p : pairs) {
    if (const auto* rule = pack_->find(p.pii_type)) p.sensitivity = score_context(tokens, p.span, *rule);
  }
  return pairs;
}

std::vector<std::vector<ExtractionPair>> extract_batch_serial(const Extractor& ex,
                                                              std::span<const std::string> texts) {
  std::vector<std::vector<ExtractionPair>> out(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) out[i] = ex.extract(texts[i]);
  return out;
}

std::vector<std::vector<ExtractionPair>> extract_batch_parallel(const Extractor& ex,
                                                                std::span<const std::string> texts) {
  std::vector<std::vector<ExtractionPair>> out(texts.size());
  const auto n = static_cast<long>(texts.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = ex.extract(texts[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace guardrail::pii
