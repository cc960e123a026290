#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace guardrail::classify {

inline constexpr double kDefaultThreshold = 0.3;

struct CategoryLexicon {
  std::string category;
  std::map<std::string, double> keywords;  // term -> salience weight (> 0)
  double threshold = kDefaultThreshold;    // tau in (0,1)
};

struct LabeledDoc {
  std::string text;
  bool positive = false;
};

struct TermSalience {
  std::string term;
  double mean_positive = 0.0;
  double mean_negative = 0.0;
  double margin() const { return mean_positive - mean_negative; }
};

// Lowercased word tokens; the shared tokenization of lexicons and classifiers.
std::vector<std::string> lexicon_tokens(std::string_view text);

// TF-IDF per document with tf = count / doc_length and the smoothed
// idf = ln((1 + N) / (1 + df)) + 1. Every corpus term is returned, ordered by
// margin (mean positive minus mean negative TF-IDF) descending, ties broken
// by term ascending. DEGENERATE_CORPUS when either class is missing.
std::vector<TermSalience> rank_terms(const std::vector<LabeledDoc>& docs);

// Top `top_n` ranked terms with a positive margin; the margin is the weight.
CategoryLexicon build_lexicon(const std::vector<LabeledDoc>& docs, std::string category, int top_n,
                              double threshold = kDefaultThreshold);

// YAML: {category: str, threshold: real, keywords: {term: weight, ...}}
CategoryLexicon parse_lexicon(std::string_view yaml_text, std::string_view source_name = "<memory>");
CategoryLexicon load_lexicon(const std::filesystem::path& path);
std::string dump_lexicon(const CategoryLexicon& lexicon);

// Training input: one document per line, "<positive|negative>\t<text>".
std::vector<LabeledDoc> parse_labeled_tsv(std::string_view content);

}  // namespace guardrail::classify
