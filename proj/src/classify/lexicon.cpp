#include "guardrail/classify/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "guardrail/core/error.hpp"
#include "guardrail/core/paths.hpp"
#include "guardrail/core/tokenize.hpp"

namespace guardrail::classify {

std::vector<std::string> lexicon_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : word_tokens(text)) out.push_back(std::move(t.lower));
  return out;
}

std::vector<TermSalience> rank_terms(const std::vector<LabeledDoc>& docs) {
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& d : docs) (d.positive ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorCode::DegenerateCorpus,
                fmt::format("need both classes, got {} positive and {} negative", n_pos, n_neg));
  }

  std::vector<std::unordered_map<std::string, std::size_t>> counts(docs.size());
  std::vector<std::size_t> lengths(docs.size(), 0);
  std::map<std::string, std::size_t> df;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto toks = lexicon_tokens(docs[i].text);
    lengths[i] = toks.size();
    for (auto& t : toks) counts[i][t]++;
    for (const auto& [term, c] : counts[i]) df[term]++;
  }

  const double n_docs = static_cast<double>(docs.size());
  std::map<std::string, TermSalience> acc;
  for (const auto& [term, f] : df) {
    acc[term].term = term;
  }
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (lengths[i] == 0) continue;
    for (const auto& [term, c] : counts[i]) {
      double tf = static_cast<double>(c) / static_cast<double>(lengths[i]);
      double idf = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df[term]))) + 1.0;
      auto& s = acc[term];
      (docs[i].positive ? s.mean_positive : s.mean_negative) += tf * idf;
    }
  }
  std::vector<TermSalience> ranked;
  ranked.reserve(acc.size());
  for (auto& [term, s] : acc) {
    s.mean_positive /= static_cast<double>(n_pos);
    s.mean_negative /= static_cast<double>(n_neg);
    ranked.push_back(s);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const TermSalience& a, const TermSalience& b) {
    if (a.margin() != b.margin()) return a.margin() > b.margin();
    return a.term < b.term;
  });
  return ranked;
}

CategoryLexicon build_lexicon(const std::vector<LabeledDoc>& docs, std::string category, int top_n,
                              double threshold) {
  if (top_n < 0) throw Error(ErrorCode::InvalidArgument, "top_n must be >= 0");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0,1)");
  }
  auto ranked = rank_terms(docs);
  CategoryLexicon lex;
  lex.category = std::move(category);
  lex.threshold = threshold;
  for (const auto& s : ranked) {
    if (static_cast<int>(lex.keywords.size()) >= top_n) break;
    if (s.margin() <= 0.0) break;
    lex.keywords.emplace(s.term, s.margin());
  }
  return lex;
}

CategoryLexicon parse_lexicon(std::string_view yaml_text, std::string_view source_name) {
  auto fail = [&](const YAML::Node& node, const std::string& what) -> CategoryLexicon {
    throw Error(ErrorCode::ConfigInvalid,
                fmt::format("{}:{}: {}", source_name, node.Mark().line + 1, what));
  };
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("{}: {}", source_name, e.what()));
  }
  if (!root.IsMap() || !root["category"]) return fail(root, "lexicon needs a category");
  CategoryLexicon lex;
  try {
    lex.category = root["category"].as<std::string>();
    if (root["threshold"]) lex.threshold = root["threshold"].as<double>();
    if (!(lex.threshold > 0.0 && lex.threshold < 1.0)) return fail(root["threshold"], "threshold must lie in (0,1)");
    if (const auto& kw = root["keywords"]) {
      for (const auto& kv : kw) {
        double w = kv.second.as<double>();
        if (!(w > 0.0) || !std::isfinite(w)) return fail(kv.second, "keyword weights must be > 0");
        lex.keywords[ascii_lower(kv.first.as<std::string>())] = w;
      }
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("{}: {}", source_name, e.what()));
  }
  return lex;
}

CategoryLexicon load_lexicon(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::ConfigInvalid, "lexicon not readable: " + path.string());
  }
  return parse_lexicon(text, path.string());
}

std::string dump_lexicon(const CategoryLexicon& lexicon) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "category" << YAML::Value << lexicon.category;
  out << YAML::Key << "threshold" << YAML::Value << fmt::format("{}", lexicon.threshold);
  out << YAML::Key << "keywords" << YAML::Value << YAML::BeginMap;
  for (const auto& [term, w] : lexicon.keywords) out << YAML::Key << term << YAML::Value << fmt::format("{}", w);
  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<LabeledDoc> parse_labeled_tsv(std::string_view content) {
  std::vector<LabeledDoc> docs;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto tab = t.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("line {}: expected <label>\\t<text>", lineno));
    }
    auto label = ascii_lower(trim(t.substr(0, tab)));
    LabeledDoc d;
    d.text = std::string(trim(t.substr(tab + 1)));
    if (label == "positive" || label == "pos" || label == "1") {
      d.positive = true;
    } else if (label == "negative" || label == "neg" || label == "0") {
      d.positive = false;
    } else {
      throw Error(ErrorCode::InvalidArgument, fmt::format("line {}: unknown label '{}'", lineno, label));
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace guardrail::classify
