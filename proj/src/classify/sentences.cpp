#include "guardrail/classify/sentences.hpp"

#include <sstream>

#include "guardrail/core/paths.hpp"
#include "guardrail/core/tokenize.hpp"
#include "guardrail/core/utf8.hpp"

namespace guardrail::classify {
namespace {

bool terminal(char32_t cp) { return cp == '.' || cp == '!' || cp == '?'; }

bool closer(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == U'”' || cp == U'’';
}

}  // namespace

SentenceSplitter::SentenceSplitter(std::set<std::string> abbreviations)
    : abbreviations_(std::move(abbreviations)) {}

SentenceSplitter SentenceSplitter::load_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::set<std::string> abbrevs;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    abbrevs.insert(ascii_lower(t));
  }
  return SentenceSplitter(std::move(abbrevs));
}

const SentenceSplitter& SentenceSplitter::builtin() {
  static const SentenceSplitter kSplitter = load_file(data_dir() / "lexicons" / "abbreviations.txt");
  return kSplitter;
}

std::vector<Span> SentenceSplitter::split(std::string_view raw) const {
  Utf8Text text(raw);
  const std::size_t n = text.size();
  std::vector<Span> out;

  auto push = [&](std::size_t b, std::size_t e) {
    while (b < e && is_space(text.at(b))) ++b;
    while (e > b && is_space(text.at(e - 1))) --e;
    if (b < e) out.push_back(Span{b, e});
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!terminal(text.at(i))) {
      ++i;
      continue;
    }
    std::size_t run_begin = i;
    std::size_t j = i;
    while (j < n && terminal(text.at(j))) ++j;
    std::size_t run_end = j;
    while (j < n && closer(text.at(j))) ++j;
    if (j < n && !is_space(text.at(j))) {
      i = j;
      continue;
    }
    if (run_end - run_begin == 1 && text.at(run_begin) == '.') {
      // Word immediately before the dot: back up to whitespace.
      std::size_t w = run_begin;
      while (w > start && !is_space(text.at(w - 1))) --w;
      std::string word;
      for (std::size_t k = w; k < run_begin; ++k) {
        auto cp = text.at(k);
        if (cp == '(' || cp == '"' || cp == '\'' || cp == '[') continue;
        append_utf8(word, cp);
      }
      word = ascii_lower(word);
      bool initial = word.size() == 1 && word[0] >= 'a' && word[0] <= 'z';
      if (initial || abbreviations_.count(word) != 0) {
        i = j;
        continue;
      }
    }
    push(start, j);
    start = j;
    i = j;
  }
  push(start, n);
  return out;
}

std::vector<std::size_t> sentences_touching(const std::vector<Span>& sentences, const Span& span) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (sentences[i].overlaps(span)) out.push_back(i);
  }
  return out;
}

}  // namespace guardrail::classify
