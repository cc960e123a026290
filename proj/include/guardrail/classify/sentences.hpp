#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/core/types.hpp"

namespace guardrail::classify {

/// Rule-based sentence boundaries: a run of '.', '!' or '?' (plus closing
/// quotes/brackets) followed by whitespace or end of text. A lone '.' after
/// a guarded abbreviation or a single-letter initial is not a boundary.
class SentenceSplitter {
 public:
  SentenceSplitter() = default;
  explicit SentenceSplitter(std::set<std::string> abbreviations);

  // One lowercase abbreviation per line, without the final dot; '#' comments.
  static SentenceSplitter load_file(const std::filesystem::path& path);
  static const SentenceSplitter& builtin();

  // Trimmed, non-empty, ordered, disjoint sentence spans.
  std::vector<Span> split(std::string_view text) const;

 private:
  std::set<std::string> abbreviations_;
};

// Index of every sentence a span overlaps.
std::vector<std::size_t> sentences_touching(const std::vector<Span>& sentences, const Span& span);

}  // namespace guardrail::classify
