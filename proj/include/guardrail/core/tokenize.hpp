#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "guardrail/core/types.hpp"
#include "guardrail/core/utf8.hpp"

namespace guardrail {

struct WordToken {
  std::string surface;  // original casing
  std::string lower;    // ASCII-lowercased
  Span span;
};

bool is_space(char32_t cp);
// ASCII letters/digits and non-ASCII scalars outside the common punctuation,
// symbol and block-element ranges.
bool is_word_char(char32_t cp);

// Maximal runs of word characters, with scalar spans into `text`.
std::vector<WordToken> word_tokens(const Utf8Text& text);
std::vector<WordToken> word_tokens(std::string_view text);

std::string ascii_lower(std::string_view s);
std::string ascii_upper(std::string_view s);
std::string_view trim(std::string_view s);

}  // namespace guardrail
