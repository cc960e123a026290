#include "guardrail/core/tokenize.hpp"

#include <algorithm>
#include <cctype>

namespace guardrail {

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
         cp == 0x85 || cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool is_word_char(char32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
  if (is_space(cp)) return false;
  if (cp >= 0x80 && cp <= 0xBF) return false;      // Latin-1 punctuation and symbols
  if (cp == 0xD7 || cp == 0xF7) return false;      // multiplication, division
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows, box/block
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp == 0xFFFD) return false;
  return true;
}

std::vector<WordToken> word_tokens(const Utf8Text& text) {
  std::vector<WordToken> out;
  std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    if (!is_word_char(text.at(i))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_word_char(text.at(j))) ++j;
    WordToken tok;
    tok.span = Span{i, j};
    tok.surface = std::string(text.slice(tok.span));
    tok.lower = ascii_lower(tok.surface);
    out.push_back(std::move(tok));
    i = j;
  }
  return out;
}

std::vector<WordToken> word_tokens(std::string_view text) { return word_tokens(Utf8Text(text)); }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  return out;
}

std::string ascii_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::toupper(c)) : static_cast<char>(c);
  });
  return out;
}

std::string_view trim(std::string_view s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace guardrail
