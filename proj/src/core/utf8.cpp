#include "guardrail/core/utf8.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "guardrail/core/error.hpp"

namespace guardrail {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one scalar starting at `pos`; returns the number of bytes consumed.
std::size_t decode_one(std::string_view s, std::size_t pos, char32_t& cp) {
  auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  std::size_t len = 0;
  char32_t value = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    value = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    value = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    value = b0 & 0x07;
  } else {
    cp = kReplacement;
    return 1;
  }
  if (pos + len > s.size()) {
    cp = kReplacement;
    return 1;
  }
  for (std::size_t i = 1; i < len; ++i) {
    auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      cp = kReplacement;
      return 1;
    }
    value = (value << 6) | (b & 0x3F);
  }
  cp = value;
  return len;
}

}  // namespace

Utf8Text::Utf8Text(std::string_view text) : text_(text) {
  offsets_.reserve(text.size() + 1);
  scalars_.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp = 0;
    offsets_.push_back(pos);
    pos += decode_one(text, pos, cp);
    scalars_.push_back(cp);
  }
  offsets_.push_back(text.size());
}

std::size_t Utf8Text::scalar_at_byte(std::size_t byte) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), byte);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

std::string_view Utf8Text::slice(const Span& span) const {
  if (span.start >= span.end || span.end > size()) {
    throw Error(ErrorCode::SpanOutOfRange,
                fmt::format("[{}, {}) outside text of {} scalars", span.start, span.end, size()));
  }
  auto b = offsets_[span.start];
  auto e = offsets_[span.end];
  return text_.substr(b, e - b);
}

std::size_t scalar_length(std::string_view text) { return Utf8Text(text).size(); }

std::string slice(std::string_view text, const Span& span) {
  return std::string(Utf8Text(text).slice(span));
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace guardrail
