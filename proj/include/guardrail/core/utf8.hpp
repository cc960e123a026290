#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/core/types.hpp"

namespace guardrail {

/// Scalar-value view over a UTF-8 string. Malformed bytes decode as U+FFFD
/// and count as one scalar each, so offsets are always well defined.
class Utf8Text {
 public:
  explicit Utf8Text(std::string_view text);

  std::string_view text() const { return text_; }
  std::size_t size() const { return offsets_.size() - 1; }

  std::size_t byte_offset(std::size_t scalar_index) const { return offsets_.at(scalar_index); }
  // Index of the scalar that contains `byte`; byte == text().size() maps to size().
  std::size_t scalar_at_byte(std::size_t byte) const;
  char32_t at(std::size_t scalar_index) const { return scalars_.at(scalar_index); }

  std::string_view slice(const Span& span) const;

 private:
  std::string_view text_;
  std::vector<std::size_t> offsets_;
  std::vector<char32_t> scalars_;
};

std::size_t scalar_length(std::string_view text);

// SPAN_OUT_OF_RANGE when the span is empty, inverted or past the end.
std::string slice(std::string_view text, const Span& span);

void append_utf8(std::string& out, char32_t cp);

}  // namespace guardrail
