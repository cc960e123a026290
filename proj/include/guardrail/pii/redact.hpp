#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/pii/categories.hpp"

namespace guardrail::pii {

enum class RedactStyle { MaskType, RedactFull };

std::string_view to_string(RedactStyle s);
std::optional<RedactStyle> parse_redact_style(std::string_view s);

struct Replacement {
  Span span;
  std::string text;
};

// MASK_TYPE -> "[EMAIL_ADDRESS]"; REDACT_FULL -> U+2588 repeated span-length times.
std::string replacement_for(PiiType type, std::size_t span_length, RedactStyle style);

// Applies replacements right to left; bytes outside the spans are untouched.
// OVERLAPPING_SPANS if two spans intersect, SPAN_OUT_OF_RANGE past the end.
std::string apply_replacements(std::string_view text, std::vector<Replacement> replacements);

std::string redact(std::string_view text, const std::vector<ExtractionPair>& pairs, RedactStyle style);

}  // namespace guardrail::pii
