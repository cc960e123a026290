#include "guardrail/pii/redact.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "guardrail/core/error.hpp"
#include "guardrail/core/tokenize.hpp"
#include "guardrail/core/utf8.hpp"

namespace guardrail::pii {

std::string_view to_string(RedactStyle s) {
  return s == RedactStyle::MaskType ? "MASK_TYPE" : "REDACT_FULL";
}

std::optional<RedactStyle> parse_redact_style(std::string_view s) {
  auto u = ascii_upper(s);
  if (u == "MASK_TYPE") return RedactStyle::MaskType;
  if (u == "REDACT_FULL") return RedactStyle::RedactFull;
  return std::nullopt;
}

std::string replacement_for(PiiType type, std::size_t span_length, RedactStyle style) {
  if (style == RedactStyle::MaskType) return placeholder(type);
  std::string out;
  out.reserve(span_length * 3);
  for (std::size_t i = 0; i < span_length; ++i) append_utf8(out, U'█');
  return out;
}

std::string apply_replacements(std::string_view text, std::vector<Replacement> replacements) {
  Utf8Text utext(text);
  std::sort(replacements.begin(), replacements.end(),
            [](const Replacement& a, const Replacement& b) { return a.span < b.span; });
  for (std::size_t i = 0; i < replacements.size(); ++i) {
    const auto& s = replacements[i].span;
    if (s.start >= s.end || s.end > utext.size()) {
      throw Error(ErrorCode::SpanOutOfRange,
                  fmt::format("[{}, {}) outside text of {} scalars", s.start, s.end, utext.size()));
    }
    if (i > 0 && replacements[i - 1].span.overlaps(s)) {
      throw Error(ErrorCode::OverlappingSpans,
                  fmt::format("[{}, {}) overlaps [{}, {})", replacements[i - 1].span.start,
                              replacements[i - 1].span.end, s.start, s.end));
    }
  }
  std::string out(text);
  for (auto it = replacements.rbegin(); it != replacements.rend(); ++it) {
    auto b = utext.byte_offset(it->span.start);
    auto e = utext.byte_offset(it->span.end);
    out.replace(b, e - b, it->text);
  }
  return out;
}

std::string redact(std::string_view text, const std::vector<ExtractionPair>& pairs, RedactStyle style) {
  std::vector<Replacement> reps;
  reps.reserve(pairs.size());
  for (const auto& p : pairs) reps.push_back({p.span, replacement_for(p.pii_type, p.span.length(), style)});
  return apply_replacements(text, std::move(reps));
}

}  // namespace guardrail::pii
