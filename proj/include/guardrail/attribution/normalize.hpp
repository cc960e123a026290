#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/core/types.hpp"

namespace guardrail::attribution {

// Query-time rewriting: lowercase, punctuation stripped, whitespace
// collapsed. Each token keeps its scalar span in the original text and a
// 64-bit id (FNV-1a of the normalized form) used for matching.
struct NormToken {
  std::uint64_t id = 0;
  Span span;
};

std::vector<NormToken> normalize(std::string_view text);
std::uint64_t token_id(std::string_view normalized);

// Hash of the k token ids starting at tokens[begin].
std::uint64_t shingle_hash(std::span<const NormToken> tokens, std::size_t begin, std::size_t k);

}  // namespace guardrail::attribution
