#include "guardrail/attribution/normalize.hpp"

#include "guardrail/core/tokenize.hpp"

namespace guardrail::attribution {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFF;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

std::uint64_t token_id(std::string_view normalized) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : normalized) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::vector<NormToken> normalize(std::string_view text) {
  std::vector<NormToken> out;
  for (const auto& t : word_tokens(text)) out.push_back({token_id(t.lower), t.span});
  return out;
}

std::uint64_t shingle_hash(std::span<const NormToken> tokens, std::size_t begin, std::size_t k) {
  std::uint64_t h = kFnvOffset;
  for (std::size_t i = begin; i < begin + k; ++i) h = fnv_mix(h, tokens[i].id);
  return h;
}

}  // namespace guardrail::attribution
