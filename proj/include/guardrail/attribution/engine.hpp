#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/attribution/index.hpp"
#include "guardrail/core/types.hpp"

namespace guardrail::attribution {

enum class ExecMode { Serial, Parallel };
enum class MatchKind { Verbatim, SemiVerbatim };

std::string_view to_string(MatchKind k);

struct AttributionParams {
  int chunk_len = 12;           // query window, words
  int overlap = 6;              // words shared by consecutive windows
  int max_candidates = 20;      // stage-1 documents kept per window
  double min_similarity = 0.8;  // reporting threshold
  int min_match_tokens = 0;     // shortest reportable alignment; 0 means k
};

struct AttributionMatch {
  Span query_span;
  std::string doc_id;
  Span doc_span;
  double similarity = 0.0;
  MatchKind match_kind = MatchKind::SemiVerbatim;

  friend bool operator==(const AttributionMatch&, const AttributionMatch&) = default;
};

// Instrumentation of the narrowing stage.
struct AttributionTrace {
  std::size_t chunks = 0;
  std::set<std::uint32_t> candidate_docs;  // union over all windows
  std::size_t align_tasks = 0;
};

/// Two-stage attribution of `query` against `index`.
///
/// Stage 1 slides windows of chunk_len words (step chunk_len - overlap, the
/// last window flush with the end of the query) and ranks documents by the
/// number of window shingles found in them, keeping the top max_candidates.
/// Stage 2 runs a token-level local alignment of each window against the
/// densest hit region of each candidate, merges alignments to the same
/// document that overlap in the query along a consistent diagonal, and
/// re-aligns each merged region. similarity = matches / max(aligned query
/// tokens, aligned document tokens); VERBATIM iff similarity == 1.
///
/// INVALID_ARGUMENT unless chunk_len >= k and 0 <= overlap < chunk_len.
std::vector<AttributionMatch> attribute(const CorpusIndex& index, std::string_view query,
                                        const AttributionParams& params = {},
                                        AttributionTrace* trace = nullptr,
                                        ExecMode mode = ExecMode::Parallel);

}  // namespace guardrail::attribution
