#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace guardrail::attribution {

// Token-level Smith-Waterman scoring.
inline constexpr int kMatchScore = 2;
inline constexpr int kMismatchScore = -1;
inline constexpr int kGapScore = -1;

struct Alignment {
  std::size_t q_begin = 0, q_end = 0;  // aligned query token range
  std::size_t d_begin = 0, d_end = 0;  // aligned document token range
  std::size_t matches = 0;             // identical token pairs on the path
  int score = 0;

  bool empty() const { return q_end == q_begin; }
  friend bool operator==(const Alignment&, const Alignment&) = default;
};

// Best local alignment of `query` against `doc`, offsets relative to the
// spans. The first maximal cell in row-major order wins; traceback prefers
// diagonal, then query gap, then document gap.
Alignment local_align(std::span<const std::uint64_t> query, std::span<const std::uint64_t> doc);

struct AlignTask {
  std::uint32_t doc = 0;
  std::span<const std::uint64_t> doc_tokens;  // whole document
  std::size_t q_begin = 0, q_end = 0;
  std::size_t d_begin = 0, d_end = 0;
};

// Aligns every task; offsets in the result are absolute (query / document
// token positions). The parallel kernel must equal the serial one.
std::vector<Alignment> align_tasks_serial(std::span<const AlignTask> tasks, std::span<const std::uint64_t> query);
std::vector<Alignment> align_tasks_parallel(std::span<const AlignTask> tasks, std::span<const std::uint64_t> query);

}  // namespace guardrail::attribution
