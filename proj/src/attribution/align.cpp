#include "guardrail/attribution/align.hpp"

#include <algorithm>

namespace guardrail::attribution {
namespace {

Alignment align_one(const AlignTask& t, std::span<const std::uint64_t> query) {
  auto a = local_align(query.subspan(t.q_begin, t.q_end - t.q_begin),
                       t.doc_tokens.subspan(t.d_begin, t.d_end - t.d_begin));
  a.q_begin += t.q_begin;
  a.q_end += t.q_begin;
  a.d_begin += t.d_begin;
  a.d_end += t.d_begin;
  return a;
}

}  // namespace

Alignment local_align(std::span<const std::uint64_t> query, std::span<const std::uint64_t> doc) {
  const std::size_t m = query.size(), n = doc.size();
  Alignment best;
  if (m == 0 || n == 0) return best;
  const std::size_t w = n + 1;
  std::vector<int> h((m + 1) * w, 0);
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      int diag = h[(i - 1) * w + (j - 1)] + (query[i - 1] == doc[j - 1] ? kMatchScore : kMismatchScore);
      int up = h[(i - 1) * w + j] + kGapScore;
      int left = h[i * w + (j - 1)] + kGapScore;
      int v = std::max({0, diag, up, left});
      h[i * w + j] = v;
      if (v > best.score) {
        best.score = v;
        bi = i;
        bj = j;
      }
    }
  }
  if (best.score == 0) return best;

  std::size_t i = bi, j = bj, matches = 0;
  while (i > 0 && j > 0 && h[i * w + j] > 0) {
    int v = h[i * w + j];
    bool same = query[i - 1] == doc[j - 1];
    if (v == h[(i - 1) * w + (j - 1)] + (same ? kMatchScore : kMismatchScore)) {
      if (same) ++matches;
      --i;
      --j;
    } else if (v == h[(i - 1) * w + j] + kGapScore) {
      --i;
    } else {
      --j;
    }
  }
  best.q_begin = i;
  best.q_end = bi;
  best.d_begin = j;
  best.d_end = bj;
  best.matches = matches;
  return best;
}

std::vector<Alignment> align_tasks_serial(std::span<const AlignTask> tasks, std::span<const std::uint64_t> query) {
  std::vector<Alignment> out(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = align_one(tasks[i], query);
  return out;
}

std::vector<Alignment> align_tasks_parallel(std::span<const AlignTask> tasks, std::span<const std::uint64_t> query) {
  std::vector<Alignment> out(tasks.size());
  const auto n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 2)
  for (long i = 0; i < n; ++i) {
    auto idx = static_cast<std::size_t>(i);
    out[idx] = align_one(tasks[idx], query);
  }
  return out;
}

}  // namespace guardrail::attribution
