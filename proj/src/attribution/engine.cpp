#include "guardrail/attribution/engine.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "guardrail/attribution/align.hpp"
#include "guardrail/core/error.hpp"

namespace guardrail::attribution {
namespace {

struct Window {
  std::size_t begin = 0, end = 0;
};

std::vector<Window> windows(std::size_t n, std::size_t chunk_len, std::size_t step) {
  std::vector<Window> out;
  if (n <= chunk_len) {
    out.push_back({0, n});
    return out;
  }
  for (std::size_t s = 0;; s += step) {
    if (s + chunk_len >= n) {
      Window last{n - chunk_len, n};
      if (out.empty() || out.back().begin != last.begin) out.push_back(last);
      break;
    }
    out.push_back({s, s + chunk_len});
  }
  return out;
}

// Offsets range [lo, hi] holding the most hits within a span of `width` words.
std::pair<std::uint32_t, std::uint32_t> densest(std::vector<std::uint32_t> offsets, std::uint32_t width) {
  std::sort(offsets.begin(), offsets.end());
  std::size_t best_l = 0, best_r = 0, l = 0;
  for (std::size_t r = 0; r < offsets.size(); ++r) {
    while (offsets[r] - offsets[l] > width) ++l;
    if (r - l > best_r - best_l) {
      best_l = l;
      best_r = r;
    }
  }
  return {offsets[best_l], offsets[best_r]};
}

std::vector<Alignment> run(const std::vector<AlignTask>& tasks, std::span<const std::uint64_t> query, ExecMode mode) {
  return mode == ExecMode::Parallel ? align_tasks_parallel(tasks, query) : align_tasks_serial(tasks, query);
}

long long diagonal(const Alignment& a) {
  return static_cast<long long>(a.d_begin) - static_cast<long long>(a.q_begin);
}

}  // namespace

std::string_view to_string(MatchKind k) { return k == MatchKind::Verbatim ? "VERBATIM" : "SEMI_VERBATIM"; }

std::vector<AttributionMatch> attribute(const CorpusIndex& index, std::string_view query,
                                        const AttributionParams& params, AttributionTrace* trace, ExecMode mode) {
  const int k = index.k();
  if (params.chunk_len < k || params.overlap < 0 || params.overlap >= params.chunk_len) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("need chunk_len >= k ({}) and 0 <= overlap < chunk_len, got {} / {}", k,
                            params.chunk_len, params.overlap));
  }
  if (params.max_candidates <= 0 || !(params.min_similarity > 0.0 && params.min_similarity <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "max_candidates must be > 0 and min_similarity in (0,1]");
  }
  const auto kk = static_cast<std::size_t>(k);
  const auto chunk_len = static_cast<std::size_t>(params.chunk_len);
  const std::size_t min_len = params.min_match_tokens > 0 ? static_cast<std::size_t>(params.min_match_tokens) : kk;

  const auto q_tokens = normalize(query);
  std::vector<std::uint64_t> q_ids;
  q_ids.reserve(q_tokens.size());
  for (const auto& t : q_tokens) q_ids.push_back(t.id);
  if (q_tokens.size() < kk) return {};

  std::vector<std::uint64_t> q_shingles(q_tokens.size() - kk + 1);
  for (std::size_t i = 0; i < q_shingles.size(); ++i) q_shingles[i] = shingle_hash(q_tokens, i, kk);

  // Stage 1: narrowing.
  std::vector<AlignTask> tasks;
  auto wins = windows(q_tokens.size(), chunk_len, chunk_len - static_cast<std::size_t>(params.overlap));
  if (trace != nullptr) trace->chunks = wins.size();
  for (const auto& w : wins) {
    std::map<std::uint32_t, std::vector<std::uint32_t>> hit_offsets;
    std::map<std::uint32_t, std::size_t> hit_count;
    for (std::size_t i = w.begin; i + kk <= w.end; ++i) {
      std::uint32_t last_doc = UINT32_MAX;
      for (const auto& p : index.postings(q_shingles[i])) {
        hit_offsets[p.doc].push_back(p.offset);
        if (p.doc != last_doc) hit_count[p.doc]++;  // postings are grouped by doc
        last_doc = p.doc;
      }
    }
    std::vector<std::pair<std::size_t, std::uint32_t>> ranked;
    for (const auto& [doc, count] : hit_count) ranked.emplace_back(count, doc);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (ranked.size() > static_cast<std::size_t>(params.max_candidates)) {
      ranked.resize(static_cast<std::size_t>(params.max_candidates));
    }
    for (const auto& [count, doc] : ranked) {
      const auto& d = index.docs()[doc];
      auto [lo, hi] = densest(hit_offsets[doc], static_cast<std::uint32_t>(2 * chunk_len));
      AlignTask t;
      t.doc = doc;
      t.doc_tokens = d.token_ids;
      t.q_begin = w.begin;
      t.q_end = w.end;
      t.d_begin = lo > chunk_len ? lo - chunk_len : 0;
      t.d_end = std::min(d.token_ids.size(), static_cast<std::size_t>(hi) + kk + chunk_len);
      tasks.push_back(t);
      if (trace != nullptr) trace->candidate_docs.insert(doc);
    }
  }

  // Stage 2: fine alignment per (window, candidate).
  auto aligned = run(tasks, q_ids, mode);
  std::vector<std::pair<std::uint32_t, Alignment>> pieces;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (aligned[i].matches >= kk) pieces.emplace_back(tasks[i].doc, aligned[i]);
  }
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.q_begin != b.second.q_begin) return a.second.q_begin < b.second.q_begin;
    return a.second.d_begin < b.second.d_begin;
  });

  // Merge pieces of the same reuse, then re-align each merged region.
  std::vector<AlignTask> merged;
  for (const auto& [doc, a] : pieces) {
    if (!merged.empty()) {
      auto& m = merged.back();
      long long m_diag = static_cast<long long>(m.d_begin) - static_cast<long long>(m.q_begin);
      if (m.doc == doc && a.q_begin <= m.q_end &&
          std::llabs(diagonal(a) - m_diag) <= static_cast<long long>(chunk_len)) {
        m.q_end = std::max(m.q_end, a.q_end);
        m.d_begin = std::min(m.d_begin, a.d_begin);
        m.d_end = std::max(m.d_end, a.d_end);
        continue;
      }
    }
    AlignTask t;
    t.doc = doc;
    t.doc_tokens = index.docs()[doc].token_ids;
    t.q_begin = a.q_begin;
    t.q_end = a.q_end;
    t.d_begin = a.d_begin;
    t.d_end = a.d_end;
    merged.push_back(t);
  }
  // Widen both sides before re-aligning: a reused tail shorter than k after
  // the last substitution has no shingle hits, so no window piece covers it.
  for (auto& t : merged) {
    t.q_begin = t.q_begin > chunk_len ? t.q_begin - chunk_len : 0;
    t.q_end = std::min(q_ids.size(), t.q_end + chunk_len);
    t.d_begin = t.d_begin > chunk_len ? t.d_begin - chunk_len : 0;
    t.d_end = std::min(t.doc_tokens.size(), t.d_end + chunk_len);
  }
  if (trace != nullptr) trace->align_tasks = tasks.size() + merged.size();
  auto final_alignments = run(merged, q_ids, mode);

  std::vector<AttributionMatch> out;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const auto& a = final_alignments[i];
    const std::size_t q_len = a.q_end - a.q_begin;
    const std::size_t d_len = a.d_end - a.d_begin;
    if (a.empty() || q_len < min_len) continue;
    double sim = static_cast<double>(a.matches) / static_cast<double>(std::max(q_len, d_len));
    if (sim < params.min_similarity) continue;
    const auto& doc = index.docs()[merged[i].doc];
    AttributionMatch m;
    m.query_span = Span{q_tokens[a.q_begin].span.start, q_tokens[a.q_end - 1].span.end};
    m.doc_id = doc.doc_id;
    m.doc_span = Span{doc.tokens[a.d_begin].span.start, doc.tokens[a.d_end - 1].span.end};
    m.similarity = sim;
    m.match_kind = a.matches == q_len && q_len == d_len ? MatchKind::Verbatim : MatchKind::SemiVerbatim;
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const AttributionMatch& a, const AttributionMatch& b) {
    if (a.query_span.start != b.query_span.start) return a.query_span.start < b.query_span.start;
    return a.doc_id < b.doc_id;
  });
  return out;
}

}  // namespace guardrail::attribution
