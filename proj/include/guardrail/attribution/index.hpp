#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "guardrail/attribution/normalize.hpp"

namespace guardrail::attribution {

struct Posting {
  std::uint32_t doc = 0;     // index into CorpusIndex::docs()
  std::uint32_t offset = 0;  // word offset of the shingle's first token

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct IndexedDoc {
  std::string doc_id;
  std::string text;
  std::vector<NormToken> tokens;  // derived from text
  std::vector<std::uint64_t> token_ids;
};

using CorpusEntry = std::pair<std::string, std::string>;  // (doc_id, text)

inline constexpr int kDefaultShingleWidth = 5;

/// Inverted index from hashed k-word shingles to (doc, word offset)
/// postings. Immutable once built.
///
/// Binary layout (little-endian), format version 1:
///   char[4] "GRIX" | u32 version | u32 k | u32 doc_count
///   doc_count x { u32 id_len | id bytes | u64 text_len | text bytes }
///   u64 key_count
///   key_count x { u64 shingle_hash | u32 n | n x { u32 doc | u32 offset } }
/// Keys are written in ascending hash order; postings in (doc, offset) order.
class CorpusIndex {
 public:
  // DUPLICATE_DOC_ID, EMPTY_CORPUS, INVALID_ARGUMENT when k < 2.
  static CorpusIndex build(std::vector<CorpusEntry> docs, int k = kDefaultShingleWidth);
  // Same index; shingle hashing runs per document under OpenMP.
  static CorpusIndex build_parallel(std::vector<CorpusEntry> docs, int k = kDefaultShingleWidth);

  int k() const { return k_; }
  const std::vector<IndexedDoc>& docs() const { return docs_; }
  const IndexedDoc* find_doc(std::string_view doc_id) const;
  std::span<const Posting> postings(std::uint64_t shingle) const;
  std::size_t shingle_count() const { return shingle_count_; }
  std::size_t distinct_shingles() const { return postings_.size(); }

  std::string serialize() const;
  static CorpusIndex deserialize(std::string_view bytes);

  friend bool operator==(const CorpusIndex& a, const CorpusIndex& b);

 private:
  static CorpusIndex prepare(std::vector<CorpusEntry> docs, int k);
  void add_postings(std::uint32_t doc, const std::vector<std::uint64_t>& hashes);

  int k_ = kDefaultShingleWidth;
  std::vector<IndexedDoc> docs_;
  std::unordered_map<std::uint64_t, std::vector<Posting>> postings_;
  std::size_t shingle_count_ = 0;
};

// Every regular file in `dir` (non-recursive, sorted by name); doc_id = file name.
std::vector<CorpusEntry> load_corpus_dir(const std::filesystem::path& dir);
// One JSON object per line: {"doc_id": str, "text": str}.
std::vector<CorpusEntry> load_corpus_records(const std::filesystem::path& file);

}  // namespace guardrail::attribution
