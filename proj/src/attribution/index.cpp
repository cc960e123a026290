#include "guardrail/attribution/index.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "guardrail/core/error.hpp"
#include "guardrail/core/paths.hpp"

namespace guardrail::attribution {
namespace {

constexpr char kMagic[4] = {'G', 'R', 'I', 'X'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void put(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return v;
  }

  std::string bytes(std::size_t n) {
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::IoFailure, "truncated index file");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::uint64_t> ids_of(const std::vector<NormToken>& tokens) {
  std::vector<std::uint64_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.id);
  return out;
}

std::vector<std::uint64_t> shingles_of(const IndexedDoc& doc, int k) {
  std::vector<std::uint64_t> out;
  const auto kk = static_cast<std::size_t>(k);
  if (doc.tokens.size() < kk) return out;
  out.reserve(doc.tokens.size() - kk + 1);
  for (std::size_t i = 0; i + kk <= doc.tokens.size(); ++i) out.push_back(shingle_hash(doc.tokens, i, kk));
  return out;
}

}  // namespace

CorpusIndex CorpusIndex::prepare(std::vector<CorpusEntry> docs, int k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "shingle width k must be >= 2");
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "no documents to index");
  if (docs.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "too many documents");
  }
  std::set<std::string> seen;
  for (const auto& [id, text] : docs) {
    if (!seen.insert(id).second) throw Error(ErrorCode::DuplicateDocId, id);
  }
  CorpusIndex index;
  index.k_ = k;
  index.docs_.reserve(docs.size());
  for (auto& [id, text] : docs) index.docs_.push_back({std::move(id), std::move(text), {}, {}});
  return index;
}

void CorpusIndex::add_postings(std::uint32_t doc, const std::vector<std::uint64_t>& hashes) {
  for (std::size_t i = 0; i < hashes.size(); ++i) {
    postings_[hashes[i]].push_back({doc, static_cast<std::uint32_t>(i)});
  }
  shingle_count_ += hashes.size();
}

CorpusIndex CorpusIndex::build(std::vector<CorpusEntry> docs, int k) {
  auto index = prepare(std::move(docs), k);
  for (std::size_t d = 0; d < index.docs_.size(); ++d) {
    auto& doc = index.docs_[d];
    doc.tokens = normalize(doc.text);
    doc.token_ids = ids_of(doc.tokens);
    index.add_postings(static_cast<std::uint32_t>(d), shingles_of(doc, k));
  }
  return index;
}

CorpusIndex CorpusIndex::build_parallel(std::vector<CorpusEntry> docs, int k) {
  auto index = prepare(std::move(docs), k);
  std::vector<std::vector<std::uint64_t>> hashes(index.docs_.size());
  const auto n = static_cast<long>(index.docs_.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long d = 0; d < n; ++d) {
    auto& doc = index.docs_[static_cast<std::size_t>(d)];
    doc.tokens = normalize(doc.text);
    doc.token_ids = ids_of(doc.tokens);
    hashes[static_cast<std::size_t>(d)] = shingles_of(doc, k);
  }
  // Posting insertion stays in document order so both builds are identical.
  for (std::size_t d = 0; d < hashes.size(); ++d) index.add_postings(static_cast<std::uint32_t>(d), hashes[d]);
  return index;
}

const IndexedDoc* CorpusIndex::find_doc(std::string_view doc_id) const {
  for (const auto& d : docs_) {
    if (d.doc_id == doc_id) return &d;
  }
  return nullptr;
}

std::span<const Posting> CorpusIndex::postings(std::uint64_t shingle) const {
  auto it = postings_.find(shingle);
  if (it == postings_.end()) return {};
  return it->second;
}

std::string CorpusIndex::serialize() const {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(k_));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(docs_.size()));
  for (const auto& d : docs_) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(d.doc_id.size()));
    out += d.doc_id;
    put<std::uint64_t>(out, d.text.size());
    out += d.text;
  }
  std::vector<std::uint64_t> keys;
  keys.reserve(postings_.size());
  for (const auto& [h, _] : postings_) keys.push_back(h);
  std::sort(keys.begin(), keys.end());
  put<std::uint64_t>(out, keys.size());
  for (auto h : keys) {
    const auto& list = postings_.at(h);
    put<std::uint64_t>(out, h);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(list.size()));
    for (const auto& p : list) {
      put<std::uint32_t>(out, p.doc);
      put<std::uint32_t>(out, p.offset);
    }
  }
  return out;
}

CorpusIndex CorpusIndex::deserialize(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::IoFailure, "not an index file (bad magic)");
  }
  Reader r(bytes.substr(4));
  auto version = r.get<std::uint32_t>();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, fmt::format("index format {} (supported: {})", version, kFormatVersion));
  }
  CorpusIndex index;
  index.k_ = static_cast<int>(r.get<std::uint32_t>());
  auto doc_count = r.get<std::uint32_t>();
  index.docs_.reserve(doc_count);
  for (std::uint32_t i = 0; i < doc_count; ++i) {
    IndexedDoc d;
    d.doc_id = r.bytes(r.get<std::uint32_t>());
    d.text = r.bytes(static_cast<std::size_t>(r.get<std::uint64_t>()));
    d.tokens = normalize(d.text);
    d.token_ids = ids_of(d.tokens);
    index.docs_.push_back(std::move(d));
  }
  auto key_count = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < key_count; ++i) {
    auto h = r.get<std::uint64_t>();
    auto n = r.get<std::uint32_t>();
    auto& list = index.postings_[h];
    list.reserve(n);
    for (std::uint32_t j = 0; j < n; ++j) {
      Posting p;
      p.doc = r.get<std::uint32_t>();
      p.offset = r.get<std::uint32_t>();
      if (p.doc >= doc_count || p.offset >= index.docs_[p.doc].tokens.size()) {
        throw Error(ErrorCode::IoFailure, "index posting points outside its document");
      }
      list.push_back(p);
    }
    index.shingle_count_ += n;
  }
  if (!r.done()) throw Error(ErrorCode::IoFailure, "trailing bytes after index");
  return index;
}

bool operator==(const CorpusIndex& a, const CorpusIndex& b) {
  if (a.k_ != b.k_ || a.docs_.size() != b.docs_.size() || a.postings_ != b.postings_) return false;
  for (std::size_t i = 0; i < a.docs_.size(); ++i) {
    if (a.docs_[i].doc_id != b.docs_[i].doc_id || a.docs_[i].text != b.docs_[i].text) return false;
  }
  return true;
}

std::vector<CorpusEntry> load_corpus_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::IoFailure, "corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  out.reserve(files.size());
  for (const auto& f : files) out.emplace_back(f.filename().string(), read_file(f));
  return out;
}

std::vector<CorpusEntry> load_corpus_records(const std::filesystem::path& file) {
  std::istringstream in(read_file(file));
  std::vector<CorpusEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.emplace_back(j.at("doc_id").get<std::string>(), j.at("text").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::IoFailure, fmt::format("{}:{}: {}", file.string(), lineno, e.what()));
    }
  }
  return out;
}

}  // namespace guardrail::attribution
