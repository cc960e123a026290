#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guardrail::store {

/// On-disk layout:
///   <root>/manifest.json   {"format_version": 1,
///                           "artifacts": {"<subdir>/<name>": {"sha256": hex, "size": n}}}
///   <root>/manifest.lock   advisory lock: exclusive for writers, shared for readers
///   <root>/corpus/  indexes/  policies/  lexicons/  rulepacks/
/// Artifacts are replaced by writing a temp file in the same directory and
/// renaming it over the old one, then rewriting the manifest the same way.
enum class ArtifactKind { Corpus, Index, Policy, Lexicon, RulePack };

std::string_view subdir(ArtifactKind k);  // "corpus", "indexes", ...
std::optional<ArtifactKind> parse_artifact_kind(std::string_view s);  // accepts the subdir or singular name

inline constexpr int kManifestVersion = 1;

struct ManifestEntry {
  std::string sha256;
  std::uint64_t size = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  int format_version = kManifestVersion;
  std::map<std::string, ManifestEntry> artifacts;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

std::string sha256_hex(std::string_view bytes);

class Store {
 public:
  /// Creates the layout and an empty manifest on first open, otherwise
  /// checks the manifest version (VERSION_MISMATCH) and every listed
  /// artifact's size and digest (CHECKSUM_MISMATCH). IO_FAILURE otherwise.
  static Store open(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path_of(ArtifactKind kind, std::string_view name) const;

  // Names match [A-Za-z0-9_.-]+ without a leading dot (INVALID_ARGUMENT).
  void put(ArtifactKind kind, std::string_view name, std::string_view bytes);
  // NOT_FOUND if unlisted; CHECKSUM_MISMATCH if the bytes were altered.
  std::string get(ArtifactKind kind, std::string_view name) const;
  bool contains(ArtifactKind kind, std::string_view name) const;
  std::vector<std::string> list(ArtifactKind kind) const;
  void remove(ArtifactKind kind, std::string_view name);

  Manifest manifest() const;
  void verify() const;

 private:
  explicit Store(std::filesystem::path root) : root_(std::move(root)) {}
  std::filesystem::path root_;
};

}  // namespace guardrail::store
