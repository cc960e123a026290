#include "guardrail/store/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cerrno>
#include <cstring>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "guardrail/core/error.hpp"
#include "guardrail/core/paths.hpp"

namespace guardrail::store {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr std::array<ArtifactKind, 5> kKinds = {ArtifactKind::Corpus, ArtifactKind::Index, ArtifactKind::Policy,
                                                ArtifactKind::Lexicon, ArtifactKind::RulePack};
constexpr std::string_view kManifestFile = "manifest.json";
constexpr std::string_view kLockFile = "manifest.lock";

[[noreturn]] void io_fail(const std::string& what) {
  throw Error(ErrorCode::IoFailure, fmt::format("{}: {}", what, std::strerror(errno)));
}

class FileLock {
 public:
  FileLock(const fs::path& path, bool exclusive) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) io_fail("open " + path.string());
    while (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        io_fail("lock " + path.string());
      }
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

void write_atomic(const fs::path& target, std::string_view bytes) {
  static std::atomic<unsigned> counter{0};
  auto tmp = target.parent_path() /
             fmt::format(".{}.tmp.{}.{}", target.filename().string(), ::getpid(), counter.fetch_add(1));
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("create " + tmp.string());
  const char* p = bytes.data();
  std::size_t left = bytes.size();
  while (left > 0) {
    auto n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      ::unlink(tmp.c_str());
      io_fail("write " + tmp.string());
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    ::unlink(tmp.c_str());
    io_fail("flush " + tmp.string());
  }
  if (::rename(tmp.c_str(), target.c_str()) != 0) {
    ::unlink(tmp.c_str());
    io_fail("rename " + tmp.string());
  }
}

bool valid_name(std::string_view name) {
  return !name.empty() && name.front() != '.' && name.size() <= 200 &&
         std::all_of(name.begin(), name.end(), [](char c) {
           return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.' || c == '-';
         });
}

std::string key_of(ArtifactKind kind, std::string_view name) {
  if (!valid_name(name)) throw Error(ErrorCode::InvalidArgument, fmt::format("bad artifact name '{}'", name));
  return fmt::format("{}/{}", subdir(kind), name);
}

Manifest read_manifest(const fs::path& root) {
  auto path = root / kManifestFile;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoFailure, fmt::format("{}: {}", path.string(), e.what()));
  }
  Manifest m;
  try {
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kManifestVersion) {
      throw Error(ErrorCode::VersionMismatch,
                  fmt::format("{}: format_version {} (supported: {})", path.string(), m.format_version, kManifestVersion));
    }
    for (const auto& [key, entry] : j.at("artifacts").items()) {
      m.artifacts[key] = ManifestEntry{entry.at("sha256").get<std::string>(), entry.at("size").get<std::uint64_t>()};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::IoFailure, fmt::format("{}: {}", path.string(), e.what()));
  }
  return m;
}

void write_manifest(const fs::path& root, const Manifest& m) {
  json artifacts = json::object();
  for (const auto& [key, e] : m.artifacts) artifacts[key] = {{"sha256", e.sha256}, {"size", e.size}};
  json j{{"format_version", m.format_version}, {"artifacts", std::move(artifacts)}};
  write_atomic(root / kManifestFile, j.dump(2) + "\n");
}

void check_entry(const fs::path& root, const std::string& key, const ManifestEntry& e, const std::string* bytes) {
  std::string content;
  if (bytes == nullptr) {
    std::error_code ec;
    if (!fs::is_regular_file(root / key, ec)) {
      throw Error(ErrorCode::ChecksumMismatch, fmt::format("{}: listed in manifest but missing", key));
    }
    content = read_file(root / key);
    bytes = &content;
  }
  if (bytes->size() != e.size || sha256_hex(*bytes) != e.sha256) {
    throw Error(ErrorCode::ChecksumMismatch, fmt::format("{}: content does not match manifest", key));
  }
}

}  // namespace

std::string_view subdir(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Corpus: return "corpus";
    case ArtifactKind::Index: return "indexes";
    case ArtifactKind::Policy: return "policies";
    case ArtifactKind::Lexicon: return "lexicons";
    case ArtifactKind::RulePack: return "rulepacks";
  }
  return "corpus";
}

std::optional<ArtifactKind> parse_artifact_kind(std::string_view s) {
  for (auto k : kKinds) {
    auto dir = subdir(k);
    if (s == dir || (dir.ends_with('s') && s == dir.substr(0, dir.size() - 1))) return k;
  }
  if (s == "policy") return ArtifactKind::Policy;
  if (s == "index") return ArtifactKind::Index;
  return std::nullopt;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoFailure, "sha256 failed");
  }
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

Store Store::open(const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::IoFailure, fmt::format("create {}: {}", root.string(), ec.message()));
  for (auto k : kKinds) {
    fs::create_directories(root / subdir(k), ec);
    if (ec) throw Error(ErrorCode::IoFailure, fmt::format("create {}: {}", (root / subdir(k)).string(), ec.message()));
  }
  Store s(root);
  {
    FileLock lock(root / kLockFile, true);
    if (!fs::exists(root / kManifestFile, ec)) write_manifest(root, Manifest{});
  }
  s.verify();
  return s;
}

fs::path Store::path_of(ArtifactKind kind, std::string_view name) const { return root_ / key_of(kind, name); }

void Store::put(ArtifactKind kind, std::string_view name, std::string_view bytes) {
  auto key = key_of(kind, name);
  FileLock lock(root_ / kLockFile, true);
  auto m = read_manifest(root_);
  write_atomic(root_ / key, bytes);
  m.artifacts[key] = ManifestEntry{sha256_hex(bytes), bytes.size()};
  write_manifest(root_, m);
}

std::string Store::get(ArtifactKind kind, std::string_view name) const {
  auto key = key_of(kind, name);
  FileLock lock(root_ / kLockFile, false);
  auto m = read_manifest(root_);
  auto it = m.artifacts.find(key);
  if (it == m.artifacts.end()) throw Error(ErrorCode::NotFound, fmt::format("no artifact {}", key));
  std::error_code ec;
  if (!fs::is_regular_file(root_ / key, ec)) {
    throw Error(ErrorCode::ChecksumMismatch, fmt::format("{}: listed in manifest but missing", key));
  }
  auto bytes = read_file(root_ / key);
  check_entry(root_, key, it->second, &bytes);
  return bytes;
}

bool Store::contains(ArtifactKind kind, std::string_view name) const {
  auto key = key_of(kind, name);
  return manifest().artifacts.count(key) != 0;
}

std::vector<std::string> Store::list(ArtifactKind kind) const {
  const auto prefix = fmt::format("{}/", subdir(kind));
  std::vector<std::string> out;
  for (const auto& [key, _] : manifest().artifacts) {
    if (key.starts_with(prefix)) out.push_back(key.substr(prefix.size()));
  }
  return out;
}

void Store::remove(ArtifactKind kind, std::string_view name) {
  auto key = key_of(kind, name);
  FileLock lock(root_ / kLockFile, true);
  auto m = read_manifest(root_);
  if (m.artifacts.erase(key) == 0) throw Error(ErrorCode::NotFound, fmt::format("no artifact {}", key));
  write_manifest(root_, m);
  std::error_code ec;
  fs::remove(root_ / key, ec);
}

Manifest Store::manifest() const {
  FileLock lock(root_ / kLockFile, false);
  return read_manifest(root_);
}

void Store::verify() const {
  FileLock lock(root_ / kLockFile, false);
  auto m = read_manifest(root_);
  for (const auto& [key, e] : m.artifacts) check_entry(root_, key, e, nullptr);
}

}  // namespace guardrail::store
