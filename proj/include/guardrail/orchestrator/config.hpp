#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/attribution/engine.hpp"
#include "guardrail/detect/detector.hpp"

namespace guardrail::orchestrator {

/// One entry of the `detectors` list. `type` selects the built-in kind:
///   pii                 rulepack: <file>            (default: shipped pack)
///   sentence_lexicon    lexicon: <file>             per-sentence scoring
///   keyword_classifier  lexicon: <file>             whole-text scoring
///   attribution         corpus: <dir | .jsonl> or index: <file>, k, chunk_len,
///                       overlap, max_candidates, min_similarity
///   remote              endpoint: <url>, kind, categories
struct DetectorConfig {
  std::string id;
  std::string type;
  int timeout_ms = detect::kDefaultTimeoutMs;
  std::optional<detect::FailMode> fail_mode;
  std::vector<Direction> directions;

  std::filesystem::path rulepack;
  std::filesystem::path lexicon;
  std::filesystem::path corpus;
  std::filesystem::path index;
  int k = attribution::kDefaultShingleWidth;
  attribution::AttributionParams attribution;
  std::string endpoint;
  detect::DetectorKind kind = detect::DetectorKind::Classification;
  std::vector<std::string> categories;
};

// Pool sizes; the defaults mirror a single instance serving with 40
// request threads and 100 detector threads.
struct WorkerConfig {
  int orchestrator_threads = 40;
  int detector_threads = 100;
};

struct ServiceConfig {
  std::string listen = "127.0.0.1:8080";
  std::filesystem::path store;  // empty: no data store
  WorkerConfig workers;
  std::filesystem::path policies_dir;
  std::filesystem::path jurisdictions_dir;
  std::vector<std::string> default_policies;
  std::vector<DetectorConfig> detectors;
};

inline constexpr std::string_view kListenEnv = "GUARDRAIL_LISTEN";
inline constexpr std::string_view kConfigEnv = "GUARDRAIL_CONFIG";

/// Relative paths resolve against `base_dir` (the config file's directory).
/// CONFIG_INVALID with "source:line:col" on schema errors and with the
/// offending path when a referenced file or directory does not exist.
ServiceConfig parse_config(std::string_view document, const std::filesystem::path& base_dir,
                           std::string_view source = "<config>");
ServiceConfig load_config(const std::filesystem::path& path);

// GUARDRAIL_CONFIG if set, else `fallback`.
std::filesystem::path config_path(const std::filesystem::path& fallback);
// GUARDRAIL_LISTEN replaces the listen address.
void apply_env_overrides(ServiceConfig& config);

struct HostPort {
  std::string host;
  int port = 0;
};
// "host:port" or ":port"; INVALID_ARGUMENT otherwise.
HostPort parse_listen(std::string_view listen);

}  // namespace guardrail::orchestrator
