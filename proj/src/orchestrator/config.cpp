#include "guardrail/orchestrator/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "guardrail/core/error.hpp"
#include "guardrail/core/paths.hpp"

namespace guardrail::orchestrator {
namespace {

namespace fs = std::filesystem;

struct Ctx {
  std::string_view source;
  fs::path base;

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    auto mark = node.Mark();
    throw Error(ErrorCode::ConfigInvalid, fmt::format("{}:{}:{}: {}", source, mark.line + 1, mark.column + 1, what));
  }

  void known(const YAML::Node& map, std::initializer_list<std::string_view> keys) const {
    for (const auto& kv : map) {
      auto key = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  template <typename T>
  T get(const YAML::Node& node, const char* what) const {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, fmt::format("bad value for '{}'", what));
    }
  }

  fs::path path(const YAML::Node& node, const char* what, bool must_exist = true) const {
    fs::path p = get<std::string>(node, what);
    if (p.is_relative()) p = base / p;
    p = p.lexically_normal();
    std::error_code ec;
    if (must_exist && !fs::exists(p, ec)) fail(node, fmt::format("{} not found: {}", what, p.string()));
    return p;
  }
};

std::vector<Direction> parse_directions(const Ctx& c, const YAML::Node& node) {
  std::vector<Direction> out;
  if (!node.IsSequence()) c.fail(node, "directions must be a list");
  for (const auto& item : node) {
    auto d = parse_direction(c.get<std::string>(item, "directions"));
    if (!d) c.fail(item, "direction must be prompt or response");
    if (std::find(out.begin(), out.end(), *d) == out.end()) out.push_back(*d);
  }
  return out;
}

DetectorConfig parse_detector(const Ctx& c, const YAML::Node& node) {
  if (!node.IsMap()) c.fail(node, "detector entry must be a mapping");
  c.known(node, {"id", "type", "timeout_ms", "fail_mode", "directions", "rulepack", "lexicon", "corpus", "index", "k",
                 "chunk_len", "overlap", "max_candidates", "min_similarity", "endpoint", "kind", "categories"});
  DetectorConfig d;
  if (!node["id"]) c.fail(node, "detector without id");
  d.id = c.get<std::string>(node["id"], "id");
  if (!node["type"]) c.fail(node, "detector '" + d.id + "' without type");
  d.type = c.get<std::string>(node["type"], "type");
  if (node["timeout_ms"]) {
    d.timeout_ms = c.get<int>(node["timeout_ms"], "timeout_ms");
    if (d.timeout_ms <= 0) c.fail(node["timeout_ms"], "timeout_ms must be positive");
  }
  if (node["fail_mode"]) {
    auto m = detect::parse_fail_mode(c.get<std::string>(node["fail_mode"], "fail_mode"));
    if (!m) c.fail(node["fail_mode"], "fail_mode must be FAIL_OPEN or FAIL_CLOSED");
    d.fail_mode = m;
  }
  if (node["directions"]) d.directions = parse_directions(c, node["directions"]);

  if (d.type == "pii") {
    if (node["rulepack"]) d.rulepack = c.path(node["rulepack"], "rulepack");
  } else if (d.type == "sentence_lexicon" || d.type == "keyword_classifier") {
    if (!node["lexicon"]) c.fail(node, "detector '" + d.id + "' needs a lexicon");
    d.lexicon = c.path(node["lexicon"], "lexicon");
  } else if (d.type == "attribution") {
    if (node["index"]) {
      d.index = c.path(node["index"], "index");
    } else if (node["corpus"]) {
      d.corpus = c.path(node["corpus"], "corpus");
    } else {
      c.fail(node, "attribution detector '" + d.id + "' needs corpus or index");
    }
    if (node["k"]) d.k = c.get<int>(node["k"], "k");
    if (node["chunk_len"]) d.attribution.chunk_len = c.get<int>(node["chunk_len"], "chunk_len");
    if (node["overlap"]) d.attribution.overlap = c.get<int>(node["overlap"], "overlap");
    if (node["max_candidates"]) d.attribution.max_candidates = c.get<int>(node["max_candidates"], "max_candidates");
    if (node["min_similarity"]) d.attribution.min_similarity = c.get<double>(node["min_similarity"], "min_similarity");
  } else if (d.type == "remote") {
    if (!node["endpoint"]) c.fail(node, "remote detector '" + d.id + "' needs an endpoint");
    d.endpoint = c.get<std::string>(node["endpoint"], "endpoint");
    if (node["kind"]) {
      auto k = detect::parse_detector_kind(c.get<std::string>(node["kind"], "kind"));
      if (!k) c.fail(node["kind"], "kind must be CLASSIFICATION, EXTRACTION or COMPARISON");
      d.kind = *k;
    }
    if (node["categories"]) d.categories = c.get<std::vector<std::string>>(node["categories"], "categories");
  } else {
    c.fail(node["type"], "unknown detector type '" + d.type + "'");
  }
  return d;
}

}  // namespace

ServiceConfig parse_config(std::string_view document, const fs::path& base_dir, std::string_view source) {
  Ctx c{source, base_dir};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(document));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("{}:{}:{}: {}", source, e.mark.line + 1, e.mark.column + 1, e.msg));
  }
  if (!root.IsMap()) c.fail(root, "config must be a mapping");
  c.known(root, {"listen", "store", "workers", "policies_dir", "jurisdictions_dir", "default_policies", "detectors"});

  ServiceConfig cfg;
  if (root["listen"]) cfg.listen = c.get<std::string>(root["listen"], "listen");
  if (root["store"]) cfg.store = c.path(root["store"], "store", false);
  if (auto w = root["workers"]) {
    c.known(w, {"orchestrator_threads", "detector_threads"});
    if (w["orchestrator_threads"]) cfg.workers.orchestrator_threads = c.get<int>(w["orchestrator_threads"], "orchestrator_threads");
    if (w["detector_threads"]) cfg.workers.detector_threads = c.get<int>(w["detector_threads"], "detector_threads");
    if (cfg.workers.orchestrator_threads <= 0 || cfg.workers.detector_threads <= 0) {
      c.fail(w, "worker counts must be positive");
    }
  }
  cfg.policies_dir = root["policies_dir"] ? c.path(root["policies_dir"], "policies_dir") : data_dir() / "policies";
  cfg.jurisdictions_dir =
      root["jurisdictions_dir"] ? c.path(root["jurisdictions_dir"], "jurisdictions_dir") : data_dir() / "jurisdictions";
  if (root["default_policies"]) {
    cfg.default_policies = c.get<std::vector<std::string>>(root["default_policies"], "default_policies");
  }
  if (auto ds = root["detectors"]) {
    if (!ds.IsSequence()) c.fail(ds, "detectors must be a list");
    for (const auto& d : ds) cfg.detectors.push_back(parse_detector(c, d));
  }
  return cfg;
}

ServiceConfig load_config(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Error(ErrorCode::ConfigInvalid, "config file not found: " + path.string());
  return parse_config(read_file(path), path.parent_path(), path.string());
}

fs::path config_path(const fs::path& fallback) {
  const char* env = std::getenv(std::string(kConfigEnv).c_str());
  return env != nullptr && *env != '\0' ? fs::path(env) : fallback;
}

void apply_env_overrides(ServiceConfig& config) {
  const char* env = std::getenv(std::string(kListenEnv).c_str());
  if (env != nullptr && *env != '\0') config.listen = env;
}

HostPort parse_listen(std::string_view listen) {
  auto colon = listen.rfind(':');
  if (colon == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "listen must be host:port");
  HostPort hp;
  hp.host = std::string(listen.substr(0, colon));
  if (hp.host.empty()) hp.host = "0.0.0.0";
  auto port = listen.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), hp.port);
  if (ec != std::errc() || ptr != port.data() + port.size() || hp.port < 0 || hp.port > 65535) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("bad port in '{}'", listen));
  }
  return hp;
}

}  // namespace guardrail::orchestrator
