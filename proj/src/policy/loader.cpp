#include "guardrail/policy/loader.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "guardrail/core/error.hpp"
#include "guardrail/core/paths.hpp"
#include "guardrail/core/validate.hpp"
#include "guardrail/pii/categories.hpp"

namespace guardrail::policy {
namespace {

[[noreturn]] void fail(ErrorCode code, std::string_view source, const YAML::Mark& mark, const std::string& what) {
  throw Error(code, fmt::format("{}:{}:{}: {}", source, mark.line + 1, mark.column + 1, what));
}

[[noreturn]] void fail(std::string_view source, const YAML::Node& node, const std::string& what) {
  fail(ErrorCode::ConfigInvalid, source, node.Mark(), what);
}

YAML::Node load_yaml(std::string_view document, std::string_view source) {
  try {
    return YAML::Load(std::string(document));
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::ConfigInvalid, source, e.mark, e.msg);
  }
}

std::string scalar(std::string_view source, const YAML::Node& map, const char* key, bool required) {
  auto node = map[key];
  if (!node) {
    if (required) fail(source, map, fmt::format("missing '{}'", key));
    return {};
  }
  if (!node.IsScalar()) fail(source, node, fmt::format("'{}' must be a string", key));
  return node.as<std::string>();
}

void reject_unknown_keys(std::string_view source, const YAML::Node& map, std::initializer_list<std::string_view> known) {
  for (const auto& kv : map) {
    auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(source, kv.first, fmt::format("unknown key '{}'", key));
    }
  }
}

Decision action_of(std::string_view source, const YAML::Node& node) {
  auto text = node.as<std::string>();
  auto d = parse_decision(text);
  if (!d) fail(ErrorCode::UnknownAction, source, node.Mark(), fmt::format("unknown action '{}'", text));
  return *d;
}

bool valid_policy_id(std::string_view id) {
  return !id.empty() && id.size() <= 64 && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.' || c == '-';
  }) && id.front() != '.';
}

bool names_extraction_category(const Predicate& p) {
  for (const auto& g : p.category_globs()) {
    for (auto t : pii::all_pii_types()) {
      if (glob_match(g, pii::category(t))) return true;
    }
  }
  return false;
}

PolicyRule parse_rule(std::string_view source, const YAML::Node& node) {
  if (!node.IsMap()) fail(source, node, "rule must be a mapping");
  reject_unknown_keys(source, node, {"id", "when", "action", "mask_style", "message"});
  PolicyRule rule;
  rule.line = node.Mark().line + 1;
  rule.rule_id = scalar(source, node, "id", true);
  if (rule.rule_id.empty()) fail(source, node["id"], "empty rule id");

  auto when = node["when"];
  if (!when) fail(source, node, "missing 'when'");
  if (!when.IsScalar()) fail(source, when, "'when' must be a predicate string");
  try {
    rule.when = Predicate::parse(when.as<std::string>());
  } catch (const PredicateSyntaxError& e) {
    YAML::Mark at = when.Mark();
    at.column += static_cast<int>(e.column()) - 1 + (when.Tag() == "!" ? 1 : 0);
    std::string msg = e.what();
    msg = msg.substr(msg.find(": ") + 2);  // drop the code prefix
    fail(ErrorCode::MalformedPredicate, source, at, msg);
  }

  if (!node["action"]) fail(source, node, "missing 'action'");
  rule.action = action_of(source, node["action"]);
  if (node["mask_style"]) {
    if (rule.action != Decision::Mask) fail(source, node["mask_style"], "mask_style is only valid on MASK rules");
    auto style = pii::parse_redact_style(node["mask_style"].as<std::string>());
    if (!style) fail(source, node["mask_style"], "mask_style must be MASK_TYPE or REDACT_FULL");
    rule.mask_style = *style;
  }
  if (rule.action == Decision::Mask && !names_extraction_category(rule.when)) {
    fail(source, when, "MASK rule must name at least one pii.* category");
  }
  rule.message = scalar(source, node, "message", false);
  return rule;
}

}  // namespace

PolicyTemplate parse_policy(std::string_view document, std::string_view source) {
  auto root = load_yaml(document, source);
  if (!root.IsMap()) fail(ErrorCode::ConfigInvalid, source, root.Mark(), "policy document must be a mapping");
  reject_unknown_keys(source, root, {"policy_id", "jurisdiction", "default_action", "block_message", "rules"});

  PolicyTemplate t;
  t.policy_id = scalar(source, root, "policy_id", true);
  if (!valid_policy_id(t.policy_id)) fail(source, root["policy_id"], "policy_id must match [A-Za-z0-9_.-]+");
  if (root["jurisdiction"]) {
    t.jurisdiction = scalar(source, root, "jurisdiction", false);
    if (!is_valid_jurisdiction_tag(t.jurisdiction)) {
      fail(ErrorCode::BadJurisdictionTag, source, root["jurisdiction"].Mark(),
           fmt::format("bad jurisdiction tag '{}'", t.jurisdiction));
    }
  }
  if (!root["default_action"]) fail(source, root, "missing 'default_action'");
  t.default_action = action_of(source, root["default_action"]);
  t.block_message = root["block_message"] ? scalar(source, root, "block_message", false)
                                          : std::string(kDefaultBlockMessage);

  auto rules = root["rules"];
  if (rules && !rules.IsNull()) {
    if (!rules.IsSequence()) fail(source, rules, "'rules' must be a list");
    std::set<std::string> ids;
    for (const auto& r : rules) {
      auto rule = parse_rule(source, r);
      if (!ids.insert(rule.rule_id).second) {
        fail(ErrorCode::DuplicateRuleId, source, r["id"].Mark(), fmt::format("duplicate rule id '{}'", rule.rule_id));
      }
      t.rules.push_back(std::move(rule));
    }
  }
  return t;
}

PolicyTemplate load_policy_file(const std::filesystem::path& path) {
  return parse_policy(read_file(path), path.string());
}

std::vector<PolicyTemplate> load_policy_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::ConfigInvalid, "policy directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".yaml" || ext == ".yml" || ext == ".json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<PolicyTemplate> out;
  std::set<std::string> ids;
  for (const auto& f : files) {
    auto t = load_policy_file(f);
    if (!ids.insert(t.policy_id).second) {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("{}: policy_id '{}' defined twice", f.string(), t.policy_id));
    }
    out.push_back(std::move(t));
  }
  return out;
}

JurisdictionTable parse_jurisdiction(std::string_view document, std::string_view source) {
  auto root = load_yaml(document, source);
  if (!root.IsMap()) fail(ErrorCode::ConfigInvalid, source, root.Mark(), "jurisdiction table must be a mapping");
  reject_unknown_keys(source, root, {"jurisdiction", "levels"});
  JurisdictionTable t;
  t.jurisdiction = scalar(source, root, "jurisdiction", true);
  if (!is_valid_jurisdiction_tag(t.jurisdiction)) fail(source, root["jurisdiction"], "bad jurisdiction tag");
  auto levels = root["levels"];
  if (levels && !levels.IsNull()) {
    if (!levels.IsMap()) fail(source, levels, "'levels' must map category -> level");
    for (const auto& kv : levels) {
      auto level = parse_sensitivity(kv.second.as<std::string>());
      if (!level) fail(source, kv.second, "level must be LOW, MODERATE or HIGH");
      t.levels[kv.first.as<std::string>()] = *level;
    }
  }
  return t;
}

JurisdictionTables load_jurisdiction_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::ConfigInvalid, "jurisdiction directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".yaml" || ext == ".yml")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  JurisdictionTables out;
  for (const auto& f : files) {
    auto t = parse_jurisdiction(read_file(f), f.string());
    auto tag = t.jurisdiction;
    if (!out.emplace(tag, std::move(t)).second) {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("{}: jurisdiction '{}' defined twice", f.string(), tag));
    }
  }
  return out;
}

}  // namespace guardrail::policy
