#include "guardrail/pii/rule_pack.hpp"

#include <cmath>

#include <boost/regex.hpp>
#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "guardrail/core/error.hpp"
#include "guardrail/core/paths.hpp"
#include "guardrail/core/tokenize.hpp"
#include "compiled_pattern.hpp"

namespace guardrail::pii {
namespace {

[[noreturn]] void fail(std::string_view source, const YAML::Node& node, const std::string& what) {
  auto mark = node.Mark();
  throw Error(ErrorCode::ConfigInvalid,
              fmt::format("{}:{}:{}: {}", source, mark.line + 1, mark.column + 1, what));
}

std::set<std::string> lower_set(const YAML::Node& node) {
  std::set<std::string> out;
  if (!node) return out;
  for (const auto& item : node) out.insert(ascii_lower(item.as<std::string>()));
  return out;
}

PatternSpec make_pattern(std::string_view source, const YAML::Node& node,
                         const std::string& default_validator) {
  PatternSpec p;
  if (node.IsScalar()) {
    p.expression = node.as<std::string>();
    p.validator_name = default_validator;
  } else if (node.IsMap() && node["regex"]) {
    p.expression = node["regex"].as<std::string>();
    p.validator_name = node["validator"] ? node["validator"].as<std::string>() : default_validator;
  } else {
    fail(source, node, "pattern must be a string or {regex, validator}");
  }
  if (!p.validator_name.empty() && p.validator_name != "none") {
    p.validator = find_validator(p.validator_name);
    if (p.validator == nullptr) fail(source, node, "unknown validator '" + p.validator_name + "'");
  } else {
    p.validator_name.clear();
  }
  try {
    auto compiled = std::make_shared<CompiledPattern>();
    compiled->regex = boost::regex(p.expression, boost::regex::perl | boost::regex::optimize);
    p.compiled = std::move(compiled);
  } catch (const boost::regex_error& e) {
    fail(source, node, fmt::format("bad regex '{}': {}", p.expression, e.what()));
  }
  return p;
}

PiiRule make_rule(std::string_view source, const YAML::Node& node) {
  if (!node.IsMap()) fail(source, node, "rule must be a mapping");
  PiiRule rule;
  if (!node["pii_type"]) fail(source, node, "rule without pii_type");
  auto type_tag = node["pii_type"].as<std::string>();
  auto type = parse_pii_type(type_tag);
  if (!type) fail(source, node["pii_type"], "unknown pii_type '" + type_tag + "'");
  rule.pii_type = *type;

  if (!node["base_sensitivity"]) fail(source, node, "rule without base_sensitivity");
  auto sens = parse_sensitivity(node["base_sensitivity"].as<std::string>());
  if (!sens) fail(source, node["base_sensitivity"], "base_sensitivity must be LOW, MODERATE or HIGH");
  rule.base_sensitivity = *sens;

  if (node["confidence"]) {
    rule.confidence = node["confidence"].as<double>();
    if (!(rule.confidence >= 0.0 && rule.confidence <= 1.0)) {
      fail(source, node["confidence"], "confidence must lie in [0,1]");
    }
  }
  if (node["context_window"]) {
    rule.context_window = node["context_window"].as<int>();
    if (rule.context_window < 0) fail(source, node["context_window"], "context_window must be >= 0");
  }
  if (node["context_threshold"]) {
    rule.context_threshold = node["context_threshold"].as<double>();
    if (!std::isfinite(rule.context_threshold) || rule.context_threshold < 0.0) {
      fail(source, node["context_threshold"], "context_threshold must be finite and >= 0");
    }
  }

  std::string default_validator = node["validator"] ? node["validator"].as<std::string>() : "";
  if (const auto& pats = node["patterns"]) {
    for (const auto& p : pats) rule.patterns.push_back(make_pattern(source, p, default_validator));
  }
  if (const auto& terms = node["context_terms"]) {
    if (!terms.IsMap()) fail(source, terms, "context_terms must map term -> weight");
    for (const auto& kv : terms) {
      ContextTerm t{kv.first.as<std::string>(), kv.second.as<double>()};
      if (!std::isfinite(t.weight)) fail(source, kv.second, "context weight must be finite");
      rule.context_terms.push_back(std::move(t));
    }
  }
  if (const auto& names = node["names"]) {
    NameLexicon lex;
    lex.given_names = lower_set(names["given"]);
    lex.surnames = lower_set(names["surnames"]);
    lex.titles = lower_set(names["titles"]);
    lex.stopwords = lower_set(names["stopwords"]);
    rule.names = std::move(lex);
  }
  if (rule.patterns.empty() && !rule.names) fail(source, node, "rule has neither patterns nor names");
  return rule;
}

}  // namespace

RulePack RulePack::parse(std::string_view yaml_text, std::string_view source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("{}: {}", source_name, e.what()));
  }
  if (!root.IsMap() || !root["rules"] || !root["rules"].IsSequence()) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("{}: expected a 'rules' list", source_name));
  }
  if (root["version"] && root["version"].as<int>() != 1) {
    fail(source_name, root["version"], "unsupported rule pack version");
  }
  RulePack pack;
  try {
    for (const auto& node : root["rules"]) {
      auto rule = make_rule(source_name, node);
      if (pack.find(rule.pii_type) != nullptr) {
        fail(source_name, node, fmt::format("pii_type '{}' defined twice", tag(rule.pii_type)));
      }
      pack.rules_.push_back(std::move(rule));
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("{}: {}", source_name, e.what()));
  }
  return pack;
}

RulePack RulePack::load_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::ConfigInvalid, "rule pack not readable: " + path.string());
  }
  return parse(text, path.string());
}

const RulePack& RulePack::builtin() {
  static const RulePack kPack = load_file(data_dir() / "rulepacks" / "default.yaml");
  return kPack;
}

const PiiRule* RulePack::find(PiiType t) const {
  for (const auto& r : rules_) {
    if (r.pii_type == t) return &r;
  }
  return nullptr;
}

}  // namespace guardrail::pii
