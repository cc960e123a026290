#include "guardrail/orchestrator/wire.hpp"

#include <atomic>
#include <chrono>

#include <fmt/format.h>

#include "guardrail/core/error.hpp"

namespace guardrail::orchestrator {

using json = nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("field '{}' has the wrong type", key));
  }
}

}  // namespace

std::string new_request_id() {
  static std::atomic<std::uint64_t> counter{0};
  auto now = std::chrono::system_clock::now().time_since_epoch();
  auto us = std::chrono::duration_cast<std::chrono::microseconds>(now).count();
  return fmt::format("req-{:x}-{}", us, counter.fetch_add(1));
}

ShieldRequest decode_shield_request(std::string_view body, Direction direction) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("request body is not JSON: {}", e.what()));
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
  if (!j.contains("text") || !j["text"].is_string()) throw Error(ErrorCode::InvalidArgument, "missing string 'text'");
  ShieldRequest r;
  r.direction = direction;
  r.text = j["text"].get<std::string>();
  r.tenant = field<std::string>(j, "tenant", "");
  r.jurisdiction = field<std::string>(j, "jurisdiction", "default");
  r.policy_ids = field<std::vector<std::string>>(j, "policy_ids", {});
  if (j.contains("detectors") && !j["detectors"].is_null()) {
    auto ids = field<std::vector<std::string>>(j, "detectors", {});
    r.detector_allowlist = std::set<std::string>(ids.begin(), ids.end());
  }
  r.request_id = field<std::string>(j, "request_id", "");
  if (r.request_id.empty()) r.request_id = new_request_id();
  return r;
}

json to_json(const ShieldRequest& req) {
  json j{{"text", req.text},
         {"tenant", req.tenant},
         {"jurisdiction", req.jurisdiction},
         {"policy_ids", req.policy_ids},
         {"request_id", req.request_id}};
  if (req.detector_allowlist) j["detectors"] = std::vector<std::string>(req.detector_allowlist->begin(), req.detector_allowlist->end());
  return j;
}

json to_json(const Finding& f) {
  json j{{"detector_id", f.detector_id}, {"category", f.category}, {"label", f.label}, {"score", f.score}};
  j["span"] = f.span ? json{{"start", f.span->start}, {"end", f.span->end}} : json(nullptr);
  j["sensitivity"] = f.sensitivity ? json(to_string(*f.sensitivity)) : json(nullptr);
  j["evidence"] = f.evidence ? json(*f.evidence) : json(nullptr);
  return j;
}

Finding finding_from_json(const json& j) {
  Finding f;
  f.detector_id = j.at("detector_id").get<std::string>();
  f.category = j.at("category").get<std::string>();
  f.label = j.at("label").get<std::string>();
  f.score = j.at("score").get<double>();
  if (j.contains("span") && !j["span"].is_null()) {
    f.span = Span{j["span"].at("start").get<std::size_t>(), j["span"].at("end").get<std::size_t>()};
  }
  if (j.contains("sensitivity") && !j["sensitivity"].is_null()) {
    auto s = parse_sensitivity(j["sensitivity"].get<std::string>());
    if (!s) throw Error(ErrorCode::InvalidArgument, "bad sensitivity");
    f.sensitivity = s;
  }
  if (j.contains("evidence") && !j["evidence"].is_null()) f.evidence = j["evidence"].get<std::string>();
  return f;
}

json to_json(const Verdict& v) {
  json audit = json::array();
  for (const auto& a : v.audit) {
    audit.push_back({{"policy_id", a.policy_id},
                     {"rule_id", a.rule_id},
                     {"action", to_string(a.action)},
                     {"matched", a.matched},
                     {"message", a.message}});
  }
  json findings = json::array();
  for (const auto& f : v.findings) findings.push_back(to_json(f));
  return {{"decision", to_string(v.decision)},
          {"output_text", v.output_text},
          {"warnings", v.warnings},
          {"audit", std::move(audit)},
          {"timings", v.timings},
          {"degraded", v.degraded},
          {"findings", std::move(findings)}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  auto d = parse_decision(j.at("decision").get<std::string>());
  if (!d) throw Error(ErrorCode::InvalidArgument, "bad decision");
  v.decision = *d;
  v.output_text = j.at("output_text").get<std::string>();
  v.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& a : j.at("audit")) {
    RuleFiring r;
    r.policy_id = a.at("policy_id").get<std::string>();
    r.rule_id = a.at("rule_id").get<std::string>();
    auto act = parse_decision(a.at("action").get<std::string>());
    if (!act) throw Error(ErrorCode::InvalidArgument, "bad action");
    r.action = *act;
    r.matched = a.at("matched").get<std::vector<std::size_t>>();
    r.message = a.at("message").get<std::string>();
    v.audit.push_back(std::move(r));
  }
  v.timings = j.at("timings").get<std::map<std::string, double>>();
  v.degraded = j.at("degraded").get<std::vector<std::string>>();
  if (j.contains("findings")) {
    for (const auto& f : j["findings"]) v.findings.push_back(finding_from_json(f));
  }
  return v;
}

json error_json(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace guardrail::orchestrator
