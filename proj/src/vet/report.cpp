#include "guardrail/vet/report.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "guardrail/core/error.hpp"
#include "guardrail/orchestrator/wire.hpp"

namespace guardrail::vet {

using json = nlohmann::json;

Decision FileReport::worst() const {
  Decision d = Decision::Pass;
  for (const auto& f : fields) d = combine(d, f.verdict.decision);
  return d;
}

std::vector<Annotation> VetReport::annotations() const {
  std::vector<Annotation> out;
  for (const auto& file : files) {
    for (const auto& fv : file.fields) {
      const auto& v = fv.verdict;
      if (v.decision < Decision::Mask) continue;
      std::map<std::tuple<std::size_t, std::size_t, std::string>, std::size_t> seen;  // (start, end, category) -> out index
      std::set<std::pair<std::string, std::string>> seen_rules;
      for (const auto& firing : v.audit) {
        if (firing.action < Decision::Mask) continue;
        bool located = false;
        for (auto idx : firing.matched) {
          if (idx >= v.findings.size() || !v.findings[idx].span) continue;
          const auto& f = v.findings[idx];
          located = true;
          auto key = std::make_tuple(f.span->start, f.span->end, f.category);
          auto it = seen.find(key);
          if (it != seen.end()) {
            auto& prev = out[it->second];
            if (firing.action > prev.action) {
              prev.action = firing.action;
              prev.policy_id = firing.policy_id;
              prev.rule_id = firing.rule_id;
            }
            continue;
          }
          seen.emplace(key, out.size());
          out.push_back({file.path, fv.field, f.span, f.category, f.label, firing.policy_id, firing.rule_id, firing.action});
        }
        if (!located && seen_rules.emplace(firing.policy_id, firing.rule_id).second) {
          Annotation a{file.path, fv.field, std::nullopt, {}, {}, firing.policy_id, firing.rule_id, firing.action};
          if (!firing.matched.empty() && firing.matched.front() < v.findings.size()) {
            a.category = v.findings[firing.matched.front()].category;
            a.label = v.findings[firing.matched.front()].label;
          }
          out.push_back(std::move(a));
        }
      }
    }
  }
  return out;
}

ExitCode VetReport::exit_code() const {
  bool violation = false, failed = files.empty();
  for (const auto& f : files) {
    if (f.error) failed = true;
    if (f.worst() >= Decision::Mask) violation = true;
  }
  if (violation) return ExitCode::Violations;
  return failed ? ExitCode::Failure : ExitCode::Clean;
}

json to_json(const VetReport& r) {
  json files = json::array();
  std::map<Decision, int> counts;
  int errors = 0;
  for (const auto& f : r.files) {
    json fields = json::array();
    for (const auto& fv : f.fields) fields.push_back({{"field", fv.field}, {"verdict", orchestrator::to_json(fv.verdict)}});
    if (f.error) {
      ++errors;
    } else {
      counts[f.worst()]++;
    }
    files.push_back({{"path", f.path},
                     {"error", f.error ? json(*f.error) : json(nullptr)},
                     {"decision", f.error ? json(nullptr) : json(to_string(f.worst()))},
                     {"fields", std::move(fields)}});
  }
  return {{"files", std::move(files)},
          {"summary",
           {{"files", r.files.size()},
            {"errors", errors},
            {"pass", counts[Decision::Pass]},
            {"warn", counts[Decision::Warn]},
            {"mask", counts[Decision::Mask]},
            {"block", counts[Decision::Block]},
            {"exit_code", static_cast<int>(r.exit_code())}}}};
}

VetReport report_from_json(const json& j) {
  VetReport r;
  try {
    for (const auto& f : j.at("files")) {
      FileReport fr;
      fr.path = f.at("path").get<std::string>();
      if (!f.at("error").is_null()) fr.error = f["error"].get<std::string>();
      for (const auto& fv : f.at("fields")) {
        fr.fields.push_back({fv.at("field").get<std::string>(), orchestrator::verdict_from_json(fv.at("verdict"))});
      }
      r.files.push_back(std::move(fr));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("bad vet report: {}", e.what()));
  }
  return r;
}

json annotations_json(const VetReport& r) {
  json list = json::array();
  for (const auto& a : r.annotations()) {
    list.push_back({{"file", a.file},
                    {"field", a.field},
                    {"span", a.span ? json{{"start", a.span->start}, {"end", a.span->end}} : json(nullptr)},
                    {"category", a.category},
                    {"label", a.label},
                    {"policy_id", a.policy_id},
                    {"rule_id", a.rule_id},
                    {"action", to_string(a.action)}});
  }
  return {{"annotations", std::move(list)}};
}

std::string render_text(const VetReport& r) {
  std::string out;
  int flagged = 0, errors = 0;
  for (const auto& f : r.files) {
    if (f.error) {
      ++errors;
      out += fmt::format("{}: ERROR {}\n", f.path, *f.error);
      continue;
    }
    auto worst = f.worst();
    if (worst >= Decision::Mask) ++flagged;
    out += fmt::format("{}: {}\n", f.path, to_string(worst));
    for (const auto& fv : f.fields) {
      if (fv.verdict.decision == Decision::Pass) continue;
      std::vector<std::string> rules;
      for (const auto& a : fv.verdict.audit) {
        if (a.action != Decision::Pass) rules.push_back(fmt::format("{}/{}", a.policy_id, a.rule_id));
      }
      out += fmt::format("  {}: {} ({})\n", fv.field, to_string(fv.verdict.decision), fmt::join(rules, ", "));
    }
  }
  out += fmt::format("{} files, {} flagged, {} errors\n", r.files.size(), flagged, errors);
  return out;
}

}  // namespace guardrail::vet
