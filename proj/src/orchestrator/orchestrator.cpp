#include "guardrail/orchestrator/orchestrator.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "guardrail/attribution/detector.hpp"
#include "guardrail/classify/detector.hpp"
#include "guardrail/core/error.hpp"
#include "guardrail/core/paths.hpp"
#include "guardrail/core/validate.hpp"
#include "guardrail/detect/remote.hpp"
#include "guardrail/detect/runner.hpp"
#include "guardrail/pii/detector.hpp"
#include "guardrail/policy/engine.hpp"
#include "guardrail/policy/loader.hpp"

namespace guardrail::orchestrator {

Orchestrator::Orchestrator(std::shared_ptr<const detect::DetectorRegistry> detectors,
                           std::shared_ptr<policy::PolicyRegistry> policies, std::size_t detector_threads,
                           std::vector<std::string> default_policies)
    : detectors_(std::move(detectors)),
      policies_(std::move(policies)),
      default_policies_(std::move(default_policies)),
      pool_(std::make_unique<detect::WorkerPool>(std::max<std::size_t>(1, detector_threads))) {
  if (!detectors_ || !policies_) throw Error(ErrorCode::InvalidArgument, "orchestrator needs detectors and policies");
}

std::shared_ptr<const detect::DetectorRegistry> Orchestrator::detectors() const {
  std::lock_guard lock(mu_);
  return detectors_;
}

void Orchestrator::replace_detectors(std::shared_ptr<const detect::DetectorRegistry> detectors) {
  if (!detectors) throw Error(ErrorCode::InvalidArgument, "null detector registry");
  std::lock_guard lock(mu_);
  detectors_ = std::move(detectors);
}

Verdict Orchestrator::shield(const ShieldRequest& request, OrchestrationContext* context) const {
  const auto started = std::chrono::steady_clock::now();
  const auto registry = detectors();
  const auto policies = policies_->snapshot();

  ShieldRequest req = request;
  if (req.policy_ids.empty()) req.policy_ids = default_policies_;
  if (auto err = validate_request(req, [&](std::string_view id) { return policies->find(id) != nullptr; })) {
    throw Error(err->code, fmt::format("{}: {}", err->field, err->message));
  }

  std::vector<const detect::RegisteredDetector*> dispatched;
  for (const auto& entry : registry->entries()) {
    if (req.detector_allowlist && req.detector_allowlist->count(entry.descriptor.detector_id) == 0) continue;
    if (!entry.descriptor.applies_to(req.direction)) continue;
    dispatched.push_back(&entry);
  }
  if (dispatched.empty()) {
    throw Error(ErrorCode::NoDetectorsApplicable,
                fmt::format("no registered detector applies to this {} request", to_string(req.direction)));
  }

  auto results = detect::run_detectors(dispatched, req.text, req.request_id, *pool_);

  std::vector<Finding> findings;
  std::vector<std::string> degraded;
  std::vector<RuleFiring> fail_closed;
  std::vector<std::string> fail_open_warnings;
  std::map<std::string, double> timings;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto& desc = dispatched[i]->descriptor;
    timings[r.detector_id] = r.elapsed_ms;
    if (r.status == detect::DetectorStatus::Ok) {
      findings.insert(findings.end(), r.findings.begin(), r.findings.end());
      continue;
    }
    degraded.push_back(r.detector_id);
    std::string why = fmt::format("detector {} {}", r.detector_id, to_string(r.status));
    if (!r.error.empty()) why += ": " + r.error;
    if (policy::effective_fail_mode(desc, *policies) == detect::FailMode::FailClosed) {
      fail_closed.push_back(RuleFiring{"", fmt::format("{}{}", kFailClosedRulePrefix, r.detector_id),
                                       Decision::Block, {}, why});
    } else {
      fail_open_warnings.push_back(why);
    }
  }

  std::vector<const policy::PolicyTemplate*> templates;
  for (const auto& id : req.policy_ids) templates.push_back(policies->find(id));
  Verdict v = policy::evaluate(req.text, findings, templates, req.jurisdiction, req.direction, policies->jurisdictions);

  if (!fail_closed.empty()) {
    v.decision = Decision::Block;
    v.output_text = templates.front()->block_message;
    for (auto& f : fail_closed) {
      f.policy_id = templates.front()->policy_id;
      v.audit.push_back(std::move(f));
    }
  }
  v.warnings.insert(v.warnings.end(), fail_open_warnings.begin(), fail_open_warnings.end());
  v.timings = std::move(timings);
  v.degraded = degraded;

  if (context != nullptr) {
    context->request = std::move(req);
    context->results.clear();
    for (auto& r : results) context->results.emplace(r.detector_id, std::move(r));
    context->started_at = started;
    context->finished_at = std::chrono::steady_clock::now();
    context->degraded = std::move(degraded);
  }
  return v;
}

namespace {

detect::DetectorDescriptor descriptor_for(const DetectorConfig& c, detect::DetectorDescriptor base) {
  base.detector_id = c.id;
  base.timeout_ms = c.timeout_ms;
  base.fail_mode = c.fail_mode;
  base.directions = c.directions;
  return base;
}

std::vector<attribution::CorpusEntry> load_corpus(const std::filesystem::path& p) {
  std::error_code ec;
  if (std::filesystem::is_directory(p, ec)) return attribution::load_corpus_dir(p);
  return attribution::load_corpus_records(p);
}

}  // namespace

std::shared_ptr<const detect::DetectorRegistry> build_registry(const ServiceConfig& config) {
  auto reg = std::make_shared<detect::DetectorRegistry>();
  for (const auto& c : config.detectors) {
    if (c.type == "pii") {
      auto pack = c.rulepack.empty() ? std::make_shared<const pii::RulePack>(pii::RulePack::builtin())
                                      : std::make_shared<const pii::RulePack>(pii::RulePack::load_file(c.rulepack));
      auto ex = std::make_shared<const pii::Extractor>(pack);
      reg->add(descriptor_for(c, pii::pii_descriptor(c.id)), std::make_shared<pii::PiiDetector>(ex));
    } else if (c.type == "sentence_lexicon" || c.type == "keyword_classifier") {
      auto lex = classify::load_lexicon(c.lexicon);
      auto desc = descriptor_for(c, classify::classifier_descriptor(c.id, lex));
      std::shared_ptr<const detect::Detector> impl;
      if (c.type == "sentence_lexicon") {
        impl = std::make_shared<classify::SentenceLexiconDetector>(std::move(lex));
      } else {
        impl = std::make_shared<classify::KeywordClassifierDetector>(std::move(lex));
      }
      reg->add(std::move(desc), std::move(impl));
    } else if (c.type == "attribution") {
      auto index = !c.index.empty()
                       ? std::make_shared<const attribution::CorpusIndex>(
                             attribution::CorpusIndex::deserialize(read_file(c.index)))
                       : std::make_shared<const attribution::CorpusIndex>(
                             attribution::CorpusIndex::build_parallel(load_corpus(c.corpus), c.k));
      reg->add(descriptor_for(c, attribution::attribution_descriptor(c.id)),
               std::make_shared<attribution::AttributionDetector>(index, c.attribution));
    } else if (c.type == "remote") {
      detect::DetectorDescriptor d;
      d.kind = c.kind;
      d.categories = c.categories;
      reg->add(descriptor_for(c, d), std::make_shared<detect::RemoteDetector>(c.id, c.endpoint, c.timeout_ms));
    } else {
      throw Error(ErrorCode::ConfigInvalid, "unknown detector type '" + c.type + "'");
    }
  }
  return reg;
}

policy::PolicySet load_policy_set(const ServiceConfig& config) {
  return policy::make_policy_set(policy::load_policy_dir(config.policies_dir),
                                 policy::load_jurisdiction_dir(config.jurisdictions_dir));
}

std::shared_ptr<Orchestrator> build_orchestrator(const ServiceConfig& config, policy::PolicyRegistry::Persist persist) {
  auto set = load_policy_set(config);
  auto defaults = config.default_policies;
  if (defaults.empty() && set.find("default") != nullptr) defaults.push_back("default");
  for (const auto& id : defaults) {
    if (set.find(id) == nullptr) throw Error(ErrorCode::ConfigInvalid, "default policy '" + id + "' is not loaded");
  }
  auto policies = std::make_shared<policy::PolicyRegistry>(std::move(set), std::move(persist));
  return std::make_shared<Orchestrator>(build_registry(config), std::move(policies),
                                        static_cast<std::size_t>(config.workers.detector_threads), std::move(defaults));
}

}  // namespace guardrail::orchestrator
