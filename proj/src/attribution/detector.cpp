#include "guardrail/attribution/detector.hpp"

#include "guardrail/core/error.hpp"

namespace guardrail::attribution {

AttributionDetector::AttributionDetector(std::shared_ptr<const CorpusIndex> index, AttributionParams params,
                                         ExecMode mode)
    : index_(std::move(index)), params_(params), mode_(mode) {
  if (!index_) throw Error(ErrorCode::InvalidArgument, "attribution detector needs an index");
}

void AttributionDetector::swap_index(std::shared_ptr<const CorpusIndex> index) {
  if (!index) throw Error(ErrorCode::InvalidArgument, "attribution detector needs an index");
  std::lock_guard lock(mu_);
  index_ = std::move(index);
}

std::shared_ptr<const CorpusIndex> AttributionDetector::index() const {
  std::lock_guard lock(mu_);
  return index_;
}

Finding to_finding(const AttributionMatch& m, std::string_view detector_id) {
  Finding f;
  f.detector_id = std::string(detector_id);
  f.category = std::string(kAttributionCategory);
  f.span = m.query_span;
  f.score = m.similarity;
  f.label = std::string(to_string(m.match_kind));
  f.evidence = m.doc_id;
  return f;
}

std::vector<Finding> AttributionDetector::detect(std::string_view text, const detect::DetectContext&) const {
  auto snapshot = index();
  std::vector<Finding> out;
  for (const auto& m : attribute(*snapshot, text, params_, nullptr, mode_)) out.push_back(to_finding(m, "attribution"));
  return out;
}

detect::DetectorDescriptor attribution_descriptor(std::string detector_id) {
  detect::DetectorDescriptor d;
  d.detector_id = std::move(detector_id);
  d.kind = detect::DetectorKind::Comparison;
  d.categories = {std::string(kAttributionCategory)};
  return d;
}

}  // namespace guardrail::attribution
