#pragma once

#include <memory>
#include <mutex>

#include "guardrail/attribution/engine.hpp"
#include "guardrail/detect/detector.hpp"

namespace guardrail::attribution {

inline constexpr std::string_view kAttributionCategory = "attribution";

// Reports reuse of indexed corpus text. The index can be replaced while
// requests are in flight; each call works on the snapshot it started with.
class AttributionDetector : public detect::Detector {
 public:
  explicit AttributionDetector(std::shared_ptr<const CorpusIndex> index, AttributionParams params = {},
                               ExecMode mode = ExecMode::Parallel);

  std::vector<Finding> detect(std::string_view text, const detect::DetectContext& ctx) const override;

  void swap_index(std::shared_ptr<const CorpusIndex> index);
  std::shared_ptr<const CorpusIndex> index() const;
  const AttributionParams& params() const { return params_; }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const CorpusIndex> index_;
  AttributionParams params_;
  ExecMode mode_;
};

// category "attribution", label VERBATIM / SEMI_VERBATIM, score = similarity,
// evidence = source doc_id.
Finding to_finding(const AttributionMatch& m, std::string_view detector_id);

detect::DetectorDescriptor attribution_descriptor(std::string detector_id = "attribution");

}  // namespace guardrail::attribution
