#include "guardrail/detect/registry.hpp"

#include "guardrail/core/error.hpp"

namespace guardrail::detect {

void DetectorRegistry::add(DetectorDescriptor descriptor, std::shared_ptr<const Detector> impl) {
  if (descriptor.detector_id.empty()) {
    throw Error(ErrorCode::InvalidArgument, "detector id must not be empty");
  }
  if (descriptor.timeout_ms <= 0) {
    throw Error(ErrorCode::InvalidArgument,
                "detector '" + descriptor.detector_id + "' needs a positive timeout_ms");
  }
  if (!impl) {
    throw Error(ErrorCode::InvalidArgument,
                "detector '" + descriptor.detector_id + "' has no implementation");
  }
  if (find(descriptor.detector_id) != nullptr) {
    throw Error(ErrorCode::DuplicateDetectorId, descriptor.detector_id);
  }
  entries_.push_back({std::move(descriptor), std::move(impl)});
}

const RegisteredDetector* DetectorRegistry::find(std::string_view detector_id) const {
  for (const auto& e : entries_) {
    if (e.descriptor.detector_id == detector_id) return &e;
  }
  return nullptr;
}

std::vector<std::string> DetectorRegistry::ids() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.descriptor.detector_id);
  return out;
}

}  // namespace guardrail::detect
