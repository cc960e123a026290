#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "guardrail/detect/detector.hpp"

namespace guardrail::detect {

struct RegisteredDetector {
  DetectorDescriptor descriptor;
  std::shared_ptr<const Detector> impl;
};

// Insertion-ordered; ids are unique. Not synchronized: build it, then share
// it read-only (the orchestrator swaps whole registries).
class DetectorRegistry {
 public:
  // DUPLICATE_DETECTOR_ID on a repeated id; INVALID_ARGUMENT on timeout_ms <= 0.
  void add(DetectorDescriptor descriptor, std::shared_ptr<const Detector> impl);

  const RegisteredDetector* find(std::string_view detector_id) const;
  const std::vector<RegisteredDetector>& entries() const { return entries_; }
  std::vector<std::string> ids() const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<RegisteredDetector> entries_;
};

}  // namespace guardrail::detect
