#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/detect/registry.hpp"
#include "guardrail/detect/worker_pool.hpp"

namespace guardrail::detect {

// Dispatches every detector onto the pool at once and waits for each until
// its own deadline (dispatch time + timeout_ms). A detector that misses its
// deadline is reported as TIMEOUT and its eventual output is discarded.
// Results come back in the order of `detectors`; failures never propagate.
std::vector<DetectorResult> run_detectors(std::span<const RegisteredDetector* const> detectors,
                                          std::string_view text, const std::string& request_id,
                                          WorkerPool& pool);

DetectorResult run_detector(const RegisteredDetector& detector, std::string_view text,
                            const std::string& request_id, WorkerPool& pool);

// Findings that violate the Finding invariants (score outside [0,1], span
// outside the text) make the whole result an ERROR.
std::string check_findings(const std::vector<Finding>& findings, std::size_t text_scalars);

}  // namespace guardrail::detect
