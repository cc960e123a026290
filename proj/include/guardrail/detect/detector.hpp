#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/core/types.hpp"

namespace guardrail::detect {

enum class DetectorKind { Classification, Extraction, Comparison };
enum class FailMode { FailOpen, FailClosed };
enum class DetectorStatus { Ok, Timeout, Error };

std::string_view to_string(DetectorKind k);
std::string_view to_string(FailMode m);
std::string_view to_string(DetectorStatus s);
std::optional<DetectorKind> parse_detector_kind(std::string_view s);
std::optional<FailMode> parse_fail_mode(std::string_view s);

constexpr int kDefaultTimeoutMs = 2000;

struct DetectorDescriptor {
  std::string detector_id;
  DetectorKind kind = DetectorKind::Classification;
  std::vector<std::string> categories;
  int timeout_ms = kDefaultTimeoutMs;
  // Unset means "derive from loaded policies" (see effective_fail_mode).
  std::optional<FailMode> fail_mode;
  // Empty means the detector runs for both prompts and responses.
  std::vector<Direction> directions;

  bool applies_to(Direction d) const;
};

struct DetectorResult {
  std::string detector_id;
  std::vector<Finding> findings;
  double elapsed_ms = 0.0;
  DetectorStatus status = DetectorStatus::Ok;
  std::string error;
};

struct DetectContext {
  std::string request_id;
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

// Thrown by detectors that notice their own deadline passing (remote calls).
class DetectorTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stateless text annotator. Implementations must be safe to call from
/// many threads at once and must not keep per-call mutable state.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<Finding> detect(std::string_view text, const DetectContext& ctx) const = 0;
};

}  // namespace guardrail::detect
