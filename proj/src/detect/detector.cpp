#include "guardrail/detect/detector.hpp"

#include <algorithm>

#include "guardrail/core/tokenize.hpp"

namespace guardrail::detect {

std::string_view to_string(DetectorKind k) {
  switch (k) {
    case DetectorKind::Classification: return "CLASSIFICATION";
    case DetectorKind::Extraction: return "EXTRACTION";
    case DetectorKind::Comparison: return "COMPARISON";
  }
  return "CLASSIFICATION";
}

std::string_view to_string(FailMode m) {
  return m == FailMode::FailOpen ? "FAIL_OPEN" : "FAIL_CLOSED";
}

std::string_view to_string(DetectorStatus s) {
  switch (s) {
    case DetectorStatus::Ok: return "OK";
    case DetectorStatus::Timeout: return "TIMEOUT";
    case DetectorStatus::Error: return "ERROR";
  }
  return "ERROR";
}

std::optional<DetectorKind> parse_detector_kind(std::string_view s) {
  auto u = ascii_upper(s);
  if (u == "CLASSIFICATION") return DetectorKind::Classification;
  if (u == "EXTRACTION") return DetectorKind::Extraction;
  if (u == "COMPARISON") return DetectorKind::Comparison;
  return std::nullopt;
}

std::optional<FailMode> parse_fail_mode(std::string_view s) {
  auto u = ascii_upper(s);
  if (u == "FAIL_OPEN") return FailMode::FailOpen;
  if (u == "FAIL_CLOSED") return FailMode::FailClosed;
  return std::nullopt;
}

bool DetectorDescriptor::applies_to(Direction d) const {
  return directions.empty() || std::find(directions.begin(), directions.end(), d) != directions.end();
}

}  // namespace guardrail::detect
