#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "guardrail/detect/detector.hpp"

namespace guardrail::detect {

// Remote detect wire protocol:
//   POST <endpoint>/detect   {"text": str, "request_id": str}
//   200 {"detector_id": str, "findings": [{"category", "label", "score",
//        "span": {"start","end"} | null, "evidence": str | null}]}
std::string encode_detect_request(std::string_view text, std::string_view request_id);
std::string encode_detect_response(std::string_view detector_id, const std::vector<Finding>& findings);
// Throws std::runtime_error on a malformed body.
std::vector<Finding> decode_detect_response(std::string_view body, std::string_view detector_id);

struct RemoteEndpoint {
  std::string origin;  // scheme://host:port
  std::string path;    // always ends in /detect
};
RemoteEndpoint parse_endpoint(std::string_view url);

// One blocking call; every failure is encoded in the returned status.
DetectorResult remote_detect(std::string_view endpoint, std::string_view text, int timeout_ms,
                             std::string_view request_id = "", std::string_view detector_id = "remote");

class RemoteDetector : public Detector {
 public:
  RemoteDetector(std::string detector_id, std::string endpoint, int timeout_ms);

  // Throws DetectorTimeout past the deadline, std::runtime_error otherwise.
  std::vector<Finding> detect(std::string_view text, const DetectContext& ctx) const override;

 private:
  std::string detector_id_;
  std::string endpoint_;
  int timeout_ms_;
};

}  // namespace guardrail::detect
