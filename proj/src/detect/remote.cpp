#include "guardrail/detect/remote.hpp"

#include <algorithm>
#include <chrono>

#include <httplib.h>
#include <json.hpp>

#include "guardrail/core/utf8.hpp"
#include "guardrail/detect/runner.hpp"

namespace guardrail::detect {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

void set_timeouts(httplib::Client& client, std::chrono::milliseconds budget) {
  auto ms = std::max<long long>(1, budget.count());
  auto sec = static_cast<time_t>(ms / 1000);
  auto usec = static_cast<time_t>((ms % 1000) * 1000);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
}

// Shared by remote_detect and RemoteDetector; throws on any failure.
std::vector<Finding> call(const std::string& endpoint, std::string_view text,
                          std::string_view request_id, std::string_view detector_id,
                          Clock::time_point deadline) {
  auto ep = parse_endpoint(endpoint);
  auto budget = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  if (budget.count() <= 0) throw DetectorTimeout("deadline passed before the call was made");

  httplib::Client client(ep.origin);
  set_timeouts(client, budget);
  auto res = client.Post(ep.path, encode_detect_request(text, request_id), "application/json");
  if (!res) {
    auto err = res.error();
    // Read timeouts surface as Error::Read and can fire just before the
    // deadline (the budget is truncated to whole milliseconds).
    bool out_of_budget = Clock::now() + std::chrono::milliseconds(5) >= deadline;
    if (err == httplib::Error::ConnectionTimeout || out_of_budget) {
      throw DetectorTimeout("remote detector timed out: " + httplib::to_string(err));
    }
    throw std::runtime_error("remote detector unreachable: " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw std::runtime_error("remote detector answered HTTP " + std::to_string(res->status));
  }
  auto findings = decode_detect_response(res->body, detector_id);
  auto problem = check_findings(findings, scalar_length(text));
  if (!problem.empty()) throw std::runtime_error("malformed detector response: " + problem);
  return findings;
}

}  // namespace

std::string encode_detect_request(std::string_view text, std::string_view request_id) {
  return json{{"text", text}, {"request_id", request_id}}.dump();
}

std::string encode_detect_response(std::string_view detector_id, const std::vector<Finding>& findings) {
  json arr = json::array();
  for (const auto& f : findings) {
    json j{{"category", f.category}, {"label", f.label}, {"score", f.score}};
    j["span"] = f.span ? json{{"start", f.span->start}, {"end", f.span->end}} : json(nullptr);
    j["evidence"] = f.evidence ? json(*f.evidence) : json(nullptr);
    arr.push_back(std::move(j));
  }
  return json{{"detector_id", detector_id}, {"findings", std::move(arr)}}.dump();
}

std::vector<Finding> decode_detect_response(std::string_view body, std::string_view detector_id) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed detector response: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("findings") || !doc["findings"].is_array()) {
    throw std::runtime_error("malformed detector response: missing findings array");
  }
  std::vector<Finding> out;
  try {
    for (const auto& j : doc["findings"]) {
      Finding f;
      f.detector_id = std::string(detector_id);
      f.category = j.at("category").get<std::string>();
      f.label = j.value("label", std::string{});
      f.score = j.at("score").get<double>();
      if (j.contains("span") && !j["span"].is_null()) {
        const auto& s = j["span"];
        auto start = s.at("start").get<long long>();
        auto end = s.at("end").get<long long>();
        if (start < 0 || end < 0) throw std::runtime_error("negative span offset");
        f.span = Span{static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
      }
      if (j.contains("evidence") && !j["evidence"].is_null()) {
        f.evidence = j["evidence"].get<std::string>();
      }
      out.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed detector response: ") + e.what());
  }
  return out;
}

RemoteEndpoint parse_endpoint(std::string_view url) {
  auto scheme_end = url.find("://");
  std::size_t host_start = scheme_end == std::string_view::npos ? 0 : scheme_end + 3;
  auto path_start = url.find('/', host_start);
  RemoteEndpoint ep;
  if (path_start == std::string_view::npos) {
    ep.origin = std::string(url);
    ep.path = "/detect";
  } else {
    ep.origin = std::string(url.substr(0, path_start));
    std::string path(url.substr(path_start));
    while (!path.empty() && path.back() == '/') path.pop_back();
    if (path.size() < 7 || path.compare(path.size() - 7, 7, "/detect") != 0) path += "/detect";
    ep.path = std::move(path);
  }
  return ep;
}

DetectorResult remote_detect(std::string_view endpoint, std::string_view text, int timeout_ms,
                             std::string_view request_id, std::string_view detector_id) {
  DetectorResult r;
  r.detector_id = std::string(detector_id);
  auto start = Clock::now();
  auto deadline = start + std::chrono::milliseconds(timeout_ms);
  try {
    r.findings = call(std::string(endpoint), text, request_id, detector_id, deadline);
    r.status = DetectorStatus::Ok;
  } catch (const DetectorTimeout& e) {
    r.status = DetectorStatus::Timeout;
    r.error = e.what();
  } catch (const std::exception& e) {
    r.status = DetectorStatus::Error;
    r.error = e.what();
  }
  if (r.status != DetectorStatus::Ok) r.findings.clear();
  r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return r;
}

RemoteDetector::RemoteDetector(std::string detector_id, std::string endpoint, int timeout_ms)
    : detector_id_(std::move(detector_id)), endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms) {}

std::vector<Finding> RemoteDetector::detect(std::string_view text, const DetectContext& ctx) const {
  auto deadline = std::min(ctx.deadline, Clock::now() + std::chrono::milliseconds(timeout_ms_));
  return call(endpoint_, text, ctx.request_id, detector_id_, deadline);
}

}  // namespace guardrail::detect
