#include "guardrail/detect/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <memory>

#include <fmt/format.h>

#include "guardrail/core/utf8.hpp"

namespace guardrail::detect {
namespace {

using Clock = std::chrono::steady_clock;

struct Slot {
  std::promise<std::vector<Finding>> promise;
  std::atomic<bool> abandoned{false};
  std::atomic<Clock::rep> finished{0};
};

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

struct Pending {
  const RegisteredDetector* detector;
  std::shared_ptr<Slot> slot;
  std::future<std::vector<Finding>> future;
  Clock::time_point deadline;
  bool dispatched = true;
  std::string dispatch_error;
};

}  // namespace

std::string check_findings(const std::vector<Finding>& findings, std::size_t text_scalars) {
  for (const auto& f : findings) {
    if (!std::isfinite(f.score) || f.score < 0.0 || f.score > 1.0) {
      return fmt::format("finding '{}' has score {} outside [0,1]", f.category, f.score);
    }
    if (f.span && (f.span->start >= f.span->end || f.span->end > text_scalars)) {
      return fmt::format("finding '{}' has span [{}, {}) outside text of {} scalars", f.category,
                         f.span->start, f.span->end, text_scalars);
    }
  }
  return {};
}

std::vector<DetectorResult> run_detectors(std::span<const RegisteredDetector* const> detectors,
                                          std::string_view text, const std::string& request_id,
                                          WorkerPool& pool) {
  auto shared_text = std::make_shared<const std::string>(text);
  const std::size_t text_scalars = scalar_length(text);
  const auto start = Clock::now();

  std::vector<Pending> pending;
  pending.reserve(detectors.size());
  for (const auto* d : detectors) {
    Pending p;
    p.detector = d;
    p.slot = std::make_shared<Slot>();
    p.future = p.slot->promise.get_future();
    p.deadline = start + std::chrono::milliseconds(d->descriptor.timeout_ms);
    DetectContext ctx{request_id, p.deadline};
    try {
      pool.submit([slot = p.slot, impl = d->impl, shared_text, ctx] {
        if (slot->abandoned.load()) return;
        try {
          auto findings = impl->detect(*shared_text, ctx);
          slot->finished = Clock::now().time_since_epoch().count();
          slot->promise.set_value(std::move(findings));
        } catch (...) {
          slot->finished = Clock::now().time_since_epoch().count();
          slot->promise.set_exception(std::current_exception());
        }
      });
    } catch (const std::exception& e) {
      p.dispatched = false;
      p.dispatch_error = e.what();
    }
    pending.push_back(std::move(p));
  }

  std::vector<DetectorResult> results;
  results.reserve(pending.size());
  for (auto& p : pending) {
    DetectorResult r;
    r.detector_id = p.detector->descriptor.detector_id;
    if (!p.dispatched) {
      r.status = DetectorStatus::Error;
      r.error = p.dispatch_error;
      results.push_back(std::move(r));
      continue;
    }
    if (p.future.wait_until(p.deadline) != std::future_status::ready) {
      p.slot->abandoned = true;
      r.status = DetectorStatus::Timeout;
      r.elapsed_ms = ms_between(start, Clock::now());
      r.error = fmt::format("no response within {} ms", p.detector->descriptor.timeout_ms);
      results.push_back(std::move(r));
      continue;
    }
    r.elapsed_ms = ms_between(start, Clock::time_point(Clock::duration(p.slot->finished.load())));
    try {
      auto findings = p.future.get();
      auto problem = check_findings(findings, text_scalars);
      if (!problem.empty()) {
        r.status = DetectorStatus::Error;
        r.error = problem;
      } else {
        for (auto& f : findings) f.detector_id = r.detector_id;
        r.findings = std::move(findings);
      }
    } catch (const DetectorTimeout& e) {
      r.status = DetectorStatus::Timeout;
      r.error = e.what();
    } catch (const std::exception& e) {
      r.status = DetectorStatus::Error;
      r.error = e.what();
    } catch (...) {
      r.status = DetectorStatus::Error;
      r.error = "unknown exception";
    }
    results.push_back(std::move(r));
  }
  return results;
}

DetectorResult run_detector(const RegisteredDetector& detector, std::string_view text,
                            const std::string& request_id, WorkerPool& pool) {
  const RegisteredDetector* one[] = {&detector};
  return std::move(run_detectors(one, text, request_id, pool).front());
}

}  // namespace guardrail::detect
