#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "guardrail/core/types.hpp"

namespace guardrail::vet {

struct FieldVerdict {
  std::string field;
  Verdict verdict;  // timings are not carried, so reports are reproducible

  friend bool operator==(const FieldVerdict&, const FieldVerdict&) = default;
};

struct FileReport {
  std::string path;
  std::vector<FieldVerdict> fields;
  std::optional<std::string> error;

  Decision worst() const;
  friend bool operator==(const FileReport&, const FileReport&) = default;
};

/// One MASK / BLOCK finding for a review bot. The span is relative to the
/// field text; it is absent for violations without a located finding.
struct Annotation {
  std::string file;
  std::string field;
  std::optional<Span> span;
  std::string category;
  std::string label;
  std::string policy_id;
  std::string rule_id;
  Decision action = Decision::Block;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

enum class ExitCode { Clean = 0, Violations = 1, Failure = 2 };

struct VetReport {
  std::vector<FileReport> files;  // sorted by path

  std::vector<Annotation> annotations() const;
  // 1 if any field is MASK/BLOCK; else 2 if any file failed (or there were
  // no inputs); else 0.
  ExitCode exit_code() const;

  friend bool operator==(const VetReport&, const VetReport&) = default;
};

/// Report JSON:
///   {"files": [{"path", "error": str | null, "decision",
///               "fields": [{"field", "verdict": <Verdict JSON>}]}],
///    "summary": {"files", "errors", "pass", "warn", "mask", "block", "exit_code"}}
nlohmann::json to_json(const VetReport& r);
VetReport report_from_json(const nlohmann::json& j);

/// Annotations JSON:
///   {"annotations": [{"file", "field", "span": {"start","end"} | null,
///                     "category", "label", "policy_id", "rule_id", "action"}]}
nlohmann::json annotations_json(const VetReport& r);

std::string render_text(const VetReport& r);

}  // namespace guardrail::vet
