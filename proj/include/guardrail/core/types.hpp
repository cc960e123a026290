#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace guardrail {

enum class Direction { Prompt, Response };

enum class Sensitivity { Low = 0, Moderate = 1, High = 2 };

// Ordered so that std::max picks the safety-maximal outcome.
enum class Decision { Pass = 0, Warn = 1, Mask = 2, Block = 3 };

std::string_view to_string(Direction d);
std::string_view to_string(Sensitivity s);
std::string_view to_string(Decision d);

std::optional<Direction> parse_direction(std::string_view s);
std::optional<Sensitivity> parse_sensitivity(std::string_view s);
std::optional<Decision> parse_decision(std::string_view s);

Decision combine(Decision a, Decision b);
Sensitivity raise(Sensitivity s);
Sensitivity lower(Sensitivity s);

/// Half-open range [start, end) measured in unicode scalar values.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool overlaps(const Span& other) const { return start < other.end && other.start < end; }

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

struct Finding {
  std::string detector_id;
  std::string category;
  std::optional<Span> span;
  double score = 0.0;
  std::string label;
  std::optional<Sensitivity> sensitivity;
  std::optional<std::string> evidence;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ShieldRequest {
  std::string request_id;
  std::string text;
  Direction direction = Direction::Prompt;
  std::string tenant;
  std::string jurisdiction = "default";
  std::vector<std::string> policy_ids;
  std::optional<std::set<std::string>> detector_allowlist;
};

struct RuleFiring {
  std::string policy_id;
  std::string rule_id;
  Decision action = Decision::Pass;
  std::vector<std::size_t> matched;  // indices into the aggregated findings
  std::string message;

  friend bool operator==(const RuleFiring&, const RuleFiring&) = default;
};

struct Verdict {
  Decision decision = Decision::Pass;
  std::string output_text;
  std::vector<std::string> warnings;
  std::vector<RuleFiring> audit;
  std::map<std::string, double> timings;
  std::vector<std::string> degraded;
  std::vector<Finding> findings;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

}  // namespace guardrail
