#include "guardrail/core/types.hpp"

#include <algorithm>
#include <cctype>

namespace guardrail {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Direction d) {
  return d == Direction::Prompt ? "prompt" : "response";
}

std::string_view to_string(Sensitivity s) {
  switch (s) {
    case Sensitivity::Low: return "LOW";
    case Sensitivity::Moderate: return "MODERATE";
    case Sensitivity::High: return "HIGH";
  }
  return "LOW";
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Pass: return "PASS";
    case Decision::Warn: return "WARN";
    case Decision::Mask: return "MASK";
    case Decision::Block: return "BLOCK";
  }
  return "PASS";
}

std::optional<Direction> parse_direction(std::string_view s) {
  auto u = upper(s);
  if (u == "PROMPT") return Direction::Prompt;
  if (u == "RESPONSE") return Direction::Response;
  return std::nullopt;
}

std::optional<Sensitivity> parse_sensitivity(std::string_view s) {
  auto u = upper(s);
  if (u == "LOW") return Sensitivity::Low;
  if (u == "MODERATE") return Sensitivity::Moderate;
  if (u == "HIGH") return Sensitivity::High;
  return std::nullopt;
}

std::optional<Decision> parse_decision(std::string_view s) {
  auto u = upper(s);
  if (u == "PASS") return Decision::Pass;
  if (u == "WARN") return Decision::Warn;
  if (u == "MASK") return Decision::Mask;
  if (u == "BLOCK") return Decision::Block;
  return std::nullopt;
}

Decision combine(Decision a, Decision b) { return std::max(a, b); }

Sensitivity raise(Sensitivity s) {
  return s == Sensitivity::Low ? Sensitivity::Moderate : Sensitivity::High;
}

Sensitivity lower(Sensitivity s) {
  return s == Sensitivity::High ? Sensitivity::Moderate : Sensitivity::Low;
}

}  // namespace guardrail
