#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/core/error.hpp"
#include "guardrail/core/types.hpp"

namespace guardrail::policy {

/// Rule predicates are evaluated per finding: a rule fires iff at least one
/// finding satisfies its expression.
///
///   expr    := term { OR term }
///   term    := factor { AND factor }
///   factor  := NOT factor | "(" expr ")" | atom
///   atom    := category(GLOB)
///            | score OP NUMBER
///            | sensitivity OP LEVEL
///            | direction(prompt | response)
///            | SAME_SENTENCE(GLOB, GLOB)
///   OP      := < | <= | > | >= | == | !=
///   LEVEL   := LOW | MODERATE | HIGH
///   GLOB    := category pattern, '*' and '?' wildcards, optionally quoted
///
/// Keywords are case-insensitive; `&&`, `||` and `!` are accepted too.
/// NOT may only wrap score / sensitivity comparisons, which keeps every
/// predicate monotone under the addition of findings.
/// SAME_SENTENCE holds for a finding matching one glob when another spanned
/// finding matching the other glob touches a common sentence; the partner
/// findings are reported alongside.

enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

bool glob_match(std::string_view pattern, std::string_view text);

struct EvalContext {
  const std::vector<Finding>& findings;
  // Assessed privacy level per finding; empty for findings without one.
  const std::vector<std::optional<Sensitivity>>& levels;
  // Sentence indices touched by each finding; empty for spanless findings.
  const std::vector<std::vector<std::size_t>>& sentences;
  Direction direction;
};

class PredicateSyntaxError : public Error {
 public:
  PredicateSyntaxError(std::size_t column, const std::string& message);
  std::size_t column() const { return column_; }  // 1-based, within the expression

 private:
  std::size_t column_;
};

class Predicate {
 public:
  struct Node;

  // MALFORMED_PREDICATE (as PredicateSyntaxError) on any syntax error.
  static Predicate parse(std::string_view expression);

  const std::string& source() const { return source_; }

  // nullopt when finding `i` does not satisfy the predicate; otherwise the
  // other findings that took part (SAME_SENTENCE partners), ascending.
  std::optional<std::vector<std::size_t>> match(const EvalContext& ctx, std::size_t i) const;

  // Every category glob mentioned, in order of appearance.
  std::vector<std::string> category_globs() const;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace guardrail::policy
