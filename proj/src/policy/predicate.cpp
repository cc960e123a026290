#include "guardrail/policy/predicate.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include "guardrail/core/tokenize.hpp"

namespace guardrail::policy {

struct Predicate::Node {
  enum class Kind { And, Or, Not, Category, Score, Sensitivity, Direction, SameSentence };
  Kind kind = Kind::Category;
  std::vector<std::shared_ptr<const Node>> kids;
  std::string glob_a, glob_b;
  CmpOp op = CmpOp::Ge;
  double number = 0.0;
  Sensitivity level = Sensitivity::Low;
  Direction direction = Direction::Prompt;
};

namespace {

using Node = Predicate::Node;
using NodePtr = std::shared_ptr<const Node>;

bool glob_at(std::string_view p, std::string_view t) {
  // Iterative wildcard match with single-star backtracking.
  std::size_t pi = 0, ti = 0, star = std::string_view::npos, mark = 0;
  while (ti < t.size()) {
    if (pi < p.size() && (p[pi] == '?' || p[pi] == t[ti])) {
      ++pi;
      ++ti;
    } else if (pi < p.size() && p[pi] == '*') {
      star = pi++;
      mark = ti;
    } else if (star != std::string_view::npos) {
      pi = star + 1;
      ti = ++mark;
    } else {
      return false;
    }
  }
  while (pi < p.size() && p[pi] == '*') ++pi;
  return pi == p.size();
}

template <typename T>
bool compare(CmpOp op, T a, T b) {
  switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
  }
  return false;
}

enum class Tok { Ident, Glob, Number, Op, LParen, RParen, Comma, And, Or, Not, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t column = 1;
};

bool glob_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '.' || c == '*' || c == '?' ||
         c == '-' || c == ':' || c == '/';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    const std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Tok::LParen, "(", col});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", col});
      ++i;
    } else if (c == ',') {
      out.push_back({Tok::Comma, ",", col});
      ++i;
    } else if (c == '&' || c == '|') {
      if (i + 1 >= src.size() || src[i + 1] != c) throw PredicateSyntaxError(col, fmt::format("stray '{}'", c));
      out.push_back({c == '&' ? Tok::And : Tok::Or, std::string(2, c), col});
      i += 2;
    } else if (c == '<' || c == '>' || c == '=' || c == '!') {
      std::string op(1, c);
      if (i + 1 < src.size() && src[i + 1] == '=') op.push_back('=');
      i += op.size();
      if (op == "!") {
        out.push_back({Tok::Not, op, col});
      } else if (op == "=") {
        throw PredicateSyntaxError(col, "use '==' for equality");
      } else {
        out.push_back({Tok::Op, op, col});
      }
    } else if (c == '"' || c == '\'') {
      auto close = src.find(c, i + 1);
      if (close == std::string_view::npos) throw PredicateSyntaxError(col, "unterminated quote");
      out.push_back({Tok::Glob, std::string(src.substr(i + 1, close - i - 1)), col});
      i = close + 1;
    } else if (glob_char(c)) {
      std::size_t j = i;
      while (j < src.size() && glob_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      std::string upper = ascii_upper(word);
      Tok kind = Tok::Glob;
      if (upper == "AND") {
        kind = Tok::And;
      } else if (upper == "OR") {
        kind = Tok::Or;
      } else if (upper == "NOT") {
        kind = Tok::Not;
      } else if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '.') {
        kind = Tok::Number;
      } else if (std::all_of(word.begin(), word.end(), [](char ch) {
                   return std::isalnum(static_cast<unsigned char>(ch)) != 0 || ch == '_';
                 })) {
        kind = Tok::Ident;
      }
      out.push_back({kind, std::move(word), col});
      i = j;
    } else {
      throw PredicateSyntaxError(col, fmt::format("unexpected character '{}'", c));
    }
  }
  out.push_back({Tok::End, "", src.size() + 1});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr parse() {
    auto n = expr();
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
    return n;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw PredicateSyntaxError(t.column, msg); }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      fail(peek(), fmt::format("expected {} but found '{}'", what, peek().kind == Tok::End ? "end" : peek().text));
    }
    return next();
  }

  NodePtr expr() {
    auto left = term();
    while (peek().kind == Tok::Or) {
      next();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Or;
      n->kids = {left, term()};
      left = n;
    }
    return left;
  }

  NodePtr term() {
    auto left = factor();
    while (peek().kind == Tok::And) {
      next();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::And;
      n->kids = {left, factor()};
      left = n;
    }
    return left;
  }

  static bool negatable(const Node& n) {
    switch (n.kind) {
      case Node::Kind::Score:
      case Node::Kind::Sensitivity: return true;
      case Node::Kind::And:
      case Node::Kind::Or:
      case Node::Kind::Not:
        return std::all_of(n.kids.begin(), n.kids.end(), [](const NodePtr& k) { return negatable(*k); });
      default: return false;
    }
  }

  NodePtr factor() {
    if (peek().kind == Tok::Not) {
      const Token& t = next();
      auto inner = factor();
      if (!negatable(*inner)) fail(t, "NOT may only wrap score or sensitivity comparisons");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Not;
      n->kids = {inner};
      return n;
    }
    if (peek().kind == Tok::LParen) {
      next();
      auto n = expr();
      expect(Tok::RParen, "')'");
      return n;
    }
    return atom();
  }

  std::string glob() {
    if (peek().kind != Tok::Glob && peek().kind != Tok::Ident) {
      fail(peek(), "expected a category pattern");
    }
    auto g = next().text;
    if (g.empty()) fail(toks_[pos_ - 1], "empty category pattern");
    return g;
  }

  CmpOp op() {
    const Token& t = expect(Tok::Op, "a comparison operator");
    if (t.text == "<") return CmpOp::Lt;
    if (t.text == "<=") return CmpOp::Le;
    if (t.text == ">") return CmpOp::Gt;
    if (t.text == ">=") return CmpOp::Ge;
    if (t.text == "==") return CmpOp::Eq;
    if (t.text == "!=") return CmpOp::Ne;
    fail(t, "unknown operator '" + t.text + "'");
  }

  NodePtr atom() {
    if (peek().kind != Tok::Ident) {
      fail(peek(), fmt::format("expected an atom but found '{}'", peek().kind == Tok::End ? "end" : peek().text));
    }
    const Token& head = next();
    const std::string name = ascii_lower(head.text);
    auto n = std::make_shared<Node>();
    if (name == "category") {
      n->kind = Node::Kind::Category;
      expect(Tok::LParen, "'('");
      n->glob_a = glob();
      expect(Tok::RParen, "')'");
    } else if (name == "same_sentence") {
      n->kind = Node::Kind::SameSentence;
      expect(Tok::LParen, "'('");
      n->glob_a = glob();
      expect(Tok::Comma, "','");
      n->glob_b = glob();
      expect(Tok::RParen, "')'");
    } else if (name == "direction") {
      n->kind = Node::Kind::Direction;
      expect(Tok::LParen, "'('");
      const Token& d = next();
      auto dir = parse_direction(d.text);
      if (!dir) fail(d, "direction must be prompt or response");
      n->direction = *dir;
      expect(Tok::RParen, "')'");
    } else if (name == "score") {
      n->kind = Node::Kind::Score;
      n->op = op();
      const Token& num = expect(Tok::Number, "a number");
      const char* first = num.text.data();
      const char* last = first + num.text.size();
      auto [ptr, ec] = std::from_chars(first, last, n->number);
      if (ec != std::errc() || ptr != last) fail(num, "bad number '" + num.text + "'");
    } else if (name == "sensitivity") {
      n->kind = Node::Kind::Sensitivity;
      n->op = op();
      const Token& lv = next();
      auto level = parse_sensitivity(lv.text);
      if (!level) fail(lv, "sensitivity level must be LOW, MODERATE or HIGH");
      n->level = *level;
    } else {
      fail(head, "unknown atom '" + head.text + "'");
    }
    return n;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool eval(const Node& n, const EvalContext& ctx, std::size_t i, std::set<std::size_t>& partners) {
  const Finding& f = ctx.findings[i];
  switch (n.kind) {
    case Node::Kind::And: {
      std::set<std::size_t> a, b;
      if (!eval(*n.kids[0], ctx, i, a) || !eval(*n.kids[1], ctx, i, b)) return false;
      partners.insert(a.begin(), a.end());
      partners.insert(b.begin(), b.end());
      return true;
    }
    case Node::Kind::Or: {
      bool l = eval(*n.kids[0], ctx, i, partners);
      bool r = eval(*n.kids[1], ctx, i, partners);
      return l || r;
    }
    case Node::Kind::Not: {
      std::set<std::size_t> ignored;
      return !eval(*n.kids[0], ctx, i, ignored);
    }
    case Node::Kind::Category: return glob_at(n.glob_a, f.category);
    case Node::Kind::Score: return compare(n.op, f.score, n.number);
    case Node::Kind::Sensitivity: {
      const auto& lv = ctx.levels[i];
      return lv.has_value() && compare(n.op, static_cast<int>(*lv), static_cast<int>(n.level));
    }
    case Node::Kind::Direction: return ctx.direction == n.direction;
    case Node::Kind::SameSentence: {
      const bool is_a = glob_at(n.glob_a, f.category);
      const bool is_b = glob_at(n.glob_b, f.category);
      const auto& mine = ctx.sentences[i];
      if ((!is_a && !is_b) || mine.empty()) return false;
      bool found = false;
      for (std::size_t j = 0; j < ctx.findings.size(); ++j) {
        if (j == i) continue;
        const auto& cat = ctx.findings[j].category;
        if (!((is_a && glob_at(n.glob_b, cat)) || (is_b && glob_at(n.glob_a, cat)))) continue;
        const auto& theirs = ctx.sentences[j];
        bool shared = std::any_of(mine.begin(), mine.end(), [&](std::size_t s) {
          return std::find(theirs.begin(), theirs.end(), s) != theirs.end();
        });
        if (shared) {
          partners.insert(j);
          found = true;
        }
      }
      return found;
    }
  }
  return false;
}

void collect_globs(const Node& n, std::vector<std::string>& out) {
  if (n.kind == Node::Kind::Category || n.kind == Node::Kind::SameSentence) out.push_back(n.glob_a);
  if (n.kind == Node::Kind::SameSentence) out.push_back(n.glob_b);
  for (const auto& k : n.kids) collect_globs(*k, out);
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view text) { return glob_at(pattern, text); }

PredicateSyntaxError::PredicateSyntaxError(std::size_t column, const std::string& message)
    : Error(ErrorCode::MalformedPredicate, fmt::format("column {}: {}", column, message)), column_(column) {}

Predicate Predicate::parse(std::string_view expression) {
  Predicate p;
  p.source_ = std::string(expression);
  p.root_ = Parser(lex(expression)).parse();
  return p;
}

std::optional<std::vector<std::size_t>> Predicate::match(const EvalContext& ctx, std::size_t i) const {
  std::set<std::size_t> partners;
  if (!root_ || !eval(*root_, ctx, i, partners)) return std::nullopt;
  return std::vector<std::size_t>(partners.begin(), partners.end());
}

std::vector<std::string> Predicate::category_globs() const {
  std::vector<std::string> out;
  if (root_) collect_globs(*root_, out);
  return out;
}

}  // namespace guardrail::policy
