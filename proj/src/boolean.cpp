#include <cctype>
#include <set>

#include "tbl/verify.hpp"

namespace tbl {

struct BoolExpr::Node {
  enum class Op { Const, Var, Not, And, Or, Xor } op = Op::Const;
  bool value = false;
  std::string name;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const BoolExpr::Node>;
using Op = BoolExpr::Node::Op;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr root = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::SyntaxError, "formula: " + message,
                TextLocation{1, static_cast<int>(pos_) + 1});
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view chars) {
    skip_space();
    if (pos_ < text_.size() && chars.find(text_[pos_]) != std::string_view::npos) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<BoolExpr::Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr parse_or() {
    NodePtr n = parse_xor();
    while (accept("|+")) n = binary(Op::Or, n, parse_xor());
    return n;
  }

  NodePtr parse_xor() {
    NodePtr n = parse_and();
    while (accept("^")) n = binary(Op::Xor, n, parse_and());
    return n;
  }

  NodePtr parse_and() {
    NodePtr n = parse_unary();
    while (accept("&*")) n = binary(Op::And, n, parse_unary());
    return n;
  }

  NodePtr parse_unary() {
    if (accept("!~")) {
      auto n = std::make_shared<BoolExpr::Node>();
      n->op = Op::Not;
      n->lhs = parse_unary();
      return n;
    }
    return parse_primary();
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    if (accept("(")) {
      NodePtr n = parse_or();
      if (!accept(")")) fail("expected ')'");
      return n;
    }
    auto n = std::make_shared<BoolExpr::Node>();
    const char c = text_[pos_];
    if (c == '0' || c == '1') {
      n->op = Op::Const;
      n->value = c == '1';
      ++pos_;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '.')) {
        ++pos_;
      }
      n->op = Op::Var;
      n->name = std::string(text_.substr(start, pos_ - start));
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool eval(const BoolExpr::Node& n, const std::map<std::string, bool>& env) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: {
      auto it = env.find(n.name);
      if (it == env.end()) throw Error(ErrorCode::UnknownVariable, "unknown variable '" + n.name + "'");
      return it->second;
    }
    case Op::Not: return !eval(*n.lhs, env);
    case Op::And: return eval(*n.lhs, env) && eval(*n.rhs, env);
    case Op::Or: return eval(*n.lhs, env) || eval(*n.rhs, env);
    case Op::Xor: return eval(*n.lhs, env) != eval(*n.rhs, env);
  }
  return false;
}

void collect(const BoolExpr::Node& n, std::set<std::string>& out) {
  if (n.op == Op::Var) out.insert(n.name);
  if (n.lhs) collect(*n.lhs, out);
  if (n.rhs) collect(*n.rhs, out);
}

}  // namespace

BoolExpr BoolExpr::parse(std::string_view text) {
  BoolExpr e;
  e.text_ = std::string(text);
  e.root_ = Parser(text).run();
  return e;
}

bool BoolExpr::evaluate(const std::map<std::string, bool>& env) const { return eval(*root_, env); }

std::vector<std::string> BoolExpr::variables() const {
  std::set<std::string> vars;
  collect(*root_, vars);
  return {vars.begin(), vars.end()};
}

}  // namespace tbl
