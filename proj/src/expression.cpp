#include "collar/expression.hpp"

#include <cctype>
#include <charconv>
#include <numbers>
#include <string>

#include "collar/error.hpp"

namespace collar {

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  auto node = std::make_shared<Expression::Node>();
  node->op = op;
  node->value = value;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

  bool uses_t() const { return uses_t_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ExpressionSyntax, "expression '" + std::string(text_) + "': " + msg +
                                                 " at column " + std::to_string(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Op::Add, lhs, term());
      else if (accept('-')) lhs = make(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return make(Op::Constant, nullptr, nullptr, value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "t") {
      uses_t_ = true;
      return make(Op::Variable);
    }
    if (name == "pi") return make(Op::Constant, nullptr, nullptr, std::numbers::pi);
    Op op;
    if (name == "exp") op = Op::Exp;
    else if (name == "log") op = Op::Log;
    else if (name == "sin") op = Op::Sin;
    else if (name == "cos") op = Op::Cos;
    else if (name == "sinh") op = Op::Sinh;
    else if (name == "cosh") op = Op::Cosh;
    else if (name == "pow") op = Op::Pow;
    else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    NodePtr first = expr();
    NodePtr second;
    if (op == Op::Pow) {
      expect(',');
      second = expr();
    }
    expect(')');
    return make(op, first, second);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  bool uses_t_ = false;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser parser(text);
  NodePtr root = parser.parse();
  return Expression(std::move(root), std::string(text), parser.uses_t());
}

}  // namespace collar
