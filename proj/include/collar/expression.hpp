#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <string_view>

namespace collar {

/// Profile expression in the variable t. Grammar: numbers, `t`, `pi`,
/// + - * /, unary minus, parentheses, exp log sin cos sinh cosh, pow(a, b).
class Expression {
 public:
  enum class Op { Constant, Variable, Add, Sub, Mul, Div, Neg, Exp, Log, Sin, Cos, Sinh, Cosh, Pow };

  struct Node {
    Op op = Op::Constant;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  /// Throws Error(ExpressionSyntax) naming the offending column.
  static Expression parse(std::string_view text);

  template <class Scalar>
  Scalar evaluate(const Scalar& t) const {
    return eval(*root_, t);
  }

  bool depends_on_t() const { return depends_on_t_; }
  const std::string& text() const { return text_; }

 private:
  Expression(std::shared_ptr<const Node> root, std::string text, bool depends)
      : root_(std::move(root)), text_(std::move(text)), depends_on_t_(depends) {}

  template <class Scalar>
  static Scalar eval(const Node& node, const Scalar& t) {
    using std::cos;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sinh;
    switch (node.op) {
      case Op::Constant: return Scalar(node.value);
      case Op::Variable: return t;
      case Op::Add: return eval(*node.lhs, t) + eval(*node.rhs, t);
      case Op::Sub: return eval(*node.lhs, t) - eval(*node.rhs, t);
      case Op::Mul: return eval(*node.lhs, t) * eval(*node.rhs, t);
      case Op::Div: return eval(*node.lhs, t) / eval(*node.rhs, t);
      case Op::Neg: return -eval(*node.lhs, t);
      case Op::Exp: return exp(eval(*node.lhs, t));
      case Op::Log: return log(eval(*node.lhs, t));
      case Op::Sin: return sin(eval(*node.lhs, t));
      case Op::Cos: return cos(eval(*node.lhs, t));
      case Op::Sinh: return sinh(eval(*node.lhs, t));
      case Op::Cosh: return cosh(eval(*node.lhs, t));
      case Op::Pow: return pow(eval(*node.lhs, t), eval(*node.rhs, t));
    }
    return Scalar(0.0);
  }

  std::shared_ptr<const Node> root_;
  std::string text_;
  bool depends_on_t_ = false;
};

}  // namespace collar
