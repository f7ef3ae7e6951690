#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace qsolve {

/// Compiled arithmetic expression in one variable `x`.
///
/// Grammar: + - * / ^ (right associative, binds tighter than unary minus), parentheses,
/// numbers with optional exponent, the constant `pi`, and the functions
/// exp, tanh, sin, cos, sqrt, abs.
class Expression {
 public:
  struct Node;

  /// Throws ParseError carrying the offending character position.
  static Expression parse(std::string_view text);

  double operator()(double x) const;
  const std::string& source() const { return source_; }

 private:
  Expression(std::shared_ptr<const Node> root, std::string source);
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace qsolve
