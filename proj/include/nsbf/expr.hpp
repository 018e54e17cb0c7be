#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nsbf {

/// Immutable AST for a scalar potential q(x). Nodes live in a flat arena and
/// refer to their children by index; the root is the last node.
class Expression {
 public:
  enum class Op : std::uint8_t { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
  enum class Func : std::uint8_t { Exp, Sin, Cos, Sinh, Cosh, Sqrt, Log, Abs };

  struct Node {
    Op op;
    Func func = Func::Exp;
    double value = 0.0;
    std::int32_t lhs = -1;
    std::int32_t rhs = -1;
  };

  /// Throws DomainError for log/sqrt/pow outside the real domain and
  /// EvaluationError when the result is not finite.
  double evaluate(double x) const;

  /// Fully parenthesised text; parse(to_string()) evaluates identically.
  std::string to_string() const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }

 private:
  friend class ExpressionBuilder;
  std::vector<Node> nodes_;
};

/// Parses `source` using the grammar
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | '+' unary | power
///   power := primary ('^' unary)?
/// so that '^' is right-associative and binds tighter than unary minus.
/// Throws ParseError (with byte offset) or UnknownIdentifier.
Expression parse(std::string_view source);

}  // namespace nsbf
