#include "nsbf/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nsbf/error.hpp"

namespace nsbf {

class ExpressionBuilder {
 public:
  static std::int32_t push(Expression& e, Expression::Node n) {
    e.nodes_.push_back(n);
    return static_cast<std::int32_t>(e.nodes_.size() - 1);
  }
};

namespace {

using Op = Expression::Op;
using Func = Expression::Func;

struct FuncName {
  std::string_view name;
  Func func;
};

constexpr FuncName kFunctions[] = {
    {"exp", Func::Exp},   {"sin", Func::Sin},   {"cos", Func::Cos},   {"sinh", Func::Sinh},
    {"cosh", Func::Cosh}, {"sqrt", Func::Sqrt}, {"log", Func::Log},   {"abs", Func::Abs},
};

std::string_view func_name(Func f) {
  for (const auto& fn : kFunctions)
    if (fn.func == f) return fn.name;
  return "?";
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expression run() {
    if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw ParseError(0, "expression", "empty input");
    parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(pos_, "operator or end of input", describe_here());
    return std::move(expr_);
  }

 private:
  // Evaluation recurses on tree height, which long operator chains grow
  // without any nesting, so height is capped separately from depth_.
  std::int32_t push(Expression::Node n) {
    int h = 1;
    if (n.lhs >= 0) h = std::max(h, 1 + height_[static_cast<std::size_t>(n.lhs)]);
    if (n.rhs >= 0) h = std::max(h, 1 + height_[static_cast<std::size_t>(n.rhs)]);
    if (h > kMaxHeight) throw ParseError(pos_, "shorter expression", "expression tree too deep");
    height_.push_back(h);
    return ExpressionBuilder::push(expr_, n);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r' ||
                                  src_[pos_] == '\n'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string describe_here() const {
    if (pos_ >= src_.size()) return "found end of input";
    return std::string("found '") + src_[pos_] + "'";
  }

  std::int32_t parse_expr() {
    // Recursion depth is bounded so hostile input cannot blow the stack.
    if (++depth_ > kMaxDepth) throw ParseError(pos_, "shallower nesting", "expression too deep");
    std::int32_t lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        std::int32_t rhs = parse_term();
        lhs = push({Op::Add, Func::Exp, 0.0, lhs, rhs});
      } else if (accept('-')) {
        std::int32_t rhs = parse_term();
        lhs = push({Op::Sub, Func::Exp, 0.0, lhs, rhs});
      } else {
        break;
      }
    }
    --depth_;
    return lhs;
  }

  std::int32_t parse_term() {
    std::int32_t lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        std::int32_t rhs = parse_unary();
        lhs = push({Op::Mul, Func::Exp, 0.0, lhs, rhs});
      } else if (accept('/')) {
        std::int32_t rhs = parse_unary();
        lhs = push({Op::Div, Func::Exp, 0.0, lhs, rhs});
      } else {
        break;
      }
    }
    return lhs;
  }

  std::int32_t parse_unary() {
    if (++depth_ > kMaxDepth) throw ParseError(pos_, "shallower nesting", "expression too deep");
    std::int32_t r;
    if (accept('-')) {
      std::int32_t operand = parse_unary();
      r = push({Op::Neg, Func::Exp, 0.0, operand, -1});
    } else if (accept('+')) {
      r = parse_unary();
    } else {
      r = parse_power();
    }
    --depth_;
    return r;
  }

  std::int32_t parse_power() {
    std::int32_t base = parse_primary();
    if (accept('^')) {
      std::int32_t exponent = parse_unary();
      return push({Op::Pow, Func::Exp, 0.0, base, exponent});
    }
    return base;
  }

  std::int32_t parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "number, identifier or '('", "found end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      std::int32_t inner = parse_expr();
      if (!accept(')')) throw ParseError(pos_, "')'", describe_here());
      return inner;
    }
    if (is_digit(c) || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    throw ParseError(pos_, "number, identifier or '('", describe_here());
  }

  std::int32_t parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ - start == 1 && src_[start] == '.') throw ParseError(start, "digits", "lone '.'");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && is_digit(src_[p])) {
        while (p < src_.size() && is_digit(src_[p])) ++p;
        pos_ = p;
      } else {
        throw ParseError(p, "exponent digits", "malformed number");
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_ || !std::isfinite(v))
      throw ParseError(start, "finite number", "number out of range");
    return push({Op::Number, Func::Exp, v, -1, -1});
  }

  std::int32_t parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return push({Op::Variable, Func::Exp, 0.0, -1, -1});
    if (name == "pi") return push({Op::Number, Func::Exp, std::numbers::pi, -1, -1});
    if (name == "e") return push({Op::Number, Func::Exp, std::numbers::e, -1, -1});
    for (const auto& fn : kFunctions) {
      if (fn.name == name) {
        if (!accept('(')) throw ParseError(pos_, "'(' after function name", describe_here());
        std::int32_t arg = parse_expr();
        if (!accept(')')) throw ParseError(pos_, "')'", describe_here());
        return push({Op::Call, fn.func, 0.0, arg, -1});
      }
    }
    throw UnknownIdentifier(start, std::string(name));
  }

  static constexpr int kMaxDepth = 512;
  static constexpr int kMaxHeight = 4096;
  std::vector<int> height_;
  std::string_view src_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  Expression expr_;
};

double apply(Func f, double a) {
  switch (f) {
    case Func::Exp: return std::exp(a);
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Sinh: return std::sinh(a);
    case Func::Cosh: return std::cosh(a);
    case Func::Sqrt:
      if (a < 0) throw DomainError("sqrt of negative argument");
      return std::sqrt(a);
    case Func::Log:
      if (a <= 0) throw DomainError("log of non-positive argument");
      return std::log(a);
    case Func::Abs: return std::fabs(a);
  }
  return 0.0;
}

double eval_node(const std::vector<Expression::Node>& nodes, std::int32_t i, double x) {
  const auto& n = nodes[static_cast<std::size_t>(i)];
  double r = 0.0;
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::Variable: return x;
    case Op::Add: r = eval_node(nodes, n.lhs, x) + eval_node(nodes, n.rhs, x); break;
    case Op::Sub: r = eval_node(nodes, n.lhs, x) - eval_node(nodes, n.rhs, x); break;
    case Op::Mul: r = eval_node(nodes, n.lhs, x) * eval_node(nodes, n.rhs, x); break;
    case Op::Div: {
      const double den = eval_node(nodes, n.rhs, x);
      if (den == 0.0) throw DomainError("division by zero");
      r = eval_node(nodes, n.lhs, x) / den;
      break;
    }
    case Op::Pow: {
      const double base = eval_node(nodes, n.lhs, x);
      const double ex = eval_node(nodes, n.rhs, x);
      if (base < 0 && std::trunc(ex) != ex) throw DomainError("non-integer power of negative base");
      if (base == 0 && ex < 0) throw DomainError("negative power of zero");
      r = std::pow(base, ex);
      break;
    }
    case Op::Neg: return -eval_node(nodes, n.lhs, x);
    case Op::Call: r = apply(n.func, eval_node(nodes, n.lhs, x)); break;
  }
  if (!std::isfinite(r)) throw EvaluationError("overflow while evaluating expression");
  return r;
}

void print_node(const std::vector<Expression::Node>& nodes, std::int32_t i, std::ostringstream& os) {
  const auto& n = nodes[static_cast<std::size_t>(i)];
  auto binary = [&](char sym) {
    os << '(';
    print_node(nodes, n.lhs, os);
    os << ' ' << sym << ' ';
    print_node(nodes, n.rhs, os);
    os << ')';
  };
  switch (n.op) {
    case Op::Number: {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      os << '(' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << ')';
      break;
    }
    case Op::Variable: os << 'x'; break;
    case Op::Add: binary('+'); break;
    case Op::Sub: binary('-'); break;
    case Op::Mul: binary('*'); break;
    case Op::Div: binary('/'); break;
    case Op::Pow: binary('^'); break;
    case Op::Neg:
      os << "(-";
      print_node(nodes, n.lhs, os);
      os << ')';
      break;
    case Op::Call:
      os << func_name(n.func) << '(';
      print_node(nodes, n.lhs, os);
      os << ')';
      break;
  }
}

}  // namespace

double Expression::evaluate(double x) const {
  if (!std::isfinite(x)) throw DomainError("non-finite evaluation point");
  return eval_node(nodes_, static_cast<std::int32_t>(nodes_.size() - 1), x);
}

std::string Expression::to_string() const {
  std::ostringstream os;
  print_node(nodes_, static_cast<std::int32_t>(nodes_.size() - 1), os);
  return os.str();
}

Expression parse(std::string_view source) { return Parser(source).run(); }

}  // namespace nsbf
