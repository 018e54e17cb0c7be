#include <cmath>
#include <memory>
#include <random>
#include <string>

#include "doctest.h"
#include "nsbf/error.hpp"
#include "nsbf/expr.hpp"

using nsbf::parse;

namespace {

// Independent random expression trees with their own evaluator and a printer
// that emits the fewest parentheses the grammar allows.
struct Tree {
  enum Kind { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Exp } kind;
  double value = 0.0;
  std::unique_ptr<Tree> a, b;

  // `bad` records a division by zero, a negative power of zero or a
  // non-finite intermediate; the library must reject exactly those.
  double eval(double x, bool& bad) const {
    double r = 0.0;
    switch (kind) {
      case Num: return value;
      case Var: return x;
      case Add: r = a->eval(x, bad) + b->eval(x, bad); break;
      case Sub: r = a->eval(x, bad) - b->eval(x, bad); break;
      case Mul: r = a->eval(x, bad) * b->eval(x, bad); break;
      case Div: {
        const double n = a->eval(x, bad), d = b->eval(x, bad);
        if (d == 0.0) bad = true;
        r = n / d;
        break;
      }
      case Pow: {
        const double base = a->eval(x, bad), ex = b->eval(x, bad);
        if (base == 0.0 && ex < 0) bad = true;
        r = std::pow(base, ex);
        break;
      }
      case Neg: return -a->eval(x, bad);
      case Sin: r = std::sin(a->eval(x, bad)); break;
      case Exp: r = std::exp(a->eval(x, bad)); break;
    }
    if (!std::isfinite(r)) bad = true;
    return r;
  }
  // 1: + -, 2: * /, 3: unary minus, 4: ^, 5: atoms and calls
  int prec() const {
    switch (kind) {
      case Add: case Sub: return 1;
      case Mul: case Div: return 2;
      case Neg: return 3;
      case Pow: return 4;
      default: return 5;
    }
  }
  static std::string wrap(const Tree& t, bool paren) { return paren ? "(" + t.str() + ")" : t.str(); }
  std::string str() const {
    switch (kind) {
      case Num: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", value);
        return buf;
      }
      case Var: return "x";
      case Add: case Sub: case Mul: case Div: {
        const char op = kind == Add ? '+' : kind == Sub ? '-' : kind == Mul ? '*' : '/';
        return wrap(*a, a->prec() < prec()) + op + wrap(*b, b->prec() <= prec());
      }
      case Pow: return wrap(*a, a->prec() < 5) + "^" + wrap(*b, b->prec() < 3);
      case Neg: return "-" + wrap(*a, a->prec() < 3);
      case Sin: return "sin(" + a->str() + ")";
      case Exp: return "exp(" + a->str() + ")";
    }
    return "";
  }
};

std::unique_ptr<Tree> random_tree(std::mt19937& rng, int depth) {
  auto t = std::make_unique<Tree>();
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  const int k = pick(rng);
  t->kind = static_cast<Tree::Kind>(k);
  if (k == Tree::Num) t->value = std::uniform_int_distribution<int>(1, 9)(rng) / 2.0;
  if (k >= Tree::Add && k <= Tree::Div) {
    t->a = random_tree(rng, depth - 1);
    t->b = random_tree(rng, depth - 1);
  } else if (k == Tree::Pow) {
    // Small integer exponents keep negative bases in the real domain.
    t->a = random_tree(rng, depth - 1);
    t->b = std::make_unique<Tree>();
    t->b->kind = Tree::Num;
    t->b->value = std::uniform_int_distribution<int>(0, 3)(rng);
    if (std::uniform_int_distribution<int>(0, 1)(rng)) {
      auto neg = std::make_unique<Tree>();
      neg->kind = Tree::Neg;
      neg->a = std::move(t->b);
      t->b = std::move(neg);
    }
  } else if (k >= Tree::Neg) {
    t->a = random_tree(rng, depth - 1);
  }
  return t;
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("examples") {
    CHECK(parse("exp(x)").evaluate(1.0) == doctest::Approx(2.718281828459045).epsilon(1e-15));
    CHECK(parse("x^2+1").evaluate(2.0) == 5.0);
    CHECK(parse("-x^2").evaluate(3.0) == -9.0);
    CHECK(parse("0").evaluate(1.7) == 0.0);
    CHECK(parse("exp(x)").evaluate(0.0) == 1.0);
    CHECK(parse("sin(x)/x").evaluate(1.0) == doctest::Approx(0.8414709848078965).epsilon(1e-15));
  }

  TEST_CASE("precedence and associativity") {
    CHECK(parse("2^3^2").evaluate(0) == 512.0);
    CHECK(parse("2*3+4").evaluate(0) == 10.0);
    CHECK(parse("2+3*4").evaluate(0) == 14.0);
    CHECK(parse("8/4/2").evaluate(0) == 1.0);
    CHECK(parse("8-4-2").evaluate(0) == 2.0);
    CHECK(parse("2^-1").evaluate(0) == 0.5);
    CHECK(parse("--x").evaluate(2) == 2.0);
    CHECK(parse("+x").evaluate(2) == 2.0);
    CHECK(parse("-2^2").evaluate(0) == -4.0);
    CHECK(parse("(-2)^2").evaluate(0) == 4.0);
  }

  TEST_CASE("constants, functions and number syntax") {
    CHECK(parse("pi").evaluate(0) == doctest::Approx(3.141592653589793).epsilon(1e-16));
    CHECK(parse("e").evaluate(0) == doctest::Approx(2.718281828459045).epsilon(1e-16));
    CHECK(parse("1.5e2 + .5 + 2.").evaluate(0) == 152.5);
    CHECK(parse("sinh(x)-cosh(x)").evaluate(0.5) == doctest::Approx(-std::exp(-0.5)));
    CHECK(parse("sqrt(abs(x))").evaluate(-4) == 2.0);
    CHECK(parse("log(x)").evaluate(std::exp(2.0)) == doctest::Approx(2.0));
    CHECK(parse("cos(x)").evaluate(0) == 1.0);
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(parse("log(x)").evaluate(0.0), nsbf::DomainError);
    CHECK_THROWS_AS(parse("log(x)").evaluate(-1.0), nsbf::DomainError);
    CHECK_THROWS_AS(parse("sqrt(x)").evaluate(-1.0), nsbf::DomainError);
    CHECK_THROWS_AS(parse("x^0.5").evaluate(-2.0), nsbf::DomainError);
    CHECK_THROWS_AS(parse("1/x").evaluate(0.0), nsbf::DomainError);
    CHECK_THROWS_AS(parse("exp(x)").evaluate(1e6), nsbf::EvaluationError);
    CHECK(parse("x^3").evaluate(-2.0) == -8.0);
  }

  TEST_CASE("syntax errors carry offsets") {
    try {
      parse("1 + * x");
      FAIL("expected ParseError");
    } catch (const nsbf::ParseError& e) {
      CHECK(e.offset() == 4);
    }
    try {
      parse("2*foo(x)");
      FAIL("expected UnknownIdentifier");
    } catch (const nsbf::UnknownIdentifier& e) {
      CHECK(e.offset() == 2);
      CHECK(e.name() == "foo");
    }
    CHECK_THROWS_AS(parse(""), nsbf::ParseError);
    CHECK_THROWS_AS(parse("(x"), nsbf::ParseError);
    CHECK_THROWS_AS(parse("x)"), nsbf::ParseError);
    CHECK_THROWS_AS(parse("1e"), nsbf::ParseError);
    CHECK_THROWS_AS(parse("1e999"), nsbf::ParseError);
    CHECK_THROWS_AS(parse("sin x"), nsbf::ParseError);
    CHECK_THROWS_AS(parse("y"), nsbf::UnknownIdentifier);
  }

  TEST_CASE("random trees agree with an independent evaluator") {
    std::mt19937 rng(12345);
    int compared = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      const auto t = random_tree(rng, 4);
      const std::string text = t->str();
      const nsbf::Expression e = parse(text);
      const nsbf::Expression again = parse(e.to_string());
      for (double x : {-1.3, 0.4, 2.1}) {
        bool bad = false;
        const double want = t->eval(x, bad);
        if (bad) {
          CHECK_THROWS_AS(e.evaluate(x), nsbf::EvaluationError);
          continue;
        }
        const double got = e.evaluate(x);
        const double tol = 1e-12 * std::max(1.0, std::fabs(want));
        CHECK_MESSAGE(std::fabs(got - want) <= tol, text, " at x=", x);
        CHECK(again.evaluate(x) == got);
        ++compared;
      }
    }
    CHECK(compared > 3000);
  }

  TEST_CASE("parser never fails other than with a parse error") {
    std::mt19937 rng(99);
    const std::string alphabet = "x0123456789.+-*/^() \tepsinco,e#";
    for (int trial = 0; trial < 20000; ++trial) {
      const int len = std::uniform_int_distribution<int>(0, 40)(rng);
      std::string s;
      for (int i = 0; i < len; ++i) {
        if (trial % 4 == 0)
          s.push_back(static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng)));
        else
          s.push_back(alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)]);
      }
      try {
        const nsbf::Expression e = parse(s);
        try {
          (void)e.evaluate(0.7);
        } catch (const nsbf::EvaluationError&) {
        }
      } catch (const nsbf::InvalidArgument&) {
      }
    }
    CHECK_THROWS_AS(parse(std::string(100000, '(')), nsbf::ParseError);
    std::string chain = "x";
    for (int i = 0; i < 100000; ++i) chain += "+x";
    CHECK_THROWS_AS(parse(chain), nsbf::ParseError);
    std::string ok = "x";
    for (int i = 0; i < 1000; ++i) ok += "+x";
    CHECK(parse(ok).evaluate(1.0) == 1001.0);
  }
}
