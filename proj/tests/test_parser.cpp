#include <qdiff/operator.hpp>

#include <catch_amalgamated.hpp>

#include <functional>
#include <random>

using namespace qdiff;
using C = std::complex<double>;
using K = Expr::Kind;

namespace {

// Random trees avoid powers of a bare q, which the parser reads back as q^n.
ExprPtr random_tree(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 10);
  switch (pick(rng)) {
    case 0:
      return Expr::leaf(K::kZ);
    case 1:
      return Expr::leaf(K::kShift);
    case 2: {
      std::uniform_int_distribution<int> n(-5, 5), d(1, 4);
      return Expr::q(Rational(n(rng), d(rng)));
    }
    case 3: {
      static const char* lits[] = {"2", "1/3", "0.5", "3", "1.25e-1"};
      std::uniform_int_distribution<int> l(0, 4), im(0, 3);
      return Expr::number(lits[l(rng)], im(rng) == 0);
    }
    case 4:
      return Expr::leaf(K::kZ);
    case 5:
      return Expr::unary(random_tree(rng, depth - 1));
    case 6:
      return Expr::binary(K::kAdd, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 7:
      return Expr::binary(K::kSub, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 8:
    case 9:
      return Expr::binary(K::kMul, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    default: {
      ExprPtr base = random_tree(rng, depth - 1);
      if (base->kind == K::kQ) base = Expr::leaf(K::kZ);
      std::uniform_int_distribution<int> e(0, 3);
      return Expr::power(base, e(rng));
    }
  }
}

using Fn = std::function<C(C)>;

// The tree read directly as an operator on functions: z multiplies, S shifts, products compose.
Fn act(const Expr& e, C q, Fn f) {
  switch (e.kind) {
    case K::kZ:
      return [f](C z) { return z * f(z); };
    case K::kShift:
      return [f, q](C z) { return f(q * z); };
    case K::kQ: {
      C c = std::exp(double(e.q_exponent.numerator()) / double(e.q_exponent.denominator()) * std::log(q));
      return [f, c](C z) { return c * f(z); };
    }
    case K::kNumber: {
      auto slash = e.literal.find('/');
      double v = slash == std::string::npos ? std::stod(e.literal)
                                            : std::stod(e.literal.substr(0, slash)) / std::stod(e.literal.substr(slash + 1));
      C c = e.imaginary ? C(0, v) : C(v);
      return [f, c](C z) { return c * f(z); };
    }
    case K::kNeg: {
      Fn g = act(*e.lhs, q, f);
      return [g](C z) { return -g(z); };
    }
    case K::kAdd:
    case K::kSub: {
      Fn a = act(*e.lhs, q, f), b = act(*e.rhs, q, f);
      double s = e.kind == K::kAdd ? 1 : -1;
      return [a, b, s](C z) { return a(z) + s * b(z); };
    }
    case K::kMul:
      return act(*e.lhs, q, act(*e.rhs, q, f));
    case K::kPow: {
      Fn g = f;
      for (long i = 0; i < e.exponent; ++i) g = act(*e.lhs, q, g);
      return g;
    }
  }
  return f;
}

}  // namespace

TEST_CASE("printing and parsing round-trip on random trees", "[parser]") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 500; ++i) {
    ExprPtr t = random_tree(rng, 4);
    std::string text = to_string(*t);
    ExprPtr back = parse_expression(text);
    INFO(text);
    CHECK(equal(*t, *back));
    CHECK(to_string(*back) == text);
  }
}

TEST_CASE("accepted spellings", "[parser]") {
  CHECK(to_string(*parse_expression("q*z*σ^2 \xE2\x88\x92 S + 1")) == "q*z*S^2 - S + 1");
  CHECK(to_string(*parse_expression("q\xC2\xB7z")) == "q*z");
  CHECK(to_string(*parse_expression("q^(1/2)")) == "q^(1/2)");
  CHECK(to_string(*parse_expression("q^-1")) == "q^-1");
  CHECK(to_string(*parse_expression("(1-S)^(2)")) == "(1 - S)^2");
  CHECK(to_string(*parse_expression("2.5e-3i*z")) == "2.5e-3i*z");
}

TEST_CASE("parse errors carry the offending position", "[parser]") {
  auto position_of = [](const char* text) -> std::size_t {
    try {
      parse_expression(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    return std::string::npos - 1;
  };
  CHECK(position_of("(1-S)^2 - z*") == 12);
  CHECK(position_of("1 + $") == 4);
  CHECK(position_of("q^x") == 2);
  CHECK(position_of("(1-S") == 4);
  CHECK(position_of("2/0") == 2);
  CHECK(position_of("") == 0);
  CHECK(position_of("z S") == 2);
  CHECK(position_of("S^") == 2);
}

TEST_CASE("normalization agrees with direct action of the tree", "[parser]") {
  std::mt19937 rng(99);
  C q(1.7, 0.4);
  NumericContext<double> ctx(q, 1e-12);
  // Any function will do; the operator identity does not need analyticity.
  Fn f = [](C z) { return (C(1) + 0.5 * z) / (1 + std::norm(z)); };
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    ExprPtr t = random_tree(rng, 4);
    std::optional<DifferenceOperator<double>> op;
    try {
      op = normalize(*t, ctx);
    } catch (const ParseError&) {
      continue;  // order 0, zero operator or a vanishing a_0
    }
    ++checked;
    Fn direct = act(*t, q, f);
    for (C z : {C(0.11, 0.05), C(-0.2, 0.13)}) {
      C via_op = 0;
      double scale = 0;
      for (int k = 0; k <= op->order(); ++k) {
        C term = op->coefficient(k).evaluate_root(z) * f(std::pow(q, k) * z);
        via_op += term;
        scale += std::abs(term);
      }
      C want = direct(z);
      INFO(to_string(*t));
      CHECK(std::abs(via_op - want) < 1e-9 * (1 + scale));
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("invalid operators are parse errors", "[parser]") {
  NumericContext<double> ctx(C(2));
  CHECK_THROWS_AS(parse_operator<double>("0*S", ctx), ParseError);
  CHECK_THROWS_AS(parse_operator<double>("1 + z", ctx), ParseError);
  CHECK_THROWS_AS(parse_operator<double>("z*S - q^-1*S*z", ctx), ParseError);
  CHECK_THROWS_AS(parse_operator<double>("S^2 - S", ctx), ParseError);
  CHECK_THROWS_AS(parse_operator<double>("S^-1 + 1", ctx), ParseError);
  CHECK_THROWS_AS(parse_operator<double>("(1 - 1)^-1*S + 1", ctx), ParseError);
  CHECK_NOTHROW(parse_operator<double>("2^-1*S + 1", ctx));
}

TEST_CASE("skew products follow S z = q z S", "[parser]") {
  C q(3);
  NumericContext<double> ctx(q);
  auto a = parse_operator<double>("S*z + 1", ctx);
  auto b = parse_operator<double>("q*z*S + 1", ctx);
  for (int k = 0; k <= 1; ++k)
    for (long j = 0; j <= 1; ++j) CHECK(std::abs(a.coefficient(k).coefficient(j) - b.coefficient(k).coefficient(j)) < 1e-14);

  auto c = parse_operator<double>("(1-S)^2 - z*S^3", ctx);
  REQUIRE(c.order() == 3);
  CHECK(c.coefficient(1).coefficient(0) == C(-2));
  CHECK(c.coefficient(3).coefficient(1) == C(-1));
}

TEST_CASE("canonical operator text parses back to the same operator", "[parser]") {
  NumericContext<double> ctx(std::polar(2.0, 0.3));
  for (const char* text : {"(1-S)*(1-q^(1/2)*S) - z*(1-q^(1/3)*S)*(1-q^(1/5)*S)", "q*z*S^2 - S + 1",
                           "z^2*S^2 + z*S + 1", "(1-S)^5 - z*(1-q*S^5)*(1-q^2*S^5)"}) {
    auto op = parse_operator<double>(text, ctx);
    std::string canon = to_string(op);
    auto back = parse_operator<double>(canon, ctx);
    INFO(canon);
    REQUIRE(back.order() == op.order());
    for (int k = 0; k <= op.order(); ++k)
      for (long j = 0; j < 4; ++j)
        CHECK(std::abs(back.coefficient(k).coefficient(j) - op.coefficient(k).coefficient(j)) <=
              1e-15 * (1 + std::abs(op.coefficient(k).coefficient(j))));
  }
}
