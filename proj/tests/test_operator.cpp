#include <qdiff/special.hpp>
#include <qdiff/operator.hpp>

#include <catch_amalgamated.hpp>

using namespace qdiff;
using C = std::complex<double>;

namespace {

const char* kQuintic = "(1-S)^5 - z*(1-q*S^5)*(1-q^2*S^5)*(1-q^3*S^5)*(1-q^4*S^5)*(1-q^5*S^5)";

}  // namespace

TEST_CASE("operator normal forms", "[operator]") {
  NumericContext<double> ctx(C(2));
  auto op = parse_operator<double>("(1-S)^2 - z*S^3", ctx);
  CHECK(op.order() == 3);
  CHECK(to_string(op) == "1 - 2*S + S^2 - z*S^3");
  CHECK(to_string(parse_operator<double>("1 - S", ctx)) == "1 - S");
  CHECK(to_string(parse_operator<double>("S*z + 1", ctx)) == "1 + 2*z*S");
  CHECK(parse_operator<double>(kQuintic, ctx).order() == 25);
}

TEST_CASE("operator application to a series", "[operator]") {
  NumericContext<double> ctx(C(3));
  auto op = parse_operator<double>("(1-S)^2 - z*S^2", ctx);
  PuiseuxSeries<double> f({1, 2, -1}, 0);
  auto g = op.apply(f);
  // (1-3^k)^2 f_k - 9^{k-1} f_{k-1} on z^k
  CHECK(g.coefficient(0) == C(0));
  CHECK(std::abs(g.coefficient(1) - (C(4) * 2.0 - C(1))) < 1e-12);
  CHECK(std::abs(g.coefficient(2) - (C(64) * -1.0 - C(9) * 2.0)) < 1e-12);
  CHECK(std::abs(g.coefficient(3) - C(81)) < 1e-12);
}

TEST_CASE("companion system shape", "[operator]") {
  NumericContext<double> ctx(C(2));
  auto first = companion(parse_operator<double>("(2+z) + (1-z)*S", ctx));
  REQUIRE(first.n == 1);
  C z(0.3, 0.1);
  CHECK(std::abs(first.evaluate(z)[0][0] + (2.0 + z) / (1.0 - z)) < 1e-14);

  auto op = parse_operator<double>("(1-S)*(1-q^(1/2)*S) - z*(1-q^(1/3)*S)*(1-q^(1/5)*S)", ctx);
  auto sys = companion(op);
  auto m = sys.evaluate(z);
  REQUIRE(sys.n == 2);
  CHECK(m[0][0] == C(0));
  CHECK(m[0][1] == C(1));
  C a2 = op.coefficient(2).evaluate_root(z);
  CHECK(std::abs(m[1][0] + op.coefficient(0).evaluate_root(z) / a2) < 1e-13);
  CHECK(std::abs(m[1][1] + op.coefficient(1).evaluate_root(z) / a2) < 1e-13);

  CHECK(companion(parse_operator<double>(kQuintic, ctx)).n == 25);
}

TEST_CASE("determinant by elimination", "[operator]") {
  std::vector<std::vector<C>> m{{C(2), C(1), C(0)}, {C(1), C(3), C(1)}, {C(0), C(1), C(4)}};
  CHECK(std::abs(determinant(m) - C(18)) < 1e-13);
  CHECK(determinant(std::vector<std::vector<C>>{{C(0), C(1)}, {C(1), C(0)}}) == C(-1));
  CHECK(determinant(std::vector<std::vector<C>>{{C(1), C(2)}, {C(2), C(4)}}) == C(0));
}

TEST_CASE("Wronskian of 1 and l_q is +1", "[operator]") {
  NumericContext<double> ctx(C(2));
  ThetaEvaluator<double> th(ctx);
  std::vector<std::function<C(const C&)>> fns{[](const C&) { return C(1); },
                                              [&](const C& z) { return th.q_log(z); }};
  auto w = wronskian_matrix(ctx, fns, C(0.3));
  // [[1, l], [1, l + 1]]
  CHECK(std::abs(w.matrix[1][1] - w.matrix[0][1] - C(1)) < 1e-12);
  CHECK(std::abs(w.det - C(1)) < 1e-12);

  std::vector<std::function<C(const C&)>> same{fns[1], fns[1]};
  CHECK(std::abs(wronskian_matrix(ctx, same, C(0.3)).det) == 0.0);
}
