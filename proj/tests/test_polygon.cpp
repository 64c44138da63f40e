#include <qdiff/format.hpp>
#include <qdiff/newton_polygon.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace qdiff;
using C = std::complex<double>;
using R = Rational;

namespace {

NewtonPolygon polygon_of(const char* text, C q = C(2)) {
  return newton_polygon(parse_operator<double>(text, NumericContext<double>(q)));
}

// Random operator of the given order with coefficient degrees <= max_degree; a_0 and a_n nonzero.
DifferenceOperator<double> random_operator(std::mt19937& rng, int order, int max_degree, const NumericContext<double>& ctx) {
  std::uniform_int_distribution<int> coin(0, 2), deg(0, max_degree);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<PuiseuxSeries<double>> a;
  for (int i = 0; i <= order; ++i) {
    std::vector<C> c(static_cast<std::size_t>(max_degree + 1), C(0));
    bool any = false;
    for (auto& x : c)
      if (coin(rng) == 0) {
        x = C(u(rng), u(rng));
        any = true;
      }
    if ((i == 0 || i == order) && !any) c[static_cast<std::size_t>(deg(rng))] = C(1, 0.5);
    a.emplace_back(c);
  }
  return DifferenceOperator<double>(ctx, a);
}

}  // namespace

TEST_CASE("polygons of the worked operators", "[polygon]") {
  auto p = polygon_of("z^2*S^2 + z*S + 1");
  CHECK(p.slopes() == std::vector<R>{R(-1)});
  CHECK(p.lengths() == std::vector<long>{2});

  p = polygon_of("q*z*S^2 - S + 1");
  CHECK(p.slopes() == std::vector<R>{R(-1), R(0)});
  CHECK(p.lengths() == std::vector<long>{1, 1});
  REQUIRE(p.vertices.size() == 3);
  CHECK(p.vertices[0].x == 0);
  CHECK(p.vertices[0].y == R(1));
  CHECK(p.vertices[2].x == 2);
  CHECK(p.vertices[2].y == R(0));

  p = polygon_of("z*S^2 - 1");
  CHECK(p.slopes() == std::vector<R>{R(-1, 2)});

  p = polygon_of("z^2*S^2 - S + 1");
  CHECK(p.slopes() == std::vector<R>{R(-2), R(0)});

  p = polygon_of("(1-S)^5 - z*(1-q*S^5)*(1-q^2*S^5)*(1-q^3*S^5)*(1-q^4*S^5)*(1-q^5*S^5)");
  CHECK(p.slopes() == std::vector<R>{R(-1, 20), R(0)});
  CHECK(p.lengths() == std::vector<long>{20, 5});

  for (int l = 3; l <= 6; ++l) {
    std::string text = "(1-S)^2 - z*S^" + std::to_string(l);
    auto g = polygon_of(text.c_str());
    CHECK(g.slopes() == std::vector<R>{R(-1, l - 2), R(0)});
    CHECK(g.lengths() == std::vector<long>{l - 2, 2});
  }
  for (int l = 0; l <= 2; ++l) {
    std::string text = "(1-S)^2 - z*S^" + std::to_string(l);
    CHECK(polygon_of(text.c_str()).slopes() == std::vector<R>{R(0)});
  }
}

TEST_CASE("interior lattice points support their segment", "[polygon]") {
  auto p = polygon_of("(1-S)^3 - z");
  REQUIRE(p.segments.size() == 1);
  CHECK(p.segments[0].supporting_indices == std::vector<int>{0, 1, 2, 3});
  auto h = polygon_of("(1-S)^2 - z*S^3");
  CHECK(h.segments[0].supporting_indices == std::vector<int>{2, 3});
  CHECK(h.segments[1].supporting_indices == std::vector<int>{0, 1, 2});
}

TEST_CASE("regularity verdicts", "[polygon]") {
  NumericContext<double> ctx(C(2));
  CHECK(is_regular_singular(parse_operator<double>("(1-S)^2 - z*S^2", ctx)).regular);
  CHECK(is_regular_singular(parse_operator<double>("(1-S)*(1-q^(1/2)*S) - z*(1-q^(1/3)*S)*(1-q^(1/5)*S)", ctx)).regular);
  auto r = is_regular_singular(parse_operator<double>("(1-S)^2 - z*S^3", ctx));
  CHECK_FALSE(r.regular);
  CHECK(r.describe().find("irregular") == 0);
  CHECK_FALSE(is_regular_singular(parse_operator<double>("q*z*S^2 - S + 1", ctx)).regular);
  CHECK_FALSE(is_regular_singular(parse_operator<double>(
                                      "(1-S)^5 - z*(1-q*S^5)*(1-q^2*S^5)*(1-q^3*S^5)*(1-q^4*S^5)*(1-q^5*S^5)", ctx))
                  .regular);
  // val a_0 = 1, val a_1 = 0, val a_2 = 1: one horizontal edge is impossible.
  CHECK_FALSE(is_regular_singular(parse_operator<double>("z*S^2 + S + z", ctx)).regular);
}

TEST_CASE("regularity criterion agrees with a single horizontal edge", "[polygon]") {
  std::mt19937 rng(31);
  NumericContext<double> ctx(C(1.5, 0.7));
  int regular = 0, disagreements = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto op = random_operator(rng, 2 + trial % 4, 4, ctx);
    auto poly = newton_polygon(op);
    bool by_polygon = poly.segments.size() == 1 && poly.segments[0].horizontal();
    bool by_valuation = is_regular_singular(op).regular;
    if (by_polygon != by_valuation) ++disagreements;
    if (by_valuation) ++regular;
  }
  CHECK(disagreements == 0);
  CHECK(regular > 20);
  CHECK(regular < 480);
}

TEST_CASE("polygon renderings", "[polygon]") {
  auto p = polygon_of("q*z*S^2 - S + 1");
  std::string ascii = polygon_ascii(p);
  CHECK(ascii.find("slope -1") != std::string::npos);
  CHECK(ascii.find("slope 0") != std::string::npos);
  std::string svg = polygon_svg(p);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}
