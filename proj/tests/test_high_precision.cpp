// Every 50-digit instantiation lives in this file; it is slow to compile.

#include <qdiff/fixtures.hpp>
#include <qdiff/json_io.hpp>

#include <catch_amalgamated.hpp>

#include <boost/math/constants/constants.hpp>

using namespace qdiff;
using HP = HighPrecision;
using CH = complex_t<HP>;
using R = Rational;

namespace {

CH polar(HP r, HP phi) {
  using std::cos;
  using std::sin;
  return CH(r * cos(phi), r * sin(phi));
}

HP rel(const CH& a, const CH& b) { return abs(a - b) / abs(b); }

}  // namespace

TEST_CASE("theta identities hold to 1e-30", "[high-precision]") {
  for (CH q : {CH(2), CH(HP(3) / 2), polar(HP(2), boost::math::constants::pi<HP>() / 7)}) {
    NumericContext<HP> ctx(q);
    ThetaEvaluator<HP> th(ctx);
    CH lam(HP("0.7"), HP("1.3"));
    for (HP r : {HP("0.2"), HP("1.1"), HP("6.5")})
      for (HP phi : {HP("-2.2"), HP("0.3"), HP("1.7")}) {
        CH z = polar(r, phi);
        CHECK(rel(th.theta(q * z), z * th.theta(z)) < HP("1e-30"));
        CHECK(rel(th.theta_triple_product(z), th.theta(z)) < HP("1e-30"));
        CHECK(rel(th.q_character(q * z, lam), lam * th.q_character(z, lam)) < HP("1e-30"));
        CH lq = th.q_log(z);
        CHECK(abs(th.q_log(q * z) - lq - CH(1)) < HP("1e-30") * std::max(HP(1), HP(abs(lq))));
      }
  }
}

TEST_CASE("basic hypergeometric coefficients to 1e-25", "[high-precision]") {
  CH q(2);
  NumericContext<HP> ctx(q, HP("1e-30"), 31);
  auto op = parse_operator<HP>("(1-S)*(1-q^(1/2)*S) - z*(1-q^(1/3)*S)*(1-q^(1/5)*S)", ctx);
  auto basis = solve(op, 31);
  REQUIRE(basis.solutions.size() == 2);
  for (const auto& s : basis.solutions) {
    bool first = abs(s.character - CH(1)) < HP("1e-20");
    R e = first ? R(0) : R(-1, 2);
    HP worst(0);
    CH f(1);
    for (int n = 0; n <= 30; ++n) {
      if (n > 0) {
        CH num = (CH(1) - ctx.q_power(e + R(n - 1) + R(1, 3))) * (CH(1) - ctx.q_power(e + R(n - 1) + R(1, 5)));
        CH den = (CH(1) - ctx.q_power(e + R(n))) * (CH(1) - ctx.q_power(e + R(n) + R(1, 2)));
        f = f * num / den;
      }
      worst = std::max(worst, HP(rel(s.series.coefficient(n), f)));
    }
    CHECK(worst < HP("1e-25"));
    CHECK(apply_operator(op, s).relative() < HP("1e-25"));
  }
}

TEST_CASE("built-in examples pass at 50 digits", "[high-precision]") {
  NumericContext<HP> ctx(CH(2));
  for (const char* name : {"q-hypergeometric", "p1-level2", "ramanujan", "slope-1/2", "p1-level3"}) {
    auto out = run_fixture(fixture_spec(name), ctx);
    for (const auto& c : out.checks) {
      INFO(name << ": " << c.what << " " << c.detail);
      CHECK(c.passed);
    }
  }
}

TEST_CASE("high precision values are written as strings", "[high-precision]") {
  NumericContext<HP> ctx(CH(2));
  Json j = complex_to_json<HP>(ctx.q_power(R(1, 3)));
  REQUIRE(j["re"].is_string());
  CH back = complex_from_json<HP>(j);
  CHECK(abs(back - ctx.q_power(R(1, 3))) < HP("1e-45"));
}
