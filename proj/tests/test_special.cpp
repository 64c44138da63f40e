#include "oracles.hpp"

#include <qdiff/special.hpp>

#include <catch_amalgamated.hpp>

using namespace qdiff;
using C = std::complex<double>;

namespace {

double rel(C a, C b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<C> grid() {
  std::vector<C> out;
  for (double r : {0.05, 0.3, 0.9, 1.7, 4.0, 11.0})
    for (double phi : {-2.3, -1.0, 0.0, 0.4, 1.9, 2.7}) out.push_back(std::polar(r, phi));
  return out;
}

}  // namespace

TEST_CASE("finite and infinite q-Pochhammer symbols", "[special]") {
  C q(2);
  CHECK(q_pochhammer(C(0.5), q, 0) == C(1));
  CHECK(q_pochhammer(C(0.5), q, 3) == C(0));  // the factor 1 - 0.5 * 2 vanishes
  CHECK(rel(q_pochhammer(C(0.3), q, 3), C(0.7 * 0.4 * -0.2)) < 1e-14);
  CHECK(rel(q_pochhammer(q, q, 4), C(-1) * -3.0 * -7.0 * -15.0) < 1e-15);
  CHECK_THROWS_AS(q_pochhammer(C(1), q, -1), DomainError);

  C b(0.5);
  C inf = q_pochhammer_infinite<double>(C(0.25), b, 1e-14);
  CHECK(rel(inf, oracle::poch(C(0.25), b, 200)) < 1e-13);
  CHECK_THROWS_AS(q_pochhammer_infinite<double>(C(0.25), C(1.0), 1e-14), DomainError);
}

TEST_CASE("theta matches a plain bilateral sum", "[special]") {
  for (C q : {C(2), C(1.5), std::polar(2.0, M_PI / 7)}) {
    ThetaEvaluator<double> th{NumericContext<double>(q, 1e-13)};
    for (C z : grid()) CHECK(rel(th.theta(z), oracle::theta(q, z, 120)) < 1e-11);
  }
}

TEST_CASE("functional equations of theta, l_q and e_{q,lambda}", "[special]") {
  for (C q : {C(2), C(3), std::polar(2.0, M_PI / 7)}) {
    ThetaEvaluator<double> th{NumericContext<double>(q, 1e-13)};
    C lam(0.7, 1.3);
    for (C z : grid()) {
      CHECK(rel(th.theta(q * z), z * th.theta(z)) < 1e-10);
      CHECK(std::abs(th.q_log(q * z) - th.q_log(z) - C(1)) < 1e-10 * std::max(1.0, std::abs(th.q_log(z))));
      CHECK(rel(th.q_character(q * z, lam), lam * th.q_character(z, lam)) < 1e-10);
      CHECK(rel(th.theta_triple_product(z), th.theta(z)) < 1e-10);
    }
  }
}

TEST_CASE("e_{q,q^m} is a monomial with constant q^{-m(m+1)/2}", "[special]") {
  C q(2);
  ThetaEvaluator<double> th{NumericContext<double>(q, 1e-13)};
  for (int m = -3; m <= 3; ++m)
    for (C z : {C(0.5), C(0.3, 0.2), C(-1.7, 2.0)}) {
      C expected = std::pow(q, -m * (m + 1) / 2.0) * std::pow(z, m);
      CHECK(rel(th.q_character(z, std::pow(q, m)), expected) < 1e-12);
    }
  CHECK(std::abs(th.q_character(C(0.5), q) - C(0.25)) < 1e-12);
  CHECK(std::abs(th.q_character(C(0.5), q * q) - C(0.03125)) < 1e-12);
}

TEST_CASE("cutoff grows when the tolerance tightens and doubling it changes nothing", "[special]") {
  C q(1.5), z(0.8, 0.3);
  ThetaEvaluator<double> loose(NumericContext<double>(q, 1e-6)), tight(NumericContext<double>(q, 1e-14));
  int d = tight.cutoff(z);
  CHECK(loose.cutoff(z) <= d);
  CHECK(rel(tight.theta(z, d), tight.theta(z, 2 * d)) < 1e-14);
}

TEST_CASE("theta zeros and z = 0 are rejected where a quotient is formed", "[special]") {
  C q(2);
  ThetaEvaluator<double> th{NumericContext<double>(q)};
  for (int k = -3; k <= 3; ++k) {
    C z = -std::pow(q, k);
    CHECK(std::abs(th.theta(z)) < 1e-10 * std::abs(oracle::theta(q, std::abs(z))));
    CHECK(th.zero_index(z) == k);
    CHECK_THROWS_AS(th.q_log(z), DomainError);
    CHECK_THROWS_AS(th.q_character(z, C(3)), DomainError);
  }
  CHECK_THROWS_AS(th.q_character(C(1), C(-1)), DomainError);
  CHECK_THROWS_AS(th.theta(C(0)), DomainError);
  CHECK_THROWS_AS(th.q_character(C(1), C(0)), DomainError);
}

TEST_CASE("q-log is additive along the orbit and matches a difference quotient", "[special]") {
  C q(2);
  ThetaEvaluator<double> th{NumericContext<double>(q, 1e-13)};
  C z(0.6, 0.4);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(th.q_log(std::pow(q, k) * z) - th.q_log(z) - double(k)) < 1e-10);
  double h = 1e-6;
  C fd = z * (th.theta(z * (1.0 + h)) - th.theta(z * (1.0 - h))) / (2.0 * h * z) / th.theta(z);
  CHECK(rel(th.q_log(z), fd) < 1e-7);
}
