#pragma once

// Worked operators with known answers, used by `qdiff examples`.

#include <qdiff/format.hpp>
#include <qdiff/special.hpp>
#include <qdiff/verify.hpp>

#include <functional>
#include <string>
#include <vector>

namespace qdiff {

struct FixtureSpec {
  std::string name;
  std::string description;
  std::string operator_text;
  std::vector<std::string> slopes;  // expected polygon slopes, increasing
  std::vector<long> lengths;
};

inline const std::vector<FixtureSpec>& fixture_specs() {
  static const std::vector<FixtureSpec> specs = {
      {"q-hypergeometric", "basic hypergeometric operator, r = 1/2, alpha = 1/3, beta = 1/5",
       "(1-S)*(1-q^(1/2)*S) - z*(1-q^(1/3)*S)*(1-q^(1/5)*S)", {"0"}, {2}},
      {"p1-level0", "quantum K-theory of P^1, level 0", "(1-S)^2 - z", {"0"}, {2}},
      {"p1-level1", "quantum K-theory of P^1, level 1", "(1-S)^2 - z*S", {"0"}, {2}},
      {"p1-level2", "quantum K-theory of P^1, level 2", "(1-S)^2 - z*S^2", {"0"}, {2}},
      {"p1-level3", "quantum K-theory of P^1, level 3", "(1-S)^2 - z*S^3", {"-1", "0"}, {1, 2}},
      {"p1-level5", "quantum K-theory of P^1, level 5", "(1-S)^2 - z*S^5", {"-1/3", "0"}, {3, 2}},
      {"p2", "quantum K-theory of P^2, level 0", "(1-S)^3 - z", {"0"}, {3}},
      {"ramanujan", "Ramanujan operator", "q*z*S^2 - S + 1", {"-1", "0"}, {1, 1}},
      {"slope-1", "single slope -1 of length 2", "z^2*S^2 + z*S + 1", {"-1"}, {2}},
      {"slope-2", "slopes -2 and 0", "z^2*S^2 - S + 1", {"-2", "0"}, {1, 1}},
      {"slope-1/2", "single slope -1/2, ramified", "z*S^2 - 1", {"-1/2"}, {2}},
      {"quintic", "quantum K-theory of the quintic threefold",
       "(1-S)^5 - z*(1-q*S^5)*(1-q^2*S^5)*(1-q^3*S^5)*(1-q^4*S^5)*(1-q^5*S^5)", {"-1/20", "0"}, {20, 5}},
  };
  return specs;
}

inline const FixtureSpec& fixture_spec(const std::string& name) {
  for (const auto& f : fixture_specs())
    if (f.name == name) return f;
  throw ConfigError("unknown example '" + name + "'");
}

struct FixtureCheck {
  std::string what;
  bool passed = false;
  std::string detail;
};

struct FixtureOutcome {
  std::string name;
  std::vector<FixtureCheck> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

template <class Real>
Real relative_gap(const complex_t<Real>& a, const complex_t<Real>& b) {
  Real d = cabs(a - b), s = std::max<Real>(cabs(a), cabs(b));
  return s == Real(0) ? d : Real(d / s);
}

// Largest relative deviation of the first n coefficients from expected(m).
template <class Real>
Real series_gap(const PuiseuxSeries<Real>& f, int n, const std::function<complex_t<Real>(int)>& expected) {
  Real worst(0);
  for (int m = 0; m < n; ++m) worst = std::max(worst, relative_gap<Real>(f.coefficient(m), expected(m)));
  return worst;
}

template <class Real>
const SolutionForm<Real>* find_solution(const SolutionBasis<Real>& b, const Rational& theta, const complex_t<Real>& c,
                                        int log_power, const Real& tol) {
  for (const auto& s : b.solutions)
    if (s.theta_exp == theta && s.log_power == log_power && relative_gap<Real>(s.character, c) < tol) return &s;
  return nullptr;
}

}  // namespace detail

template <class Real>
FixtureOutcome run_fixture(const FixtureSpec& spec, const NumericContext<Real>& ctx) {
  using C = complex_t<Real>;
  FixtureOutcome out;
  out.name = spec.name;
  const Real tol = ctx.tol();
  const double resid_limit = std::is_same_v<Real, double> ? 1e-8 : 1e-25;
  auto check = [&](std::string what, bool ok, std::string detail = {}) {
    out.checks.push_back({std::move(what), ok, std::move(detail)});
  };

  auto op = parse_operator<Real>(spec.operator_text, ctx);
  auto poly = newton_polygon(op);
  std::vector<std::string> slopes;
  for (const auto& s : poly.slopes()) slopes.push_back(to_string(s));
  std::string got;
  for (const auto& s : slopes) got += s + " ";
  check("polygon slopes", slopes == spec.slopes, got);
  check("polygon lengths", poly.lengths() == spec.lengths);

  auto basis = solve(op, ctx.truncation());
  check("solution count equals order", basis.complete(),
        std::to_string(basis.solutions.size()) + " of " + std::to_string(basis.order));
  Real worst(0);
  for (const auto& s : basis.solutions) worst = std::max(worst, apply_operator(op, s).relative());
  check("residuals vanish", to_double(worst) <= resid_limit, "max relative " + format_real(worst));

  const C q = ctx.q();
  const int N = std::min(ctx.truncation(), 20);
  auto qp = [&](const Rational& e) { return ctx.q_power(e); };
  auto closed = [&](const char* what, const SolutionForm<Real>* s, const std::function<C(int)>& f) {
    if (!s) {
      check(what, false, "solution not found");
      return;
    }
    int n = static_cast<int>(std::min<long>(N, s->series.truncation()));
    Real gap = detail::series_gap<Real>(s->series, n, f);
    check(what, gap < Real(10) * tol, "max relative gap " + format_real(gap));
  };

  if (spec.name == "q-hypergeometric") {
    Rational r(1, 2), a(1, 3), b(1, 5);
    closed("first series closed form", detail::find_solution(basis, Rational(0), C(1), 0, tol), [&](int n) {
      return q_pochhammer(qp(a), q, n) * q_pochhammer(qp(b), q, n) /
             (q_pochhammer(q, q, n) * q_pochhammer(qp(r + 1), q, n));
    });
    closed("second series closed form", detail::find_solution(basis, Rational(0), qp(-r), 0, tol), [&](int n) {
      return q_pochhammer(qp(a - r), q, n) * q_pochhammer(qp(b - r), q, n) /
             (q_pochhammer(q, q, n) * q_pochhammer(qp(1 - r), q, n));
    });
  } else if (spec.name.rfind("p1-level", 0) == 0) {
    int l = std::stoi(spec.name.substr(8));
    auto f1 = [&](int d) {
      C p = q_pochhammer(q, q, d);
      return qp(Rational(l * d * (d - 1), 2)) / (p * p);
    };
    closed("F1 closed form", detail::find_solution(basis, Rational(0), C(1), 0, tol), f1);
    const auto* s2 = detail::find_solution(basis, Rational(0), C(1), 1, tol);
    if (s2 && !s2->tail.empty()) {
      closed("log solution companion series", &s2->tail.front(), [&](int d) {
        C h(Real(l * d));
        for (int k = 1; k <= d; ++k) h += C(2) * ipow(q, k) / (C(1) - ipow(q, k));
        return f1(d) * h;
      });
    } else {
      check("log solution present", false);
    }
  } else if (spec.name == "ramanujan") {
    closed("horizontal series closed form", detail::find_solution(basis, Rational(0), C(1), 0, tol), [&](int n) {
      return C(Real(n % 2 ? -1 : 1)) * ipow(q, static_cast<long long>(n) * n) / q_pochhammer(q, q, n);
    });
    closed("theta^{-1} series closed form", detail::find_solution(basis, Rational(-1), C(1), 0, tol), [&](int n) {
      return qp(Rational(-n * (n + 1), 2)) / q_pochhammer(q, q, n);
    });
  } else if (spec.name == "slope-2") {
    C q2 = q * q;
    closed("horizontal series closed form", detail::find_solution(basis, Rational(0), C(1), 0, tol), [&](int n) {
      if (n % 2) return C(0);
      int k = n / 2;
      return C(Real(k % 2 ? -1 : 1)) * qp(Rational(2 * k * (k - 1))) / q_pochhammer(q2, q2, k);
    });
    closed("theta^{-2} series closed form", detail::find_solution(basis, Rational(-2), q2, 0, tol), [&](int n) {
      if (n % 2) return C(0);
      int k = n / 2;
      return qp(Rational(-k * (k + 1) - 2 * k)) / q_pochhammer(q2, q2, k);
    });
  } else if (spec.name == "slope-1") {
    // q^{-1} c^2 + c + 1 = 0
    C disc = cexp(clog(C(1) - C(4) / q) / Real(2));
    C c1 = (C(-1) + disc) * q / Real(2), c2 = (C(-1) - disc) * q / Real(2);
    for (C c : {c1, c2}) {
      const auto* s = detail::find_solution(basis, Rational(-1), c, 0, Real(1e3) * tol);
      closed("constant series for character root", s, [&](int n) { return n == 0 ? C(1) : C(0); });
    }
  } else if (spec.name == "slope-1/2") {
    for (C c : {qp(Rational(1, 4)), -qp(Rational(1, 4))}) {
      const auto* s = detail::find_solution(basis, Rational(-1, 2), c, 0, Real(1e3) * tol);
      closed("constant series for +-q^{1/4}", s, [&](int n) { return n == 0 ? C(1) : C(0); });
    }
  } else if (spec.name == "quintic") {
    int found = 0;
    C target = qp(Rational(-1, 2));
    for (const auto& s : basis.solutions)
      if (s.theta_exp == Rational(-1, 20) && detail::relative_gap<Real>(ipow(s.character, 20), target) < Real(1e3) * tol)
        ++found;
    check("20 characters with c^20 = q^{-1/2}", found == 20, std::to_string(found));
  }
  return out;
}

}  // namespace qdiff
