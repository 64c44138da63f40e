#pragma once

#include <qdiff/frobenius.hpp>
#include <qdiff/special.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

namespace qdiff {

template <class Real>
struct ResidualStratum {
  complex_t<Real> character;
  int log_power = 0;
  PuiseuxSeries<Real> series;
};

// P applied to a formal solution, grouped by (character class, power of l_q), all
// sharing the solution's theta prefactor. Coefficients below guaranteed_order are final.
template <class Real>
struct Residual {
  std::vector<ResidualStratum<Real>> strata;
  std::optional<Rational> guaranteed_order;  // empty when every input was exact
  Real max_abs{0};
  Real scale{0};  // largest single contribution before cancellation
  // Max over exponents of |residual coefficient| / sum of |products| landing on that exponent.
  // A global scale would let the fast-growing tail of a divergent series hide low-order defects.
  Real worst_relative{0};

  Real relative() const { return worst_relative; }
};

template <class Real>
PuiseuxSeries<Real> magnitudes(const PuiseuxSeries<Real>& f) {
  std::vector<complex_t<Real>> c;
  for (const auto& x : f.coefficients()) c.emplace_back(cabs(x));
  return PuiseuxSeries<Real>(c, f.offset(), f.ramification(), f.truncation());
}

// Independent of the solver: acts with sigma^k on each prefactor directly.
//   theta^mu      -> q^{mu k(k-1)/2} z^{mu k} theta^mu
//   e_{q,c}       -> c^k e_{q,c}
//   l_q^j         -> sum_i C(j,i) k^{j-i} l_q^i
// Characters differing by q^m are merged through e_{q,r q^m} = q^{-m(m+1)/2} r^{-m} z^m e_{q,r}.
template <class Real>
Residual<Real> apply_operator(const DifferenceOperator<Real>& op, const SolutionForm<Real>& sol) {
  using C = complex_t<Real>;
  using Series = PuiseuxSeries<Real>;
  const auto& ctx = op.context();
  const Rational mu = sol.theta_exp;
  Residual<Real> res;

  struct Slot {
    std::size_t cls;
    int log_power;
    Series series;
  };
  std::vector<C> reps;
  std::vector<Slot> slots;
  std::map<Rational, Real> scale_at;
  auto slot = [&](std::size_t cls, int i) -> Series& {
    for (auto& s : slots)
      if (s.cls == cls && s.log_power == i) return s.series;
    slots.push_back({cls, i, Series::zero()});
    return slots.back().series;
  };

  for (const auto& term : sol.strata()) {
    std::size_t cls = reps.size();
    long m = 0;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      C ratio = term.character / reps[r];
      long m0 = std::lround(to_double(rlog(cabs(ratio)) / ctx.log_abs_q()));
      C qm = ipow(ctx.q(), m0);
      if (cabs(ratio - qm) < ctx.tol() * cabs(qm)) {
        cls = r;
        m = m0;
        break;
      }
    }
    if (cls == reps.size()) reps.push_back(term.character);
    C kappa = ctx.q_power(Rational(-m * (m + 1), 2)) * ipow(reps[cls], -m);
    int j = term.log_power;
    for (int k = 0; k <= op.order(); ++k) {
      if (op.coefficient(k).is_zero()) continue;
      C factor = ipow(term.character, k) * ctx.q_power(mu * Rational(k * (k - 1), 2)) * kappa;
      Series base = (op.coefficient(k) * sigma_q(ctx, term.series, k)).shifted(Rational(m) + mu * Rational(k)).scaled(factor);
      Real bmax = base.max_abs();
      // Sum of |a_{k,i}| |f_j| per exponent: the size of what cancels inside the product.
      Series mags = (magnitudes(op.coefficient(k)) * magnitudes(sigma_q(ctx, term.series, k)))
                        .shifted(Rational(m) + mu * Rational(k))
                        .scaled(C(cabs(factor)));
      for (int i = 0; i <= j; ++i) {
        Real w(1);
        for (int t = 0; t < j - i; ++t) w *= Real(k);
        for (int t = 0; t < i; ++t) w = w * Real(j - t) / Real(t + 1);
        if (w == Real(0)) continue;
        res.scale = std::max<Real>(res.scale, bmax * w);
        const auto& mc = mags.coefficients();
        for (std::size_t t = 0; t < mc.size(); ++t) {
          Real& at = scale_at[Rational(mags.offset() + static_cast<long>(t), mags.ramification())];
          at = std::max<Real>(at, Real(mc[t].real() * w));
        }
        Series& dst = slot(cls, i);
        dst = dst + base.scaled(C(w));
      }
    }
  }

  const Real floor = std::numeric_limits<Real>::min() / std::numeric_limits<Real>::epsilon();
  for (auto& s : slots) {
    if (!s.series.is_exact()) {
      Rational t = s.series.truncation_exponent();
      if (!res.guaranteed_order || t < *res.guaranteed_order) res.guaranteed_order = t;
    }
    res.max_abs = std::max<Real>(res.max_abs, s.series.max_abs());
    const auto& sc = s.series.coefficients();
    for (std::size_t t = 0; t < sc.size(); ++t) {
      Real a = cabs(sc[t]);
      if (a == Real(0)) continue;
      // Below this floor products underflow and the ratio is meaningless.
      Real at = std::max<Real>(scale_at[Rational(s.series.offset() + static_cast<long>(t), s.series.ramification())],
                               floor);
      res.worst_relative = std::max<Real>(res.worst_relative, Real(a / at));
    }
    res.strata.push_back({reps[s.cls], s.log_power, std::move(s.series)});
  }
  return res;
}

enum class Growth { kConvergent, kQGevrey, kUndetermined };

inline const char* to_string(Growth g) {
  switch (g) {
    case Growth::kConvergent:
      return "convergent";
    case Growth::kQGevrey:
      return "q-Gevrey";
    default:
      return "undetermined";
  }
}

struct GrowthReport {
  Growth kind = Growth::kUndetermined;
  double weight = 0;  // w in |f_m| ~ |p|^{w m^2}, p = q^{1/s}
  double radius = 0;  // estimated radius in z; infinity for w clearly negative
  int samples = 0;
};

// Least-squares fit of log|f_m| = a + b m + c m^2 over the later half of the nonzero coefficients.
template <class Real>
GrowthReport growth_classify(const PuiseuxSeries<Real>& f, const NumericContext<Real>& ctx) {
  std::vector<double> xs, ys;
  const auto& c = f.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    Real a = cabs(c[i]);
    if (a == Real(0)) continue;
    xs.push_back(static_cast<double>(f.offset() + static_cast<long>(i)));
    ys.push_back(to_double(rlog(a)));
  }
  if (xs.size() < 8) throw SolverError("growth_classify: fewer than 8 nonzero coefficients");
  std::size_t start = xs.size() / 2;
  std::size_t n = xs.size() - start;
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd y(n);
  for (std::size_t r = 0; r < n; ++r) {
    double x = xs[start + r];
    A(r, 0) = 1;
    A(r, 1) = x;
    A(r, 2) = x * x;
    y(r) = ys[start + r];
  }
  Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
  double log_p = to_double(ctx.log_abs_q()) / f.ramification();
  GrowthReport rep;
  rep.samples = static_cast<int>(n);
  rep.weight = coef(2) / log_p;
  if (rep.weight > 0.2)
    rep.kind = Growth::kQGevrey;
  else if (rep.weight < 0.05)
    rep.kind = Growth::kConvergent;
  if (rep.weight < -0.05) {
    rep.radius = std::numeric_limits<double>::infinity();
  } else {
    double slope = coef(1) + 2 * coef(2) * xs.back();
    rep.radius = std::exp(-slope * f.ramification());
  }
  return rep;
}

template <class Real>
struct EvalResult {
  complex_t<Real> value;
  bool truncation_dominated = false;
};

// theta(z0)^mu e_{q,c}(z0) sum_j l_q(z0)^j G_j(z0^{1/s}) on principal branches.
template <class Real>
EvalResult<Real> eval_solution(const NumericContext<Real>& ctx, const SolutionForm<Real>& sol,
                               const complex_t<Real>& z0,
                               std::optional<complex_t<Real>> lq_override = std::nullopt) {
  using C = complex_t<Real>;
  ThetaEvaluator<Real> th(ctx);
  EvalResult<Real> out;
  C pre = sol.theta_exp == Rational(0) ? C(1) : th.theta_power(z0, sol.theta_exp);
  std::optional<C> lq = lq_override;
  C sum(0);
  for (const auto& term : sol.strata()) {
    const auto& g = term.series;
    C w = g.ramification() == 1 ? z0 : cexp(clog(z0) / Real(g.ramification()));
    C value = g.evaluate_root(w);
    if (!g.is_exact()) {
      Real aw = cabs(w), tail(0);
      for (long e = g.truncation() - 3; e < g.truncation(); ++e)
        tail = std::max<Real>(tail, cabs(g.coefficient(e)) * ipow(C(aw), e).real());
      if (tail > ctx.tol() * std::max<Real>(cabs(value), epsilon<Real>())) out.truncation_dominated = true;
    }
    C e = term.character == C(1) ? C(1) : th.q_character(z0, term.character);
    if (term.log_power > 0 && !lq) lq = th.q_log(z0);
    sum += e * (term.log_power > 0 ? ipow(*lq, term.log_power) : C(1)) * value;
  }
  out.value = pre * sum;
  return out;
}

}  // namespace qdiff
