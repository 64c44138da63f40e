#pragma once

#include <qdiff/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <optional>

namespace qdiff {

// (a; base)_k = prod_{i<k} (1 - a base^i).
template <class C>
C q_pochhammer(const C& a, const C& base, long k) {
  if (k < 0) throw DomainError("q_pochhammer: negative length");
  C result(1), term = a;
  for (long i = 0; i < k; ++i) {
    result *= C(1) - term;
    term *= base;
  }
  return result;
}

// (a; base)_inf, requires |base| < 1. Stops once the remaining factors are within tol of 1.
template <class Real>
complex_t<Real> q_pochhammer_infinite(const complex_t<Real>& a, const complex_t<Real>& base, const Real& tol) {
  using C = complex_t<Real>;
  Real ab = cabs(base);
  if (!(ab < Real(1))) throw DomainError("q_pochhammer: infinite product needs |base| < 1");
  Real stop = tol * (Real(1) - ab) / Real(100);
  C result(1), term = a;
  for (int i = 0; i < 100000; ++i) {
    result *= C(1) - term;
    term *= base;
    if (cabs(term) < stop) return result;
  }
  throw DomainError("q_pochhammer: infinite product did not converge");
}

// theta(z) = sum_d q^{-d(d+1)/2} z^d with theta(qz) = z theta(z); zeros at -q^k.
template <class Real>
class ThetaEvaluator {
 public:
  using Complex = complex_t<Real>;

  explicit ThetaEvaluator(const NumericContext<Real>& ctx, std::optional<int> term_bound = std::nullopt)
      : ctx_(ctx), term_bound_(term_bound) {}

  const NumericContext<Real>& context() const { return ctx_; }

  // Smallest D with both tails |t_{+-(D+1)}| below tol/100 of the largest term.
  int cutoff(const Complex& z) const {
    if (term_bound_) return *term_bound_;
    double L = to_double(ctx_.log_abs_q());
    double lz = std::log(to_double(cabs(z)));
    auto pos = [&](double d) { return -d * (d + 1) / 2 * L + d * lz; };
    auto neg = [&](double e) { return -e * (e - 1) / 2 * L - e * lz; };
    double peak = 0;
    for (int d = 0; d < 10000; ++d) {
      peak = std::max({peak, pos(d), neg(d)});
      if (d > 0 && pos(d) < pos(d - 1) && neg(d) < neg(d - 1)) break;
    }
    double thresh = peak + std::log(to_double(ctx_.tol())) - std::log(100.0);
    int D = 0;
    while (D < 100000 && (pos(D + 1) > thresh || neg(D + 1) > thresh)) ++D;
    return D;
  }

  // The k with |z + q^k| < tol |q^k|, if any.
  std::optional<long> zero_index(const Complex& z) const {
    Real az = cabs(z);
    if (az == Real(0)) return std::nullopt;
    long k0 = std::lround(to_double(rlog(az) / ctx_.log_abs_q()));
    for (long k = k0 - 1; k <= k0 + 1; ++k) {
      Complex qk = ipow(ctx_.q(), k);
      if (cabs(z + qk) < ctx_.tol() * cabs(qk)) return k;
    }
    return std::nullopt;
  }

  Complex theta(const Complex& z) const { return sums(z, cutoff(z)).value; }
  Complex theta(const Complex& z, int D) const { return sums(z, D).value; }

  // (q^{-1};q^{-1})_inf (-q^{-1} z;q^{-1})_inf (-1/z;q^{-1})_inf
  Complex theta_triple_product(const Complex& z) const {
    reject_zero(z);
    Complex r = Complex(1) / ctx_.q();
    const Real& tol = ctx_.tol();
    return q_pochhammer_infinite<Real>(r, r, tol) * q_pochhammer_infinite<Real>(-r * z, r, tol) *
           q_pochhammer_infinite<Real>(Complex(-1) / z, r, tol);
  }

  // l_q(z) = z theta'(z) / theta(z); l_q(qz) = l_q(z) + 1.
  Complex q_log(const Complex& z) const {
    reject_zero(z);
    auto s = sums(z, cutoff(z));
    return s.derivative / s.value;
  }

  // e_{q,lambda}(z) = theta(z) / theta(z/lambda); e(qz) = lambda e(z).
  Complex q_character(const Complex& z, const Complex& lambda) const {
    if (lambda == Complex(0)) throw DomainError("q_character: lambda must be nonzero");
    reject_zero(z);
    Complex w = z / lambda;
    reject_zero(w);
    return theta(z) / theta(w);
  }

  // Principal theta(z)^r.
  Complex theta_power(const Complex& z, const Rational& r) const {
    reject_zero(z);
    Complex t = theta(z);
    if (r.denominator() == 1) return ipow(t, r.numerator());
    return cexp(Complex(Real(r.numerator()) / Real(r.denominator())) * clog(t));
  }

 private:
  struct Sums {
    Complex value;
    Complex derivative;  // z theta'(z)
  };

  void reject_zero(const Complex& z) const {
    if (z == Complex(0)) throw DomainError("theta: z = 0 is an essential singularity");
    if (auto k = zero_index(z)) throw DomainError("theta: z = -q^" + std::to_string(*k) + " is a zero");
  }

  Sums sums(const Complex& z, int D) const {
    if (z == Complex(0)) throw DomainError("theta: z = 0 is an essential singularity");
    Complex qinv = Complex(1) / ctx_.q();
    Complex zinv = Complex(1) / z;
    Complex value(1), deriv(0);
    Complex t(1), qpow(1);  // t_d, q^{-d}
    for (int d = 1; d <= D; ++d) {
      qpow *= qinv;
      t *= z * qpow;
      value += t;
      deriv += Complex(Real(d)) * t;
    }
    t = Complex(1);
    qpow = Complex(1);  // q^{-(e-1)}
    for (int e = 1; e <= D; ++e) {
      t *= zinv * qpow;
      qpow *= qinv;
      value += t;
      deriv -= Complex(Real(e)) * t;
    }
    return {value, deriv};
  }

  NumericContext<Real> ctx_;
  std::optional<int> term_bound_;
};

}  // namespace qdiff
