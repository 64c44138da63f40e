#pragma once

#include <qdiff/numeric.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace qdiff {

// Truncated series sum_k c_k z^{(offset+k)/s}. Exponent numerators at or above
// truncation are unknown; unstored numerators below it are zero.
template <class Real>
class PuiseuxSeries {
 public:
  using Complex = complex_t<Real>;
  static constexpr long kExact = std::numeric_limits<long>::max() / 8;

  PuiseuxSeries() = default;

  PuiseuxSeries(std::vector<Complex> coeffs, long offset = 0, int ramification = 1, long truncation = kExact)
      : ramification_(ramification), offset_(offset), truncation_(truncation), coeffs_(std::move(coeffs)) {
    if (ramification_ < 1) throw Error("series ramification must be positive");
    normalize();
  }

  static PuiseuxSeries constant(const Complex& c) { return PuiseuxSeries({c}); }
  static PuiseuxSeries monomial(const Complex& c, long numerator, int ramification = 1) {
    return PuiseuxSeries({c}, numerator, ramification);
  }
  static PuiseuxSeries zero(int ramification = 1, long truncation = kExact) {
    return PuiseuxSeries({}, 0, ramification, truncation);
  }

  int ramification() const { return ramification_; }
  long offset() const { return offset_; }
  long truncation() const { return truncation_; }
  bool is_exact() const { return truncation_ >= kExact; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  long end() const { return offset_ + static_cast<long>(coeffs_.size()); }

  // Lowest numerator that may be nonzero (truncation for stored-empty series).
  long lowest_possible() const { return coeffs_.empty() ? truncation_ : offset_; }

  Complex coefficient(long numerator) const {
    if (numerator < offset_ || numerator >= end()) return Complex(0);
    return coeffs_[static_cast<std::size_t>(numerator - offset_)];
  }

  Complex coefficient_at(const Rational& exponent) const {
    Rational n = exponent * Rational(ramification_);
    if (n.denominator() != 1) return Complex(0);
    return coefficient(static_cast<long>(n.numerator()));
  }

  Rational truncation_exponent() const { return Rational(truncation_, ramification_); }

  Real max_abs() const {
    Real m(0);
    for (const auto& c : coeffs_) m = std::max<Real>(m, cabs(c));
    return m;
  }

  PuiseuxSeries with_ramification(int s) const {
    if (s % ramification_ != 0) throw Error("with_ramification: target must be a multiple");
    long f = s / ramification_;
    if (f == 1) return *this;
    std::vector<Complex> c(coeffs_.empty() ? 0 : (coeffs_.size() - 1) * f + 1, Complex(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i * f] = coeffs_[i];
    return PuiseuxSeries(std::move(c), offset_ * f, s, is_exact() ? kExact : truncation_ * f);
  }

  // Same numerators read against a different ramification.
  PuiseuxSeries reinterpreted(int s) const { return PuiseuxSeries(coeffs_, offset_, s, truncation_); }

  PuiseuxSeries truncated(long truncation) const {
    return PuiseuxSeries(coeffs_, offset_, ramification_, std::min(truncation, truncation_));
  }

  // Multiply by z^e.
  PuiseuxSeries shifted(const Rational& e) const {
    int s = std::lcm(ramification_, static_cast<int>(e.denominator()));
    PuiseuxSeries r = with_ramification(s);
    long d = static_cast<long>(e.numerator() * (s / e.denominator()));
    r.offset_ += d;
    if (!r.is_exact()) r.truncation_ += d;
    return r;
  }

  PuiseuxSeries scaled(const Complex& c) const {
    std::vector<Complex> out(coeffs_);
    for (auto& x : out) x *= c;
    return PuiseuxSeries(std::move(out), offset_, ramification_, truncation_);
  }

  PuiseuxSeries operator-() const { return scaled(Complex(-1)); }

  friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) { return combine(a, b, 1); }
  friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return combine(a, b, -1); }

  friend PuiseuxSeries operator*(const PuiseuxSeries& x, const PuiseuxSeries& y) {
    int s = std::lcm(x.ramification_, y.ramification_);
    PuiseuxSeries a = x.with_ramification(s), b = y.with_ramification(s);
    long t = std::min(sat_add(a.truncation_, b.lowest_possible()), sat_add(b.truncation_, a.lowest_possible()));
    if (a.coeffs_.empty() || b.coeffs_.empty()) return zero(s, t);
    long off = a.offset_ + b.offset_;
    long len = static_cast<long>(a.coeffs_.size() + b.coeffs_.size() - 1);
    if (t < kExact) len = std::max(0L, std::min(len, t - off));
    std::vector<Complex> c(static_cast<std::size_t>(len), Complex(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == Complex(0)) continue;
      long jmax = std::min<long>(static_cast<long>(b.coeffs_.size()), len - static_cast<long>(i));
      for (long j = 0; j < jmax; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return PuiseuxSeries(std::move(c), off, s, t);
  }

  PuiseuxSeries& operator+=(const PuiseuxSeries& b) { return *this = *this + b; }

  // Value with w standing for z^{1/s}.
  Complex evaluate_root(const Complex& w) const {
    Complex sum(0), p = ipow(w, offset_);
    for (const auto& c : coeffs_) {
      sum += c * p;
      p *= w;
    }
    return sum;
  }

 private:
  static long sat_add(long a, long b) {
    if (a >= kExact || b >= kExact) return kExact;
    return a + b;
  }

  static PuiseuxSeries combine(const PuiseuxSeries& x, const PuiseuxSeries& y, int sign) {
    int s = std::lcm(x.ramification_, y.ramification_);
    PuiseuxSeries a = x.with_ramification(s), b = y.with_ramification(s);
    long t = std::min(a.truncation_, b.truncation_);
    if (a.coeffs_.empty() && b.coeffs_.empty()) return zero(s, t);
    long lo = a.coeffs_.empty() ? b.offset_ : b.coeffs_.empty() ? a.offset_ : std::min(a.offset_, b.offset_);
    long hi = std::max(a.coeffs_.empty() ? lo : a.end(), b.coeffs_.empty() ? lo : b.end());
    std::vector<Complex> c(static_cast<std::size_t>(hi - lo), Complex(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[a.offset_ - lo + i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
      if (sign > 0)
        c[b.offset_ - lo + i] += b.coeffs_[i];
      else
        c[b.offset_ - lo + i] -= b.coeffs_[i];
    }
    return PuiseuxSeries(std::move(c), lo, s, t);
  }

  void normalize() {
    if (!is_exact() && end() > truncation_) {
      long keep = std::max(0L, truncation_ - offset_);
      coeffs_.resize(static_cast<std::size_t>(keep));
    }
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == Complex(0)) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      offset_ = 0;
      return;
    }
    while (coeffs_.back() == Complex(0)) coeffs_.pop_back();
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
    offset_ += static_cast<long>(lead);
  }

  int ramification_ = 1;
  long offset_ = 0;
  long truncation_ = kExact;
  std::vector<Complex> coeffs_;
};

// sigma_q^k: coefficient of z^{e/s} picks up q^{k e / s}.
template <class Real>
PuiseuxSeries<Real> sigma_q(const NumericContext<Real>& ctx, const PuiseuxSeries<Real>& f, long k) {
  using C = complex_t<Real>;
  if (f.is_zero() || k == 0) return f;
  C unit = ipow(ctx.q_power(Rational(1, f.ramification())), k);
  std::vector<C> c(f.coefficients());
  C m = ipow(unit, f.offset());
  for (auto& x : c) {
    x *= m;
    m *= unit;
  }
  return PuiseuxSeries<Real>(std::move(c), f.offset(), f.ramification(), f.truncation());
}

// Exponent of the first coefficient above tol * max|c|; empty for a zero series.
template <class Real>
std::optional<Rational> valuation(const PuiseuxSeries<Real>& f, const Real& tol) {
  Real thresh = tol * f.max_abs();
  const auto& c = f.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (cabs(c[i]) > thresh) return Rational(f.offset() + static_cast<long>(i), f.ramification());
  return std::nullopt;
}

// f(z) -> f(Q^s) for an integral series f.
template <class Real>
PuiseuxSeries<Real> substitute_root(const PuiseuxSeries<Real>& f, int s) {
  if (f.ramification() != 1) throw Error("substitute_root: series must be integral");
  return f.with_ramification(s).reinterpreted(1);
}

}  // namespace qdiff
