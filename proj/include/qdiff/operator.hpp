#pragma once

#include <qdiff/expression.hpp>
#include <qdiff/series.hpp>

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace qdiff {

// P = sum_i a_i(z) sigma^i with sigma f(z) = f(qz), q taken from ctx.
template <class Real>
class DifferenceOperator {
 public:
  using Complex = complex_t<Real>;
  using Series = PuiseuxSeries<Real>;

  DifferenceOperator(NumericContext<Real> ctx, std::vector<Series> coeffs)
      : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
    Real scale(0);
    for (const auto& a : coeffs_) {
      if (a.ramification() != 1) throw Error("operator coefficients must be integral in z");
      scale = std::max<Real>(scale, a.max_abs());
    }
    if (scale == Real(0)) throw ParseError("zero operator");
    auto negligible = [&](const Series& a) { return a.max_abs() <= ctx_.tol() * scale; };
    while (!coeffs_.empty() && negligible(coeffs_.back())) coeffs_.pop_back();
    if (coeffs_.size() < 2) throw ParseError("order-0 operator: no shift present");
    if (negligible(coeffs_.front())) throw ParseError("a_0 vanishes: the operator has a right factor sigma");
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Series& coefficient(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
  const std::vector<Series>& coefficients() const { return coeffs_; }
  const NumericContext<Real>& context() const { return ctx_; }

  Series apply(const Series& f) const {
    Series out = Series::zero(f.ramification());
    for (int i = 0; i <= order(); ++i) out += coeffs_[i] * sigma_q(ctx_, f, i);
    return out;
  }

  DifferenceOperator scaled(const Complex& c) const {
    std::vector<Series> b;
    for (const auto& a : coeffs_) b.push_back(a.scaled(c));
    return DifferenceOperator(ctx_, std::move(b));
  }

 private:
  NumericContext<Real> ctx_;
  std::vector<Series> coeffs_;
};

namespace detail {

// Skew polynomial sum_i p_i(z) S^i with S p(z) = p(qz) S.
template <class Real>
using OrePoly = std::vector<PuiseuxSeries<Real>>;

template <class Real>
OrePoly<Real> ore_add(const OrePoly<Real>& a, const OrePoly<Real>& b, int sign) {
  OrePoly<Real> r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] = a[i];
    if (i < b.size()) r[i] = sign > 0 ? r[i] + b[i] : r[i] - b[i];
  }
  return r;
}

template <class Real>
OrePoly<Real> ore_mul(const NumericContext<Real>& ctx, const OrePoly<Real>& a, const OrePoly<Real>& b) {
  if (a.empty() || b.empty()) return {};
  OrePoly<Real> r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * sigma_q(ctx, b[j], static_cast<long>(i));
  }
  return r;
}

template <class Real>
bool ore_is_scalar(const OrePoly<Real>& a) {
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!a[i].is_zero()) return false;
  if (a.empty()) return true;
  const auto& c = a[0].coefficients();
  return a[0].is_zero() || (a[0].offset() == 0 && c.size() == 1);
}

template <class Real>
complex_t<Real> literal_value(const Expr& e) {
  using C = complex_t<Real>;
  Real v;
  auto slash = e.literal.find('/');
  if (slash != std::string::npos)
    v = Real(std::stoll(e.literal.substr(0, slash))) / Real(std::stoll(e.literal.substr(slash + 1)));
  else
    v = real_from_string<Real>(e.literal);
  return e.imaginary ? C(Real(0), v) : C(v);
}

template <class Real>
OrePoly<Real> evaluate(const NumericContext<Real>& ctx, const Expr& e) {
  using S = PuiseuxSeries<Real>;
  using C = complex_t<Real>;
  switch (e.kind) {
    case Expr::Kind::kZ:
      return {S::monomial(C(1), 1)};
    case Expr::Kind::kShift:
      return {S::zero(), S::constant(C(1))};
    case Expr::Kind::kQ:
      return {S::constant(ctx.q_power(e.q_exponent))};
    case Expr::Kind::kNumber:
      return {S::constant(literal_value<Real>(e))};
    case Expr::Kind::kNeg: {
      OrePoly<Real> a = evaluate(ctx, *e.lhs);
      for (auto& x : a) x = -x;
      return a;
    }
    case Expr::Kind::kAdd:
      return ore_add(evaluate(ctx, *e.lhs), evaluate(ctx, *e.rhs), 1);
    case Expr::Kind::kSub:
      return ore_add(evaluate(ctx, *e.lhs), evaluate(ctx, *e.rhs), -1);
    case Expr::Kind::kMul:
      return ore_mul(ctx, evaluate(ctx, *e.lhs), evaluate(ctx, *e.rhs));
    case Expr::Kind::kPow: {
      OrePoly<Real> base = evaluate(ctx, *e.lhs);
      long n = e.exponent;
      if (n < 0) {
        if (!ore_is_scalar(base)) throw ParseError("negative powers are only allowed on scalars");
        C v = base.empty() || base[0].is_zero() ? C(0) : base[0].coefficients()[0];
        if (v == C(0)) throw ParseError("division by zero in scalar power");
        return {S::constant(ipow(v, n))};
      }
      OrePoly<Real> r = {S::constant(C(1))};
      while (n > 0) {
        if (n & 1) r = ore_mul(ctx, r, base);
        n >>= 1;
        if (n > 0) base = ore_mul(ctx, base, base);
      }
      return r;
    }
  }
  return {};
}

template <class Real>
std::string format_complex(const complex_t<Real>& c, bool standalone) {
  Real re = c.real(), im = c.imag();
  if (im == Real(0)) return format_real(re);
  if (re == Real(0)) return format_real(im) + "i";
  std::string s = format_real(re) + (im < Real(0) ? "-" : "+") + format_real(im < Real(0) ? Real(-im) : im) + "i";
  return standalone ? s : "(" + s + ")";
}

}  // namespace detail

template <class Real>
DifferenceOperator<Real> normalize(const Expr& tree, const NumericContext<Real>& ctx) {
  return DifferenceOperator<Real>(ctx, detail::evaluate(ctx, tree));
}

template <class Real>
DifferenceOperator<Real> parse_operator(std::string_view text, const NumericContext<Real>& ctx) {
  return normalize(*parse_expression(text), ctx);
}

// Canonical text: terms ordered by shift power then z power, every number at full precision.
template <class Real>
std::string to_string(const DifferenceOperator<Real>& op) {
  using C = complex_t<Real>;
  std::string out;
  for (int k = 0; k <= op.order(); ++k) {
    const auto& a = op.coefficient(k);
    for (std::size_t i = 0; i < a.coefficients().size(); ++i) {
      C c = a.coefficients()[i];
      if (c == C(0)) continue;
      long j = a.offset() + static_cast<long>(i);
      bool negative = c.imag() == Real(0) && c.real() < Real(0);
      if (negative) c = -c;
      std::string mono;
      if (j != 0) mono += j == 1 ? "z" : "z^" + std::to_string(j);
      if (k != 0) mono += std::string(mono.empty() ? "" : "*") + (k == 1 ? "S" : "S^" + std::to_string(k));
      std::string coef;
      if (c != C(1) || mono.empty()) coef = detail::format_complex<Real>(c, false);
      std::string t = coef.empty() ? mono : mono.empty() ? coef : coef + "*" + mono;
      if (out.empty())
        out = negative ? "-" + t : t;
      else
        out += (negative ? " - " : " + ") + t;
    }
  }
  return out;
}

// First-order system Y(qz) = A(z) Y(z) for Y = (f, sigma f, ..., sigma^{n-1} f); last row carries -a_k / a_n.
template <class Real>
struct CompanionSystem {
  using Series = PuiseuxSeries<Real>;
  struct Entry {
    Series numerator;
    Series denominator;
  };
  int n = 0;
  std::vector<std::vector<Entry>> entries;

  std::vector<std::vector<complex_t<Real>>> evaluate(const complex_t<Real>& z) const {
    std::vector<std::vector<complex_t<Real>>> m(n, std::vector<complex_t<Real>>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m[i][j] = entries[i][j].numerator.evaluate_root(z) / entries[i][j].denominator.evaluate_root(z);
    return m;
  }
};

template <class Real>
CompanionSystem<Real> companion(const DifferenceOperator<Real>& op) {
  using S = PuiseuxSeries<Real>;
  using C = complex_t<Real>;
  CompanionSystem<Real> sys;
  int n = op.order();
  sys.n = n;
  sys.entries.assign(n, std::vector<typename CompanionSystem<Real>::Entry>(n, {S::zero(), S::constant(C(1))}));
  for (int i = 0; i + 1 < n; ++i) sys.entries[i][i + 1].numerator = S::constant(C(1));
  for (int k = 0; k < n; ++k) sys.entries[n - 1][k] = {-op.coefficient(k), op.coefficient(n)};
  return sys;
}

template <class C>
C determinant(std::vector<std::vector<C>> m) {
  std::size_t n = m.size();
  C det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (cabs(m[r][c]) > cabs(m[piv][c])) piv = r;
    if (m[piv][c] == C(0)) return C(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      C f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

template <class Real>
struct WronskianResult {
  std::vector<std::vector<complex_t<Real>>> matrix;  // matrix[k][j] = f_j(q^k z0)
  complex_t<Real> det;
};

template <class Real>
WronskianResult<Real> wronskian_matrix(const NumericContext<Real>& ctx,
                                       const std::vector<std::function<complex_t<Real>(const complex_t<Real>&)>>& fns,
                                       const complex_t<Real>& z0) {
  using C = complex_t<Real>;
  std::size_t n = fns.size();
  WronskianResult<Real> r;
  r.matrix.assign(n, std::vector<C>(n));
  C z = z0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) r.matrix[k][j] = fns[j](z);
    z *= ctx.q();
  }
  r.det = determinant(r.matrix);
  return r;
}

}  // namespace qdiff
