#pragma once

#include <qdiff/numeric.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <vector>

namespace qdiff {

template <class Real>
struct Root {
  complex_t<Real> value;
  int multiplicity = 1;
};

namespace detail {

// j-th derivative of sum_k c_k x^k.
template <class Real>
complex_t<Real> poly_derivative(const std::vector<complex_t<Real>>& c, int j, const complex_t<Real>& x) {
  using C = complex_t<Real>;
  C sum(0);
  for (int k = static_cast<int>(c.size()) - 1; k >= j; --k) {
    Real f(1);
    for (int t = 0; t < j; ++t) f *= Real(k - t);
    sum = sum * x + c[k] * C(f);
  }
  return sum;
}

// sum_k |c_k| k!/(k-j)! |x|^{k-j}: the rounding scale of poly_derivative.
template <class Real>
Real poly_derivative_scale(const std::vector<complex_t<Real>>& c, int j, const Real& ax) {
  Real sum(0);
  for (int k = static_cast<int>(c.size()) - 1; k >= j; --k) {
    Real f(1);
    for (int t = 0; t < j; ++t) f *= Real(k - t);
    sum = sum * ax + cabs(c[k]) * f;
  }
  return sum;
}

template <class Real>
complex_t<Real> newton(const std::vector<complex_t<Real>>& c, int j, complex_t<Real> x) {
  using C = complex_t<Real>;
  Real eps = epsilon<Real>();
  for (int it = 0; it < 100; ++it) {
    C d = poly_derivative<Real>(c, j + 1, x);
    if (d == C(0)) break;
    C step = poly_derivative<Real>(c, j, x) / d;
    x -= step;
    if (cabs(step) <= Real(4) * eps * std::max<Real>(Real(1), cabs(x))) break;
  }
  return x;
}

}  // namespace detail

// Roots of sum_k c_k x^k with multiplicities. Companion eigenvalues in double seed
// clusters; each cluster is polished in Real by Newton on the (mu-1)-th derivative
// and accepted as a mu-fold root only if the lower derivatives vanish to tol.
template <class Real>
std::vector<Root<Real>> polynomial_roots(std::vector<complex_t<Real>> c, const Real& tol) {
  using C = complex_t<Real>;
  while (!c.empty() && c.back() == C(0)) c.pop_back();
  if (c.empty()) throw SolverError("polynomial_roots: zero polynomial");
  std::vector<Root<Real>> out;
  int zeros = 0;
  while (c[zeros] == C(0)) ++zeros;
  if (zeros > 0) {
    out.push_back({C(0), zeros});
    c.erase(c.begin(), c.begin() + zeros);
  }
  int d = static_cast<int>(c.size()) - 1;
  if (d == 0) return out;
  if (d == 1) {
    out.push_back({-c[0] / c[1], 1});
    return out;
  }

  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  std::complex<double> lead(to_double(c[d].real()), to_double(c[d].imag()));
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i)
    comp(i, d - 1) = -std::complex<double>(to_double(c[i].real()), to_double(c[i].imag())) / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw SolverError("polynomial_roots: eigenvalue iteration failed");
  std::vector<std::complex<double>> seeds(solver.eigenvalues().data(), solver.eigenvalues().data() + d);

  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(seeds[i] - seeds[j]) < 1e-2 * std::max(1.0, std::abs(seeds[i]))) parent[find(i)] = find(j);

  std::vector<std::vector<int>> clusters(d);
  for (int i = 0; i < d; ++i) clusters[find(i)].push_back(i);
  for (const auto& cl : clusters) {
    if (cl.empty()) continue;
    int mu = static_cast<int>(cl.size());
    std::complex<double> mean(0);
    for (int i : cl) mean += seeds[i];
    mean /= double(mu);
    if (mu > 1) {
      C x = detail::newton<Real>(c, mu - 1, C(Real(mean.real()), Real(mean.imag())));
      bool ok = true;
      for (int j = 0; j < mu && ok; ++j)
        ok = cabs(detail::poly_derivative<Real>(c, j, x)) <= tol * detail::poly_derivative_scale<Real>(c, j, cabs(x));
      if (ok) {
        out.push_back({x, mu});
        continue;
      }
    }
    for (int i : cl) out.push_back({detail::newton<Real>(c, 0, C(Real(seeds[i].real()), Real(seeds[i].imag()))), 1});
  }
  std::sort(out.begin(), out.end(), [](const Root<Real>& a, const Root<Real>& b) {
    double aa = to_double(cabs(a.value)), ab = to_double(cabs(b.value));
    if (std::abs(aa - ab) > 1e-8 * std::max(aa, ab)) return aa < ab;
    return std::arg(std::complex<double>(to_double(a.value.real()), to_double(a.value.imag()))) <
           std::arg(std::complex<double>(to_double(b.value.real()), to_double(b.value.imag())));
  });
  return out;
}

}  // namespace qdiff
