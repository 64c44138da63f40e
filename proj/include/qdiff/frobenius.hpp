#pragma once

#include <qdiff/newton_polygon.hpp>
#include <qdiff/roots.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace qdiff {

// theta^{theta_exp} * e_{q,character} * l_q^{log_power} * series(z^{1/s}) + tail,
// where every tail entry shares theta_exp and character and has a lower log power.
template <class Real>
struct SolutionForm {
  Rational theta_exp{0};
  complex_t<Real> character{1};
  int log_power = 0;
  PuiseuxSeries<Real> series;
  std::vector<SolutionForm> tail;

  // The top term followed by the tail, each entry without its own tail.
  std::vector<SolutionForm> strata() const {
    std::vector<SolutionForm> out;
    SolutionForm top = *this;
    top.tail.clear();
    out.push_back(top);
    for (const auto& t : tail) {
      for (auto s : t.strata()) out.push_back(std::move(s));
    }
    return out;
  }
};

template <class Real>
struct CharacteristicData {
  Segment segment;
  long height = 0;
  std::vector<complex_t<Real>> polynomial;  // ascending powers of x, x^lowest_power divided out
  int lowest_power = 0;
  std::vector<Root<Real>> roots;
};

// chi(x) = sum_{i on the segment} [z^h] a_i * x^i for a horizontal segment at height h.
template <class Real>
CharacteristicData<Real> characteristic(const DifferenceOperator<Real>& op, const Segment& seg) {
  if (!seg.horizontal()) throw SolverError("characteristic: segment is not horizontal, apply theta_transform first");
  if (seg.y_start.denominator() != 1) throw SolverError("characteristic: non-integral height");
  CharacteristicData<Real> d;
  d.segment = seg;
  d.height = static_cast<long>(seg.y_start.numerator());
  int lo = seg.supporting_indices.front(), hi = seg.supporting_indices.back();
  d.lowest_power = lo;
  d.polynomial.assign(static_cast<std::size_t>(hi - lo + 1), complex_t<Real>(0));
  for (int i : seg.supporting_indices) d.polynomial[i - lo] = op.coefficient(i).coefficient(d.height);
  d.roots = polynomial_roots<Real>(d.polynomial, op.context().tol());
  return d;
}

template <class Real>
struct ResonanceClass {
  complex_t<Real> base;
  std::vector<long> shifts;  // ascending, one entry per root counted with multiplicity: root = base q^shift
};

namespace detail {

// m with u = v q^m, |m| <= max_shift.
template <class Real>
std::optional<long> q_shift_between(const NumericContext<Real>& ctx, const complex_t<Real>& u,
                                    const complex_t<Real>& v) {
  complex_t<Real> ratio = u / v;
  long m0 = std::lround(to_double(rlog(cabs(ratio)) / ctx.log_abs_q()));
  std::optional<long> found;
  for (long m = m0 - 1; m <= m0 + 1; ++m) {
    if (std::labs(m) > ctx.max_shift()) continue;
    complex_t<Real> qm = ipow(ctx.q(), m);
    if (cabs(ratio - qm) < ctx.tol() * cabs(qm)) {
      if (found) throw SolverError("resonance: ambiguous q-shift between roots");
      found = m;
    }
  }
  return found;
}

}  // namespace detail

// Groups nonzero roots whose ratios lie in q^Z; the base is the member with the smallest shift.
template <class Real>
std::vector<ResonanceClass<Real>> resonance_partition(const std::vector<Root<Real>>& roots,
                                                      const NumericContext<Real>& ctx) {
  std::vector<Root<Real>> rs;
  for (const auto& r : roots)
    if (r.value != complex_t<Real>(0)) rs.push_back(r);
  std::size_t n = rs.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (detail::q_shift_between(ctx, rs[i].value, rs[j].value)) parent[find(i)] = find(j);

  std::vector<ResonanceClass<Real>> out;
  std::vector<bool> done(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = find(i);
    if (done[root]) continue;
    done[root] = true;
    std::vector<std::pair<long, int>> members;  // shift relative to rs[i], multiplicity
    for (std::size_t j = 0; j < n; ++j) {
      if (find(j) != root) continue;
      auto m = detail::q_shift_between(ctx, rs[j].value, rs[i].value);
      if (!m) throw SolverError("resonance: class is not closed under q-shifts within max_shift");
      members.emplace_back(*m, rs[j].multiplicity);
    }
    long lo = members.front().first;
    for (const auto& mm : members) lo = std::min(lo, mm.first);
    ResonanceClass<Real> cls;
    cls.base = rs[i].value * ipow(ctx.q(), lo);
    for (const auto& [m, mult] : members)
      for (int k = 0; k < mult; ++k) cls.shifts.push_back(m - lo);
    std::sort(cls.shifts.begin(), cls.shifts.end());
    out.push_back(std::move(cls));
  }
  return out;
}

template <class Real>
struct HorizontalDiagnostics {
  Real consistency{0};  // largest relative defect of the over-determined equations
  int classes = 0;
  long overflow_index = -1;  // first coefficient index cut for exceeding the representable range
};

// Solutions e_{q,c} sum_j l_q^j G_j for every resonance class of a horizontal segment.
// Each free coefficient (shift m, log power j < multiplicity at m) seeds one solution.
template <class Real>
std::vector<SolutionForm<Real>> solve_horizontal(const DifferenceOperator<Real>& op,
                                                 const CharacteristicData<Real>& chr, int N,
                                                 HorizontalDiagnostics<Real>* diag = nullptr) {
  using C = complex_t<Real>;
  using Series = PuiseuxSeries<Real>;
  const auto& ctx = op.context();
  int n = op.order();
  long h = chr.height;
  auto classes = resonance_partition(chr.roots, ctx);
  if (diag) diag->classes = static_cast<int>(classes.size());

  const Real limit = rsqrt(std::numeric_limits<Real>::max());
  std::vector<SolutionForm<Real>> out;
  for (const auto& cls : classes) {
    std::map<long, int> mult;
    for (long m : cls.shifts) ++mult[m];
    int R = static_cast<int>(cls.shifts.size()) - 1;
    long Neff = N + cls.shifts.back();

    long J = 0;
    for (int k = 0; k <= n; ++k) J = std::max(J, op.coefficient(k).end() - h - 1);
    J = std::min(J, Neff - 1);

    // x_d^k for x_d = c q^d
    std::vector<std::vector<C>> pw(static_cast<std::size_t>(Neff), std::vector<C>(n + 1));
    C xd = cls.base;
    for (long d = 0; d < Neff; ++d) {
      C p(1);
      for (int k = 0; k <= n; ++k) {
        pw[d][k] = p;
        p *= xd;
      }
      xd *= ctx.q();
    }
    // r runs to R + 1: the pivot at a shift of multiplicity mu is L^{(mu)}, mu <= R + 1.
    std::vector<std::vector<Real>> kr(n + 1, std::vector<Real>(R + 2));
    for (int k = 0; k <= n; ++k) {
      Real v(1);
      for (int r = 0; r <= R + 1; ++r) {
        kr[k][r] = v;
        v *= Real(k);
      }
    }
    std::vector<std::vector<Real>> binom(R + 1, std::vector<Real>(R + 1, Real(0)));
    for (int j = 0; j <= R; ++j) {
      binom[j][0] = Real(1);
      for (int i = 1; i <= j; ++i) binom[j][i] = binom[j - 1][i - 1] + (i <= j - 1 ? binom[j - 1][i] : Real(0));
    }

    // L[j'][d][r] = sum_k k^r a_{k, h+j'} x_d^k, with scale[j'][d] = sum_k |a_{k,h+j'}| |x_d|^k.
    std::vector<std::vector<std::vector<C>>> L(J + 1);
    std::vector<std::vector<Real>> Lscale(J + 1);
    for (long jp = 0; jp <= J; ++jp) {
      std::vector<C> a(n + 1);
      bool any = false;
      for (int k = 0; k <= n; ++k) {
        a[k] = op.coefficient(k).coefficient(h + jp);
        any = any || a[k] != C(0);
      }
      if (!any) continue;
      long dmax = Neff - jp;
      L[jp].assign(static_cast<std::size_t>(dmax), std::vector<C>(R + 2, C(0)));
      Lscale[jp].assign(static_cast<std::size_t>(dmax), Real(0));
      for (long d = 0; d < dmax; ++d) {
        for (int k = 0; k <= n; ++k) {
          if (a[k] == C(0)) continue;
          C t = a[k] * pw[d][k];
          Lscale[jp][d] += cabs(t);
          for (int r = 0; r <= R + 1; ++r) L[jp][d][r] += C(kr[k][r]) * t;
        }
      }
    }
    if (L[0].empty()) throw SolverError("solve_horizontal: no coefficient at the segment height");

    std::vector<std::pair<long, int>> seeds;
    for (const auto& [m, mu] : mult)
      for (int j = 0; j < mu; ++j) seeds.emplace_back(m, j);

    std::vector<SolutionForm<Real>> cls_out;
    for (const auto& [m_seed, j_seed] : seeds) {
      std::vector<std::vector<C>> g(R + 1, std::vector<C>(static_cast<std::size_t>(Neff), C(0)));
      long known = Neff;
      for (long m = 0; m < Neff; ++m) {
        auto it = mult.find(m);
        int mu = it == mult.end() ? 0 : it->second;
        std::vector<C> rhs(R + 1, C(0));
        Real rhs_scale(0);
        for (int i = 0; i <= R; ++i) {
          for (int j = i; j <= R; ++j) {
            for (long jp = 1; jp <= std::min(m, J); ++jp) {
              if (L[jp].empty()) continue;
              const C& gv = g[j][m - jp];
              if (gv == C(0)) continue;
              C t = C(binom[j][i]) * L[jp][m - jp][j - i] * gv;
              rhs[i] += t;
              rhs_scale += cabs(t);
            }
          }
        }
        for (int j = 0; j < mu; ++j) g[j][m] = (m == m_seed && j == j_seed) ? C(1) : C(0);
        const C& piv = L[0][m][mu];
        if (cabs(piv) <= ctx.tol() * Lscale[0][m] * (mu == 0 ? Real(1) : Real(R + 1))) {
          if (mu == 0)
            throw SolverError("solve_horizontal: denominator vanishes at non-resonant index " + std::to_string(m));
          throw SolverError("solve_horizontal: root multiplicity inconsistent at index " + std::to_string(m));
        }
        for (int i = R - mu; i >= 0; --i) {
          C s = rhs[i];
          for (int j = i + mu + 1; j <= R; ++j) s += C(binom[j][i]) * L[0][m][j - i] * g[j][m];
          g[i + mu][m] = -s / (C(binom[i + mu][i]) * piv);
        }
        bool finite = true;
        for (int j = 0; j <= R; ++j) finite = finite && cabs(g[j][m]) < limit;
        if (!finite) {
          // Coefficients past here are not representable; the series is known below m only.
          known = m;
          if (diag) diag->overflow_index = diag->overflow_index < 0 ? m : std::min<long>(diag->overflow_index, m);
          break;
        }
        if (diag) {
          for (int i = R - mu + 1; i <= R; ++i) {
            Real defect = cabs(rhs[i]) / (rhs_scale + Real(1));
            diag->consistency = std::max(diag->consistency, defect);
          }
        }
      }

      for (auto& row : g) row.resize(static_cast<std::size_t>(known));
      Real gmax(0);
      for (const auto& row : g)
        for (const auto& v : row) gmax = std::max<Real>(gmax, cabs(v));
      std::vector<int> live;
      for (int j = 0; j <= R; ++j) {
        Real mj(0);
        for (const auto& v : g[j]) mj = std::max<Real>(mj, cabs(v));
        if (mj > ctx.tol() * gmax) live.push_back(j);
      }
      SolutionForm<Real> sol;
      sol.character = cls.base;
      sol.log_power = live.back();
      sol.series = Series(g[live.back()], 0, 1, known);
      for (int t = static_cast<int>(live.size()) - 2; t >= 0; --t) {
        SolutionForm<Real> lower;
        lower.character = cls.base;
        lower.log_power = live[t];
        lower.series = Series(g[live[t]], 0, 1, known);
        sol.tail.push_back(std::move(lower));
      }
      cls_out.push_back(std::move(sol));
    }
    std::stable_sort(cls_out.begin(), cls_out.end(), [](const SolutionForm<Real>& a, const SolutionForm<Real>& b) {
      if (a.log_power != b.log_power) return a.log_power < b.log_power;
      return a.series.offset() < b.series.offset();
    });
    for (auto& s : cls_out) out.push_back(std::move(s));
  }
  return out;
}

template <class Real>
struct TransformedOperator {
  DifferenceOperator<Real> op;  // variable Q = z^{1/s}, shift base p = q^{1/s}
  Rational slope;
  int ramification = 1;
  long removed_power = 0;  // Q^{removed_power} divided out
};

// Conjugation by theta^{slope}: sigma^k theta^mu = q^{mu k(k-1)/2} z^{mu k} theta^mu sigma^k.
template <class Real>
TransformedOperator<Real> theta_transform(const DifferenceOperator<Real>& op, const Rational& slope) {
  using Series = PuiseuxSeries<Real>;
  const auto& ctx = op.context();
  auto s = static_cast<int>(slope.denominator());
  auto t = static_cast<long>(slope.numerator());
  auto ctx2 = ctx.with_q(ctx.q_power(Rational(1, s)));
  std::vector<Series> b;
  std::optional<Rational> vmin;
  for (int k = 0; k <= op.order(); ++k) {
    Series bk = substitute_root(op.coefficient(k), s)
                    .scaled(ctx.q_power(Rational(t * k * (k - 1), 2 * s)))
                    .shifted(Rational(t * k));
    auto v = valuation(bk, ctx.tol());
    if (v && (!vmin || *v < *vmin)) vmin = v;
    b.push_back(std::move(bk));
  }
  long v = static_cast<long>(vmin->numerator());
  for (auto& bk : b) bk = bk.shifted(Rational(-v));
  return {DifferenceOperator<Real>(ctx2, std::move(b)), slope, s, v};
}

template <class Real>
struct SegmentReport {
  Segment segment;
  int ramification = 1;
  std::vector<Root<Real>> roots;  // nonzero characteristic roots
  int zero_roots_skipped = 0;
  int solutions = 0;
  Real consistency{0};
  long overflow_index = -1;
};

template <class Real>
struct SolutionBasis {
  int order = 0;
  std::vector<SolutionForm<Real>> solutions;
  std::vector<SegmentReport<Real>> segments;
  int zero_roots_skipped = 0;
  bool complete() const { return static_cast<int>(solutions.size()) == order; }
};

namespace detail {

template <class Real>
void lift(SolutionForm<Real>& sol, const Rational& slope, int s) {
  sol.theta_exp = slope;
  sol.series = sol.series.reinterpreted(s);
  for (auto& t : sol.tail) lift(t, slope, s);
}

}  // namespace detail

// One block of solutions per polygon segment, each block built on the theta-transformed operator.
template <class Real>
SolutionBasis<Real> solve(const DifferenceOperator<Real>& op, int N) {
  SolutionBasis<Real> basis;
  basis.order = op.order();
  NewtonPolygon poly = newton_polygon(op);
  for (const auto& seg : poly.segments) {
    SegmentReport<Real> rep;
    rep.segment = seg;
    HorizontalDiagnostics<Real> diag;
    std::vector<SolutionForm<Real>> sols;
    if (seg.horizontal()) {
      auto chr = characteristic(op, seg);
      rep.roots = chr.roots;
      sols = solve_horizontal(op, chr, N, &diag);
    } else {
      auto tr = theta_transform(op, seg.slope);
      NewtonPolygon tp = newton_polygon(tr.op);
      const Segment* hs = tp.horizontal();
      if (!hs || hs->length() != seg.length())
        throw SolverError("theta_transform did not produce a horizontal edge of length " +
                          std::to_string(seg.length()));
      auto chr = characteristic(tr.op, *hs);
      rep.ramification = tr.ramification;
      rep.zero_roots_skipped = chr.lowest_power;
      rep.roots = chr.roots;
      sols = solve_horizontal(tr.op, chr, N, &diag);
      for (auto& s : sols) detail::lift(s, seg.slope, tr.ramification);
    }
    rep.solutions = static_cast<int>(sols.size());
    rep.consistency = diag.consistency;
    rep.overflow_index = diag.overflow_index;
    basis.zero_roots_skipped += rep.zero_roots_skipped;
    for (auto& s : sols) basis.solutions.push_back(std::move(s));
    basis.segments.push_back(std::move(rep));
  }
  return basis;
}

}  // namespace qdiff
