#pragma once

#include <qdiff/frobenius.hpp>

#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

namespace qdiff {

struct CharacterSymbol {
  bool negative = false;
  Rational exponent{0};
};

// c = +-q^{m/d} with d <= max_den, checked against the principal power.
template <class Real>
std::optional<CharacterSymbol> character_symbol(const complex_t<Real>& c, const NumericContext<Real>& ctx,
                                                int max_den = 240) {
  using C = complex_t<Real>;
  for (int sign : {1, -1}) {
    C v = C(Real(sign)) * c;
    C r = clog(v) / ctx.log_q();
    if (std::abs(to_double(r.imag())) > 1e-6) continue;
    double x = to_double(r.real());
    for (int den = 1; den <= max_den; ++den) {
      auto num = static_cast<std::int64_t>(std::llround(x * den));
      Rational e(num, den);
      if (e.denominator() != den) continue;
      if (cabs(v - ctx.q_power(e)) <= Real(100) * ctx.tol() * cabs(v)) return CharacterSymbol{sign < 0, e};
    }
  }
  return std::nullopt;
}

inline std::string to_string(const CharacterSymbol& s) {
  std::string base = s.exponent == Rational(0) ? "1" : "q^{" + to_string(s.exponent) + "}";
  return (s.negative ? "-" : "") + base;
}

template <class Real>
std::string format_complex_short(const complex_t<Real>& c, int digits = 10) {
  std::ostringstream os;
  os.precision(digits);
  double re = to_double(c.real()), im = to_double(c.imag());
  double mag = std::max(std::abs(re), std::abs(im));
  if (std::abs(im) <= 1e-14 * mag || im == 0) {
    os << re;
  } else if (std::abs(re) <= 1e-14 * mag) {
    os << im << "i";
  } else {
    os << "(" << re << (im < 0 ? "-" : "+") << std::abs(im) << "i)";
  }
  return os.str();
}

template <class Real>
std::string character_text(const complex_t<Real>& c, const NumericContext<Real>& ctx) {
  if (auto s = character_symbol<Real>(c, ctx)) return to_string(*s);
  return format_complex_short<Real>(c);
}

// e.g. "theta^{-1/2} e_{q,q^{1/4}} l_q F(z^{1/2})"
template <class Real>
std::string solution_text(const SolutionForm<Real>& sol, const NumericContext<Real>& ctx) {
  std::string out;
  int idx = 0;
  for (const auto& t : sol.strata()) {
    std::string term;
    if (sol.theta_exp != Rational(0)) term += "theta^{" + to_string(sol.theta_exp) + "} ";
    if (t.character != complex_t<Real>(1)) term += "e_{q," + character_text<Real>(t.character, ctx) + "} ";
    if (t.log_power == 1) term += "l_q ";
    if (t.log_power > 1) term += "l_q^" + std::to_string(t.log_power) + " ";
    int s = t.series.ramification();
    term += "F" + std::to_string(idx++) + (s == 1 ? "(z)" : "(z^{1/" + std::to_string(s) + "})");
    out += (out.empty() ? "" : " + ") + term;
  }
  return out;
}

template <class Real>
std::string series_text(const PuiseuxSeries<Real>& f, int terms = 6) {
  std::string out;
  int shown = 0;
  int s = f.ramification();
  const auto& c = f.coefficients();
  for (std::size_t i = 0; i < c.size() && shown < terms; ++i) {
    if (c[i] == complex_t<Real>(0)) continue;
    long e = f.offset() + static_cast<long>(i);
    std::string mono;
    if (e != 0) {
      Rational r(e, s);
      mono = r == Rational(1) ? "z" : "z^" + (r.denominator() == 1 ? to_string(r) : "{" + to_string(r) + "}");
    }
    std::string coef = format_complex_short<Real>(c[i], 8);
    out += (out.empty() ? "" : " + ") + (mono.empty() ? coef : coef + "*" + mono);
    ++shown;
  }
  if (out.empty()) out = "0";
  if (!f.is_exact()) out += " + O(z^" + to_string(f.truncation_exponent()) + ")";
  return out;
}

inline std::string polygon_ascii(const NewtonPolygon& poly) {
  std::ostringstream os;
  os << "points (x = n - i, y = val a_i):\n";
  for (const auto& p : poly.points) os << "  i=" << p.index << "  (" << p.x << ", " << to_string(p.y) << ")\n";
  os << "segments:\n";
  for (const auto& s : poly.segments) {
    os << "  [" << s.x_start << ", " << s.x_end << "]  slope " << to_string(s.slope) << "  length " << s.length()
       << "  supported by i =";
    for (int i : s.supporting_indices) os << " " << i;
    os << "\n";
  }
  // Plot on an integer grid when the heights allow it.
  if (!poly.points.empty()) {
    long xmax = poly.points.back().x;
    Rational ymin = poly.points.front().y, ymax = ymin;
    for (const auto& p : poly.points) {
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    long den = 1;
    for (const auto& p : poly.points) den = std::lcm(den, static_cast<long>(p.y.denominator()));
    long rows = static_cast<long>(((ymax - ymin) * Rational(den)).numerator());
    if (xmax <= 60 && rows <= 30) {
      os << "plot (rows in units of 1/" << den << "):\n";
      for (long r = rows; r >= 0; --r) {
        std::string line(static_cast<std::size_t>(xmax + 1), '.');
        for (const auto& p : poly.points) {
          long pr = static_cast<long>(((p.y - ymin) * Rational(den)).numerator());
          if (pr == r) {
            bool vertex = false;
            for (const auto& v : poly.vertices) vertex = vertex || v.index == p.index;
            line[static_cast<std::size_t>(p.x)] = vertex ? 'o' : '*';
          }
        }
        os << "  " << line << "\n";
      }
    }
  }
  return os.str();
}

inline std::string polygon_svg(const NewtonPolygon& poly) {
  const double W = 480, H = 320, pad = 30;
  double xmax = 1, ymin = 0, ymax = 1;
  for (const auto& p : poly.points) {
    xmax = std::max(xmax, double(p.x));
    double y = boost::rational_cast<double>(p.y);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  auto X = [&](double x) { return pad + x / xmax * (W - 2 * pad); };
  auto Y = [&](double y) { return H - pad - (y - ymin) / (ymax - ymin) * (H - 2 * pad); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
  for (const auto& v : poly.vertices) os << X(double(v.x)) << "," << Y(boost::rational_cast<double>(v.y)) << " ";
  os << "\"/>\n";
  for (const auto& p : poly.points)
    os << "  <circle cx=\"" << X(double(p.x)) << "\" cy=\"" << Y(boost::rational_cast<double>(p.y))
       << "\" r=\"4\"><title>i=" << p.index << "</title></circle>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace qdiff
