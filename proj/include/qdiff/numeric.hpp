#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/rational.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qdiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed operator text. position is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  // Well-formed text that does not describe a valid operator.
  explicit ParseError(const std::string& what) : Error(what), position_(std::string::npos) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Invalid q, tolerance, precision, truncation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Evaluation outside the domain of a function (theta zeros, |base| >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The solver cannot proceed (vanishing non-resonant denominator, ambiguous shift).
class SolverError : public Error {
 public:
  using Error::Error;
};

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw ParseError("empty integer in rational", 0);
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ParseError("empty integer in rational", 0);
    for (std::size_t k = i; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') throw ParseError("bad digit in rational", k);
    return std::stoll(std::string(s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in rational", slash + 1);
  return Rational(parse_int(text.substr(0, slash)), den);
}

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

template <class Real>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  using complex = std::complex<double>;
  static constexpr int digits10 = 15;
  static double default_tol() { return 1e-10; }
  static double from_string(const std::string& s) { return std::stod(s); }
};

template <>
struct scalar_traits<HighPrecision> {
  using complex = boost::multiprecision::cpp_complex_50;
  static constexpr int digits10 = 50;
  static HighPrecision default_tol() { return HighPrecision("1e-30"); }
  static HighPrecision from_string(const std::string& s) { return HighPrecision(s); }
};

template <class Real>
using complex_t = typename scalar_traits<Real>::complex;

template <class Real>
Real real_from_string(const std::string& s) {
  return scalar_traits<Real>::from_string(s);
}

template <class Real>
Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

template <class C>
auto cabs(const C& z) {
  using std::abs;
  return abs(z);
}

template <class C>
C cexp(const C& z) {
  using std::exp;
  return exp(z);
}

template <class C>
C clog(const C& z) {
  using std::log;
  return log(z);
}

template <class Real>
Real rlog(const Real& x) {
  using std::log;
  return log(x);
}

template <class Real>
Real rexp(const Real& x) {
  using std::exp;
  return exp(x);
}

template <class Real>
Real rsqrt(const Real& x) {
  using std::sqrt;
  return sqrt(x);
}

// Integer power by squaring; negative n inverts.
template <class C>
C ipow(C base, long long n) {
  if (n < 0) {
    base = C(1) / base;
    n = -n;
  }
  C result(1);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

template <class Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <class Real>
std::string format_real(const Real& x) {
  std::ostringstream os;
  os.precision(std::numeric_limits<Real>::max_digits10);
  os << x;
  return os.str();
}

template <class Real>
class NumericContext {
 public:
  using Complex = complex_t<Real>;

  explicit NumericContext(Complex q, Real tol = scalar_traits<Real>::default_tol(), int truncation = 32,
                          int max_shift = 64, int precision = scalar_traits<Real>::digits10)
      : q_(q), tol_(tol), truncation_(truncation), max_shift_(max_shift), precision_(precision) {
    Real aq = cabs(q_);
    if (!(aq > Real(1))) throw ConfigError("|q| must exceed 1, got |q| = " + format_real(aq));
    if (!(tol_ > Real(0))) throw ConfigError("tolerance must be positive");
    if (truncation_ < 1) throw ConfigError("truncation must be at least 1");
    if (max_shift_ < 0) throw ConfigError("max_shift must be nonnegative");
    if (precision_ < 1 || precision_ > scalar_traits<Real>::digits10)
      throw ConfigError("precision " + std::to_string(precision_) + " exceeds the backing type");
    log_q_ = clog(q_);
    log_abs_q_ = rlog(aq);
  }

  const Complex& q() const { return q_; }
  const Complex& log_q() const { return log_q_; }
  const Real& log_abs_q() const { return log_abs_q_; }
  const Real& tol() const { return tol_; }
  int truncation() const { return truncation_; }
  int max_shift() const { return max_shift_; }
  int precision() const { return precision_; }

  // Principal branch: q^{a/b} = (exp(Log q / b))^a, so powers sharing b compose exactly.
  Complex q_power(const Rational& e) const {
    if (e.denominator() == 1) return ipow(q_, e.numerator());
    Complex root = cexp(log_q_ / Real(e.denominator()));
    return ipow(root, e.numerator());
  }

  NumericContext with_q(Complex q) const {
    return NumericContext(q, tol_, truncation_, max_shift_, precision_);
  }
  NumericContext with_truncation(int n) const {
    return NumericContext(q_, tol_, n, max_shift_, precision_);
  }

 private:
  Complex q_;
  Complex log_q_;
  Real log_abs_q_;
  Real tol_;
  int truncation_;
  int max_shift_;
  int precision_;
};

}  // namespace qdiff
