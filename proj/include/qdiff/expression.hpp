#pragma once

#include <qdiff/numeric.hpp>

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qdiff {

// Parse tree of an operator written in z, S (the shift), q and numeric literals.
//
//   expr   := term (('+'|'-') term)*
//   term   := signed ('*' signed)*
//   signed := ('-'|'+') signed | factor
//   factor := atom ('^' int)?
//   atom   := 'z' | 'S' | 'q' ('^' rational)? | number | '(' expr ')'
//
// "S" may also be written as the Greek sigma, "-" as U+2212 and "*" as U+00B7.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { kZ, kShift, kQ, kNumber, kNeg, kAdd, kSub, kMul, kPow };

  Kind kind = Kind::kNumber;
  std::string literal;     // kNumber: decimal or p/r text, without the trailing i
  bool imaginary = false;  // kNumber
  Rational q_exponent{1};  // kQ
  long exponent = 0;       // kPow
  ExprPtr lhs, rhs;        // kNeg and kPow use lhs only

  static ExprPtr leaf(Kind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
  }
  static ExprPtr q(Rational r) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::kQ;
    e->q_exponent = r;
    return e;
  }
  static ExprPtr number(std::string lit, bool imag = false) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::kNumber;
    e->literal = std::move(lit);
    e->imaginary = imag;
    return e;
  }
  static ExprPtr unary(ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::kNeg;
    e->lhs = std::move(a);
    return e;
  }
  static ExprPtr binary(Kind k, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
  }
  static ExprPtr power(ExprPtr a, long n) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::kPow;
    e->lhs = std::move(a);
    e->exponent = n;
    return e;
  }
};

inline bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::kZ:
    case Expr::Kind::kShift:
      return true;
    case Expr::Kind::kQ:
      return a.q_exponent == b.q_exponent;
    case Expr::Kind::kNumber:
      return a.literal == b.literal && a.imaginary == b.imaginary;
    case Expr::Kind::kNeg:
      return equal(*a.lhs, *b.lhs);
    case Expr::Kind::kPow:
      return a.exponent == b.exponent && equal(*a.lhs, *b.lhs);
    default:
      return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kAdd:
    case Expr::Kind::kSub:
      return 1;
    case Expr::Kind::kMul:
      return 2;
    case Expr::Kind::kNeg:
      return 3;
    case Expr::Kind::kPow:
      return 4;
    default:
      return 5;
  }
}

inline void print(const Expr& e, int min_prec, std::string& out) {
  bool paren = precedence(e) < min_prec;
  if (paren) out += '(';
  switch (e.kind) {
    case Expr::Kind::kZ:
      out += 'z';
      break;
    case Expr::Kind::kShift:
      out += 'S';
      break;
    case Expr::Kind::kQ:
      out += 'q';
      if (e.q_exponent != Rational(1)) {
        if (e.q_exponent.denominator() == 1)
          out += "^" + to_string(e.q_exponent);
        else
          out += "^(" + to_string(e.q_exponent) + ")";
      }
      break;
    case Expr::Kind::kNumber:
      out += e.literal;
      if (e.imaginary) out += 'i';
      break;
    case Expr::Kind::kNeg:
      out += '-';
      print(*e.lhs, 3, out);
      break;
    case Expr::Kind::kAdd:
    case Expr::Kind::kSub:
      print(*e.lhs, 1, out);
      out += e.kind == Expr::Kind::kAdd ? " + " : " - ";
      print(*e.rhs, 2, out);
      break;
    case Expr::Kind::kMul:
      print(*e.lhs, 2, out);
      out += '*';
      print(*e.rhs, 3, out);
      break;
    case Expr::Kind::kPow:
      print(*e.lhs, 5, out);
      out += '^' + std::to_string(e.exponent);
      break;
  }
  if (paren) out += ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    ExprPtr e = expr();
    skip();
    if (pos_ < text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return e;
  }

 private:
  // One logical character, folding the accepted non-ASCII spellings to ASCII.
  char peek_char(std::size_t* width = nullptr) const {
    std::size_t w = 1;
    char c = pos_ < text_.size() ? text_[pos_] : '\0';
    if (text_.substr(pos_, 3) == "\xE2\x88\x92") {
      c = '-';
      w = 3;
    } else if (text_.substr(pos_, 2) == "\xC2\xB7") {
      c = '*';
      w = 2;
    } else if (text_.substr(pos_, 2) == "\xCF\x83") {
      c = 'S';
      w = 2;
    }
    if (width) *width = w;
    return c;
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return peek_char();
  }

  bool accept(char c) {
    std::size_t w;
    skip();
    if (pos_ < text_.size() && peek_char(&w) == c) {
      pos_ += w;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (accept('+'))
        e = Expr::binary(Expr::Kind::kAdd, e, term());
      else if (accept('-'))
        e = Expr::binary(Expr::Kind::kSub, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = signed_factor();
    while (accept('*')) e = Expr::binary(Expr::Kind::kMul, e, signed_factor());
    return e;
  }

  ExprPtr signed_factor() {
    if (accept('-')) return Expr::unary(signed_factor());
    if (accept('+')) return signed_factor();
    return factor();
  }

  ExprPtr factor() {
    ExprPtr a = atom();
    if (accept('^')) a = Expr::power(a, integer_exponent());
    return a;
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  long integer_exponent() {
    bool paren = accept('(');
    bool neg = accept('-');
    skip();
    std::size_t at = pos_;
    std::string d = digits();
    if (d.empty()) throw ParseError("expected integer exponent", at);
    if (paren) expect(')');
    long v = std::stol(d);
    return neg ? -v : v;
  }

  Rational rational_exponent() {
    bool paren = accept('(');
    bool neg = accept('-');
    skip();
    std::size_t at = pos_;
    std::string num = digits();
    if (num.empty()) throw ParseError("expected exponent of q", at);
    std::int64_t den = 1;
    if (accept('/')) {
      skip();
      std::size_t dat = pos_;
      std::string d = digits();
      if (d.empty()) throw ParseError("expected denominator", dat);
      den = std::stoll(d);
      if (den == 0) throw ParseError("zero denominator", dat);
    }
    if (paren) expect(')');
    Rational r(std::stoll(num), den);
    return neg ? -r : r;
  }

  ExprPtr atom() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    std::size_t w;
    char c = peek_char(&w);
    std::size_t at = pos_;
    if (c == 'z') {
      pos_ += w;
      return Expr::leaf(Expr::Kind::kZ);
    }
    if (c == 'S') {
      pos_ += w;
      return Expr::leaf(Expr::Kind::kShift);
    }
    if (c == 'q') {
      pos_ += w;
      // q^r binds tighter than a general power: q^2^3 is (q^2)^3.
      std::size_t save = pos_;
      if (accept('^')) {
        std::size_t after_caret = pos_;
        skip();
        if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '(' ||
                                    peek_char() == '-'))
          return Expr::q(rational_exponent());
        pos_ = after_caret;
        throw ParseError("expected exponent of q", pos_);
      }
      pos_ = save;
      return Expr::q(Rational(1));
    }
    if (c == 'i') {
      pos_ += w;
      return Expr::number("1", true);
    }
    if (c == '(') {
      pos_ += w;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    throw ParseError("unexpected '" + std::string(text_.substr(at, w)) + "'", at);
  }

  ExprPtr number() {
    std::size_t start = pos_;
    std::string lit = digits();
    bool decimal = false;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      decimal = true;
      ++pos_;
      lit += '.' + digits();
    }
    if (lit == "." || lit.empty()) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      std::string e = "e";
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) e += text_[pos_++];
      std::string d = digits();
      if (d.empty()) {
        pos_ = save;
      } else {
        lit += e + d;
        decimal = true;
      }
    }
    if (!decimal && pos_ < text_.size() && text_[pos_] == '/') {
      std::size_t save = pos_;
      ++pos_;
      std::string d = digits();
      if (d.empty()) {
        pos_ = save;
      } else {
        if (std::stoll(d) == 0) throw ParseError("zero denominator", save + 1);
        lit += '/' + d;
      }
    }
    bool imag = false;
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      imag = true;
      ++pos_;
    }
    return Expr::number(lit, imag);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print(e, 0, out);
  return out;
}

inline ExprPtr parse_expression(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace qdiff
