// SPDX-License-Identifier: Apache-2.0
#include "hartogs/parse.hpp"

#include <cctype>
#include <optional>
#include <utility>
#include <vector>

#include "hartogs/errors.hpp"

namespace hartogs {

namespace {

enum class Tok { number, ident, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;      // identifier name or punct character
  mpq_class value;       // numeric literals, already exact
  size_t offset = 0;     // byte offset of the first character
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }
  size_t offset() const { return cur_.kind == Tok::end ? src_.size() : cur_.offset; }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    cur_ = Token{};
    cur_.offset = pos_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::end;
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      std::string digits = src_.substr(start, pos_ - start);
      if (pos_ < src_.size() && src_[pos_] == '.') {
        ++pos_;
        size_t fstart = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == fstart)
          throw parse_error(pos_, "expected digits after the decimal point");
        std::string frac = src_.substr(fstart, pos_ - fstart);
        // Base 10 explicitly: gmpxx's default base 0 would read a leading
        // zero ("025") as octal.
        mpz_class num(digits + frac, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        cur_.value = mpq_class(num, den);
        cur_.value.canonicalize();
      } else {
        cur_.value = mpq_class(mpz_class(digits, 10));
      }
      cur_.kind = Tok::number;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      cur_.kind = Tok::ident;
      cur_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::string("+-*^()/").find(c) != std::string::npos) {
      cur_.kind = Tok::punct;
      cur_.text = std::string(1, c);
      ++pos_;
      return;
    }
    throw parse_error(pos_, "unexpected character '" + std::string(1, c) + "'");
  }

  const std::string& src_;
  size_t pos_ = 0;
  Token cur_;
};

bool is_punct(const Token& t, const char* p) { return t.kind == Tok::punct && t.text == p; }
bool is_ident(const Token& t, const char* name) { return t.kind == Tok::ident && t.text == name; }

// number ['/' number]: '/' is permitted only between numeric literals.
mpq_class lex_rational(Lexer& lx) {
  if (lx.peek().kind != Tok::number)
    throw parse_error(lx.offset(), "expected a number");
  mpq_class v = lx.take().value;
  if (is_punct(lx.peek(), "/")) {
    lx.take();
    if (lx.peek().kind != Tok::number)
      throw parse_error(lx.offset(), "expected a number after '/'");
    Token den = lx.take();
    if (den.value == 0) throw parse_error(den.offset, "division by zero in a literal");
    v /= den.value;
  }
  return v;
}

// 'sqrt' '(' int ')': returns the (nonnegative integer) radicand.
unsigned long lex_radicand(Lexer& lx) {
  Token kw = lx.take();  // 'sqrt', already checked by the caller
  if (!is_punct(lx.peek(), "("))
    throw parse_error(lx.offset(), "expected '(' after sqrt");
  lx.take();
  if (lx.peek().kind != Tok::number)
    throw parse_error(lx.offset(), "expected an integer radicand");
  Token rad = lx.take();
  if (rad.value.get_den() != 1)
    throw parse_error(rad.offset, "radicand must be an integer");
  if (rad.value < 0) throw parse_error(rad.offset, "radicand must be nonnegative");
  if (!rad.value.get_num().fits_ulong_p())
    throw parse_error(rad.offset, "radicand too large");
  if (!is_punct(lx.peek(), ")"))
    throw parse_error(lx.offset(), "expected ')' after the radicand");
  lx.take();
  (void)kw;
  return rad.value.get_num().get_ui();
}

void expect_end(Lexer& lx) {
  if (lx.peek().kind != Tok::end)
    throw parse_error(lx.offset(), "unexpected trailing input");
}

}  // namespace

mpq_class parse_rational(const std::string& src) {
  Lexer lx(src);
  bool neg = false;
  if (is_punct(lx.peek(), "-")) {
    neg = true;
    lx.take();
  } else if (is_punct(lx.peek(), "+")) {
    lx.take();
  }
  mpq_class v = lex_rational(lx);
  expect_end(lx);
  return neg ? mpq_class(-v) : v;
}

ExactReal parse_real(const std::string& src) {
  Lexer lx(src);
  ExactReal acc;
  bool first = true;
  while (true) {
    int sign = 1;
    if (is_punct(lx.peek(), "-")) {
      sign = -1;
      lx.take();
    } else if (is_punct(lx.peek(), "+")) {
      lx.take();
    } else if (!first) {
      break;
    }
    size_t term_off = lx.offset();
    ExactReal term;
    if (is_ident(lx.peek(), "sqrt")) {
      term = ExactReal::sqrt_int(lex_radicand(lx));
    } else {
      mpq_class q = lex_rational(lx);
      if (is_punct(lx.peek(), "*")) {
        lx.take();
        if (!is_ident(lx.peek(), "sqrt"))
          throw parse_error(lx.offset(), "expected sqrt(...) after '*'");
        term = ExactReal::surd(0, q, lex_radicand(lx));
      } else {
        term = ExactReal(q);
      }
    }
    if (sign < 0) term = -term;
    try {
      acc = first ? term : acc + term;
    } catch (const precondition_error&) {
      throw parse_error(term_off, "terms lie in different quadratic fields");
    }
    first = false;
    if (lx.peek().kind == Tok::end) break;
    if (!is_punct(lx.peek(), "+") && !is_punct(lx.peek(), "-"))
      throw parse_error(lx.offset(), "expected '+', '-', or end of input");
  }
  if (first) throw parse_error(lx.offset(), "expected a real number");
  expect_end(lx);
  return acc;
}

GaussRat parse_complex(const std::string& src) {
  Lexer lx(src);
  mpq_class re = 0, im = 0;
  bool first = true;
  while (true) {
    int sign = 1;
    if (is_punct(lx.peek(), "-")) {
      sign = -1;
      lx.take();
    } else if (is_punct(lx.peek(), "+")) {
      lx.take();
    } else if (!first) {
      break;
    }
    if (is_ident(lx.peek(), "i")) {
      lx.take();
      im += sign;
    } else {
      mpq_class q = lex_rational(lx);
      if (is_ident(lx.peek(), "i")) {
        lx.take();
        im += sign * q;
      } else {
        re += sign * q;
      }
    }
    first = false;
    if (lx.peek().kind == Tok::end) break;
    if (!is_punct(lx.peek(), "+") && !is_punct(lx.peek(), "-"))
      throw parse_error(lx.offset(), "expected '+', '-', or end of input");
  }
  if (first) throw parse_error(lx.offset(), "expected a complex number");
  expect_end(lx);
  return GaussRat(re, im);
}

// ---------------------------------------------------------------------------
// Polynomial expressions: values are polynomials in X with BivarPoly
// coefficients, kept as an ascending-power vector during parsing.

namespace {

using XVec = std::vector<BivarPoly>;  // [k] multiplies X^k; empty = 0

void xv_trim(XVec& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

XVec xv_add(const XVec& a, const XVec& b, int bsign) {
  XVec r(std::max(a.size(), b.size()));
  for (size_t k = 0; k < r.size(); ++k) {
    if (k < a.size()) r[k] = r[k] + a[k];
    if (k < b.size()) r[k] = bsign > 0 ? r[k] + b[k] : r[k] - b[k];
  }
  xv_trim(r);
  return r;
}

constexpr size_t kXDegreeCap = 64;  // intermediate guard; XPoly re-checks

XVec xv_mul(const XVec& a, const XVec& b, size_t offset) {
  if (a.empty() || b.empty()) return {};
  if (a.size() + b.size() - 1 > kXDegreeCap + 1)
    throw parse_error(offset, "X-degree of the expression is too large");
  XVec r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  xv_trim(r);
  return r;
}

XVec xv_pow(const XVec& a, unsigned long e, size_t offset) {
  XVec r{BivarPoly(GaussRat(1))};
  XVec base = a;
  while (e) {
    if (e & 1) r = xv_mul(r, base, offset);
    base = e > 1 ? xv_mul(base, base, offset) : base;
    e >>= 1;
  }
  return r;
}

XVec parse_poly_expr(Lexer& lx);

XVec parse_primary(Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Tok::number) {
    mpq_class q = lex_rational(lx);
    if (is_ident(lx.peek(), "i")) {
      lx.take();
      return {BivarPoly(GaussRat(0, q))};
    }
    return {BivarPoly(GaussRat(q))};
  }
  if (is_ident(t, "i")) {
    lx.take();
    return {BivarPoly(GaussRat(mpq_class(0), mpq_class(1)))};
  }
  if (is_ident(t, "sqrt")) {
    size_t off = t.offset;
    unsigned long m = lex_radicand(lx);
    ExactReal v = ExactReal::sqrt_int(m);
    if (!v.is_rational())
      throw parse_error(off, "sqrt of a non-square is not a polynomial coefficient");
    return {BivarPoly(GaussRat(v.as_rational()))};
  }
  if (is_ident(t, "z")) {
    lx.take();
    return {BivarPoly::monomial(1, 0, GaussRat(1))};
  }
  if (is_ident(t, "w")) {
    lx.take();
    return {BivarPoly::monomial(0, 1, GaussRat(1))};
  }
  if (is_ident(t, "X")) {
    lx.take();
    return {BivarPoly(), BivarPoly(GaussRat(1))};
  }
  if (t.kind == Tok::ident)
    throw parse_error(t.offset, "unknown identifier '" + t.text + "'");
  if (is_punct(t, "(")) {
    lx.take();
    XVec v = parse_poly_expr(lx);
    if (!is_punct(lx.peek(), ")"))
      throw parse_error(lx.offset(), "expected ')'");
    lx.take();
    return v;
  }
  throw parse_error(lx.offset(), "expected a number, variable, or '('");
}

XVec parse_factor(Lexer& lx) {
  XVec v = parse_primary(lx);
  if (is_punct(lx.peek(), "^")) {
    Token caret = lx.take();
    if (lx.peek().kind != Tok::number)
      throw parse_error(lx.offset(), "expected a nonnegative integer exponent");
    Token e = lx.take();
    if (e.value.get_den() != 1 || e.value < 0)
      throw parse_error(e.offset, "exponent must be a nonnegative integer");
    if (!e.value.get_num().fits_ulong_p() || e.value.get_num().get_ui() > 1000)
      throw parse_error(e.offset, "exponent too large");
    v = xv_pow(v, e.value.get_num().get_ui(), caret.offset);
  }
  return v;
}

XVec parse_term(Lexer& lx) {
  int sign = 1;
  while (is_punct(lx.peek(), "-") || is_punct(lx.peek(), "+")) {
    if (lx.peek().text == "-") sign = -sign;
    lx.take();
  }
  XVec v = parse_factor(lx);
  while (is_punct(lx.peek(), "*")) {
    size_t off = lx.take().offset;
    while (is_punct(lx.peek(), "-") || is_punct(lx.peek(), "+")) {
      if (lx.peek().text == "-") sign = -sign;
      lx.take();
    }
    v = xv_mul(v, parse_factor(lx), off);
  }
  if (sign < 0)
    for (BivarPoly& c : v) c = -c;
  return v;
}

XVec parse_poly_expr(Lexer& lx) {
  XVec acc = parse_term(lx);
  while (is_punct(lx.peek(), "+") || is_punct(lx.peek(), "-")) {
    int bsign = lx.peek().text == "+" ? 1 : -1;
    lx.take();
    acc = xv_add(acc, parse_term(lx), bsign);
  }
  return acc;
}

}  // namespace

XPoly parse_poly(const std::string& src) {
  Lexer lx(src);
  XVec v = parse_poly_expr(lx);
  expect_end(lx);
  xv_trim(v);
  if (v.size() < 2)
    throw precondition_error("expression is not a polynomial of degree >= 1 in X");
  std::vector<BivarPoly> desc(v.size());
  for (size_t k = 0; k < v.size(); ++k) desc[k] = v[v.size() - 1 - k];
  return XPoly(std::move(desc));
}

}  // namespace hartogs
