// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>

#include "hartogs/ball.hpp"
#include "hartogs/errors.hpp"

namespace hartogs {

/// Exact Gaussian rational re + im*i.
struct GaussRat {
  mpq_class re, im;

  GaussRat() : re(0), im(0) {}
  GaussRat(const mpq_class& r) : re(r), im(0) {}
  GaussRat(long r) : re(r), im(0) {}
  GaussRat(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  bool operator==(const GaussRat& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussRat& o) const { return !(*this == o); }

  GaussRat operator+(const GaussRat& o) const { return {re + o.re, im + o.im}; }
  GaussRat operator-(const GaussRat& o) const { return {re - o.re, im - o.im}; }
  GaussRat operator-() const { return {-re, -im}; }
  GaussRat operator*(const GaussRat& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussRat operator/(const GaussRat& o) const {
    mpq_class n2 = o.re * o.re + o.im * o.im;
    if (n2 == 0) throw precondition_error("division by zero Gaussian rational");
    GaussRat num = *this * GaussRat{o.re, -o.im};
    return {num.re / n2, num.im / n2};
  }

  /// |z|^2, exact.
  mpq_class norm2() const { return re * re + im * im; }

  BallComplex eval(mpfr_prec_t prec) const {
    return BallComplex::from_mpq(re, im, prec);
  }

  /// Canonical "a+bi" text (e.g. "2", "-1/3i", "1/2-2i").
  std::string str() const {
    if (im == 0) return re.get_str();
    std::string i_part = (im == 1 ? "" : im == -1 ? "-" : im.get_str()) + "i";
    if (re == 0) return i_part;
    return re.get_str() + (im > 0 ? "+" : "") + i_part;
  }
};

}  // namespace hartogs
