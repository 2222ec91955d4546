// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>

#include "hartogs/bigfloat.hpp"
#include "hartogs/errors.hpp"

namespace hartogs {

/// Working-precision policy for enclosure computations.
///
/// `bits` is the mantissa precision of ball midpoints.  Algorithms that fail
/// to certify a result at the current precision restart from exact seeds with
/// doubled precision, at most `max_restarts` times, then throw
/// `precision_exhausted`.
struct PrecisionBudget {
  mpfr_prec_t bits = 128;
  int max_restarts = 8;

  PrecisionBudget() = default;
  PrecisionBudget(mpfr_prec_t b, int r = 8) : bits(b < 32 ? 32 : b), max_restarts(r) {}
  PrecisionBudget escalated() const { return PrecisionBudget(bits * 2, max_restarts); }
};

/// Run `fn(bits)` with doubling precision until it stops throwing
/// precision-class errors; rethrow after `budget.max_restarts` attempts.
template <typename Fn>
auto with_escalation(const PrecisionBudget& budget, Fn&& fn) {
  mpfr_prec_t bits = budget.bits;
  for (int attempt = 0;; ++attempt, bits *= 2) {
    try {
      return fn(bits);
    } catch (const precision_error&) {
      if (attempt >= budget.max_restarts) throw;
    }
  }
}

/// A real interval stored as midpoint +/- radius.
///
/// The midpoint carries the working precision; the radius is a low-precision
/// nonnegative float always rounded upward, so every operation returns an
/// enclosure of the exact image.  Derived quantities never assume more than
/// "the true value lies within [lo(), hi()]".
class Ball {
 public:
  static constexpr mpfr_prec_t kRadPrec = 32;

  Ball() : mid_(64), rad_(kRadPrec) {}
  explicit Ball(mpfr_prec_t prec) : mid_(prec), rad_(kRadPrec) {}

  static Ball exact_zero(mpfr_prec_t prec = 64) { return Ball(prec); }
  static Ball from_long(long v, mpfr_prec_t prec);
  static Ball from_mpz(const mpz_class& v, mpfr_prec_t prec);
  static Ball from_mpq(const mpq_class& v, mpfr_prec_t prec);
  /// Exact dyadic constant (doubles are exact in binary).
  static Ball from_double_exact(double v, mpfr_prec_t prec);
  static Ball from_endpoints(const BigFloat& lo, const BigFloat& hi, mpfr_prec_t prec);
  static Ball pi(mpfr_prec_t prec);
  /// sqrt of a nonnegative integer, correctly rounded endpoints.
  static Ball sqrt_ui(unsigned long m, mpfr_prec_t prec);

  const BigFloat& mid() const { return mid_; }
  const BigFloat& rad() const { return rad_; }
  mpfr_prec_t prec() const { return mid_.prec(); }

  BigFloat lo() const;  ///< lower endpoint, rounded down
  BigFloat hi() const;  ///< upper endpoint, rounded up

  bool is_exact() const { return rad_.is_zero(); }
  bool is_finite() const { return mid_.is_finite() && rad_.is_finite(); }
  bool contains_zero() const { return lo().sgn() <= 0 && hi().sgn() >= 0; }
  bool excludes_zero() const { return !contains_zero(); }
  bool is_positive() const { return lo().sgn() > 0; }      ///< entire ball > 0
  bool is_nonnegative() const { return lo().sgn() >= 0; }
  bool is_negative() const { return hi().sgn() < 0; }
  bool contains(const mpq_class& v) const;
  bool contains(const Ball& other) const;  ///< other is a subset of *this
  bool overlaps(const Ball& other) const;

  double to_double() const { return mid_.to_double(); }
  std::string str(int digits = 17) const;

  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  /// Throws divisor_straddles_zero unless b excludes zero.
  friend Ball operator/(const Ball& a, const Ball& b);
  Ball operator-() const;

  Ball abs() const;
  Ball square() const;   ///< tighter than (*this) * (*this)
  Ball sqrt() const;     ///< requires lo() >= 0
  Ball log() const;      ///< throws log_of_nonpositive unless strictly positive
  Ball exp() const;
  Ball sin() const;
  Ball cos() const;
  Ball recip() const;    ///< 1 / *this
  Ball hull(const Ball& other) const;
  Ball widened(const BigFloat& extra_rad) const;  ///< radius enlarged by extra_rad
  Ball round_to(mpfr_prec_t prec) const;          ///< outward re-rounding

  /// Certified comparison: true only if every a' in a and b' in b satisfy a' >= b'.
  static bool certified_ge(const Ball& a, const Ball& b);
  static bool certified_gt(const Ball& a, const Ball& b);

 private:
  BigFloat mid_;
  BigFloat rad_;

  void absorb_round_err(int ternary);
  friend class BallComplex;
};

/// Rectangular complex enclosure: independent real and imaginary balls.
class BallComplex {
 public:
  BallComplex() = default;
  BallComplex(Ball re, Ball im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit BallComplex(Ball re) : re_(std::move(re)), im_(Ball::exact_zero(re_.prec())) {}
  static BallComplex exact_zero(mpfr_prec_t prec = 64) {
    return BallComplex(Ball::exact_zero(prec), Ball::exact_zero(prec));
  }
  static BallComplex from_mpq(const mpq_class& re, const mpq_class& im, mpfr_prec_t prec) {
    return BallComplex(Ball::from_mpq(re, prec), Ball::from_mpq(im, prec));
  }

  const Ball& re() const { return re_; }
  const Ball& im() const { return im_; }
  mpfr_prec_t prec() const { return re_.prec() > im_.prec() ? re_.prec() : im_.prec(); }

  bool is_exact() const { return re_.is_exact() && im_.is_exact(); }
  bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
  bool excludes_zero() const { return !contains_zero(); }
  bool contains(const BallComplex& other) const {
    return re_.contains(other.re_) && im_.contains(other.im_);
  }
  bool overlaps(const BallComplex& other) const {
    return re_.overlaps(other.re_) && im_.overlaps(other.im_);
  }

  friend BallComplex operator+(const BallComplex& a, const BallComplex& b);
  friend BallComplex operator-(const BallComplex& a, const BallComplex& b);
  friend BallComplex operator*(const BallComplex& a, const BallComplex& b);
  friend BallComplex operator*(const Ball& a, const BallComplex& b);
  friend BallComplex operator/(const BallComplex& a, const BallComplex& b);
  BallComplex operator-() const { return BallComplex(-re_, -im_); }

  BallComplex conj() const { return BallComplex(re_, -im_); }
  Ball norm2() const;  ///< |z|^2
  Ball abs() const;    ///< |z|
  std::string str(int digits = 17) const;

 private:
  Ball re_, im_;
};

/// exp(pi*i*s) for real s: the point on the unit circle with angle pi*s.
BallComplex unit_exp(const Ball& s);
/// exp(pi*i*s) for complex s = sigma + i*t: modulus exp(-pi*t), angle pi*sigma.
BallComplex unit_exp(const BallComplex& s);

}  // namespace hartogs
