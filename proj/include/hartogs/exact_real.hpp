// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "hartogs/ball.hpp"

namespace hartogs {

/// Exact real number: either a rational or a real quadratic surd a + b*sqrt(m)
/// with rational a, b (b != 0) and squarefree integer m >= 2.
///
/// The representation is canonical (square parts of the radicand are folded
/// into b; b == 0 collapses to the rational case), so equality, sign, and
/// comparison against rationals are decidable exactly.  The class is closed
/// under the affine operations used by the factoradic recurrence: adding a
/// rational, scaling by a rational, and negation all stay in Q(sqrt(m)).
class ExactReal {
 public:
  ExactReal() : a_(0), b_(0), m_(1) {}
  ExactReal(const mpq_class& r) : a_(r), b_(0), m_(1) { a_.canonicalize(); }
  ExactReal(long n) : a_(n), b_(0), m_(1) {}

  /// a + b*sqrt(m), canonicalized.  m is any nonnegative integer.
  static ExactReal surd(const mpq_class& a, const mpq_class& b, unsigned long m);
  /// sqrt(m) for integer m >= 0 (collapses to a rational when m is a square).
  static ExactReal sqrt_int(unsigned long m) { return surd(0, 1, m); }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return b_ == 0 && a_ == 0; }
  /// Rational value; requires is_rational().
  const mpq_class& as_rational() const;
  const mpq_class& rat_part() const { return a_; }
  const mpq_class& surd_coeff() const { return b_; }
  unsigned long radicand() const { return m_; }

  int sgn() const;
  /// Exact sign of (*this - r).
  int cmp(const mpq_class& r) const;
  bool operator==(const ExactReal& o) const {
    return a_ == o.a_ && b_ == o.b_ && m_ == o.m_;
  }

  ExactReal operator+(const mpq_class& r) const { return ExactReal(a_ + r, b_, m_); }
  ExactReal operator-(const mpq_class& r) const { return ExactReal(a_ - r, b_, m_); }
  ExactReal operator-() const { return ExactReal(-a_, -b_, m_); }

  /// True when *this and o lie in a common quadratic field (at least one is
  /// rational, or both have the same radicand), so that exact ring operations
  /// and comparisons between them are available.
  bool same_field(const ExactReal& o) const {
    return is_rational() || o.is_rational() || m_ == o.m_;
  }
  /// Exact sum/difference/product; requires same_field (throws otherwise).
  ExactReal operator+(const ExactReal& o) const;
  ExactReal operator-(const ExactReal& o) const { return *this + (-o); }
  ExactReal operator*(const ExactReal& o) const;
  /// Exact sign of (*this - o); requires same_field (throws otherwise).
  int cmp(const ExactReal& o) const { return (*this - o).sgn(); }
  ExactReal scaled(const mpq_class& q) const {
    if (q == 0) return ExactReal();
    return ExactReal(a_ * q, b_ * q, m_);
  }
  ExactReal scaled(const mpz_class& n) const { return scaled(mpq_class(n)); }

  mpz_class floor() const;
  /// Nearest integer e with ties rounded down, and remainder d = *this - e.
  /// The remainder satisfies -1/2 < d <= 1/2.
  std::pair<mpz_class, ExactReal> nearest() const;

  /// Certified enclosure at the budget's precision.  Exact rationals with
  /// dyadic denominators produce zero-radius balls.
  Ball eval(const PrecisionBudget& budget) const;

  /// Canonical text form accepted by the expression grammar.
  std::string str() const;

 private:
  ExactReal(mpq_class a, mpq_class b, unsigned long m)
      : a_(std::move(a)), b_(std::move(b)), m_(m) {
    a_.canonicalize();
    b_.canonicalize();
    if (b_ == 0) m_ = 1;
  }

  mpq_class a_;      // rational part
  mpq_class b_;      // coefficient of sqrt(m); 0 iff rational
  unsigned long m_;  // squarefree radicand; 1 when rational
};

}  // namespace hartogs
