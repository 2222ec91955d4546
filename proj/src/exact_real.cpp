// SPDX-License-Identifier: Apache-2.0
#include "hartogs/exact_real.hpp"

#include "hartogs/errors.hpp"

namespace hartogs {

ExactReal ExactReal::surd(const mpq_class& a, const mpq_class& b, unsigned long m) {
  if (b == 0 || m == 0) return ExactReal(a);
  // Pull square factors out of the radicand: m = s^2 * m' with m' squarefree.
  mpq_class bb = b;
  unsigned long mm = m;
  for (unsigned long p = 2; p * p <= mm; ++p) {
    while (mm % (p * p) == 0) {
      mm /= p * p;
      bb *= p;
    }
  }
  if (mm == 1) return ExactReal(a + bb);
  return ExactReal(a, bb, mm);
}

const mpq_class& ExactReal::as_rational() const {
  if (!is_rational()) throw precondition_error("value is irrational");
  return a_;
}

int ExactReal::cmp(const mpq_class& r) const {
  mpq_class d = a_ - r;
  if (b_ == 0) return mpq_sgn(d.get_mpq_t());
  if (b_ > 0) {
    // sign of d + b*sqrt(m) with b > 0: positive when d >= 0, otherwise
    // decided by comparing b^2*m against d^2.  Equality is impossible
    // because sqrt(m) is irrational for squarefree m >= 2.
    if (mpq_sgn(d.get_mpq_t()) >= 0) return 1;
    mpq_class lhs = b_ * b_ * m_;
    mpq_class rhs = d * d;
    return lhs > rhs ? 1 : -1;
  }
  // b < 0: negate and flip.
  return -((-*this).cmp(mpq_class(-r)));
}

int ExactReal::sgn() const { return cmp(mpq_class(0)); }

ExactReal ExactReal::operator+(const ExactReal& o) const {
  if (!same_field(o))
    throw precondition_error("exact arithmetic across distinct quadratic fields");
  unsigned long m = is_rational() ? o.m_ : m_;
  return ExactReal(a_ + o.a_, b_ + o.b_, m);
}

ExactReal ExactReal::operator*(const ExactReal& o) const {
  if (!same_field(o))
    throw precondition_error("exact arithmetic across distinct quadratic fields");
  unsigned long m = is_rational() ? o.m_ : m_;
  // (a + b*sqrt(m)) * (c + d*sqrt(m)) = (ac + bd*m) + (ad + bc)*sqrt(m)
  return ExactReal(a_ * o.a_ + b_ * o.b_ * m, a_ * o.b_ + b_ * o.a_, m);
}

mpz_class ExactReal::floor() const {
  if (is_rational()) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a_.get_num().get_mpz_t(), a_.get_den().get_mpz_t());
    return q;
  }
  // Bracket with an enclosure, then verify the candidate exactly.  The value
  // is irrational, so a fine enough enclosure always separates it from the
  // neighboring integers.
  for (mpfr_prec_t bits = 96;; bits *= 2) {
    Ball v = eval(PrecisionBudget(bits));
    BigFloat fl(v.prec());
    mpfr_floor(fl.raw(), v.lo().raw());
    mpz_class k;
    mpfr_get_z(k.get_mpz_t(), fl.raw(), MPFR_RNDN);
    if (cmp(mpq_class(k)) >= 0 && cmp(mpq_class(k + 1)) < 0) return k;
    if (bits > (1 << 22))
      throw precision_exhausted("floor(): failed to separate an irrational surd from an integer");
  }
}

std::pair<mpz_class, ExactReal> ExactReal::nearest() const {
  mpz_class k = floor();
  // Tie x - [x] == 1/2 rounds down (e = [x]); remainder lands in (-1/2, 1/2].
  mpq_class half(1, 2);
  mpz_class e = (cmp(mpq_class(k) + half) <= 0) ? k : mpz_class(k + 1);
  return {e, *this - mpq_class(e)};
}

Ball ExactReal::eval(const PrecisionBudget& budget) const {
  mpfr_prec_t bits = budget.bits;
  Ball av = Ball::from_mpq(a_, bits);
  if (b_ == 0) return av;
  return av + Ball::from_mpq(b_, bits) * Ball::sqrt_ui(m_, bits);
}

std::string ExactReal::str() const {
  if (is_rational()) return a_.get_str();
  std::string surd_txt;
  mpq_class babs = abs(b_);
  if (babs == 1)
    surd_txt = "sqrt(" + std::to_string(m_) + ")";
  else
    surd_txt = babs.get_str() + "*sqrt(" + std::to_string(m_) + ")";
  if (a_ == 0) return (b_ > 0 ? "" : "-") + surd_txt;
  return a_.get_str() + (b_ > 0 ? " + " : " - ") + surd_txt;
}

}  // namespace hartogs
