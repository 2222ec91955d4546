// SPDX-License-Identifier: Apache-2.0
#include "hartogs/ball.hpp"

#include <algorithm>

namespace hartogs {

namespace {

constexpr mpfr_prec_t kRadPrec = Ball::kRadPrec;

// Upper bound on the rounding error of a midpoint computed with RNDN at its
// own precision: one ulp (the true RNDN bound is half an ulp).
BigFloat round_err_bound(const BigFloat& mid) {
  if (mpfr_zero_p(mid.raw())) {
    // An inexact operation whose result rounds to zero can only happen on
    // underflow; 2^(emin) bounds the lost magnitude.
    return BigFloat::pow2(mpfr_get_emin(), kRadPrec);
  }
  mpfr_exp_t e = mpfr_get_exp(mid.raw());
  return BigFloat::pow2(e - mid.prec(), kRadPrec);
}

BigFloat rad_add(const BigFloat& a, const BigFloat& b) {
  return fadd(a, b, kRadPrec, MPFR_RNDU);
}

}  // namespace

void Ball::absorb_round_err(int ternary) {
  if (ternary == 0) return;
  rad_ = rad_add(rad_, round_err_bound(mid_));
}

Ball Ball::from_long(long v, mpfr_prec_t prec) {
  Ball r(prec);
  int t = mpfr_set_si(r.mid_.raw(), v, MPFR_RNDN);
  r.absorb_round_err(t);
  return r;
}

Ball Ball::from_mpz(const mpz_class& v, mpfr_prec_t prec) {
  Ball r(prec);
  int t = mpfr_set_z(r.mid_.raw(), v.get_mpz_t(), MPFR_RNDN);
  r.absorb_round_err(t);
  return r;
}

Ball Ball::from_mpq(const mpq_class& v, mpfr_prec_t prec) {
  Ball r(prec);
  int t = mpfr_set_q(r.mid_.raw(), v.get_mpq_t(), MPFR_RNDN);
  r.absorb_round_err(t);
  return r;
}

Ball Ball::from_double_exact(double v, mpfr_prec_t prec) {
  Ball r(prec < 53 ? 53 : prec);
  mpfr_set_d(r.mid_.raw(), v, MPFR_RNDN);  // exact at >= 53 bits
  return r;
}

Ball Ball::from_endpoints(const BigFloat& lo, const BigFloat& hi, mpfr_prec_t prec) {
  Ball r(prec);
  int t = mpfr_add(r.mid_.raw(), lo.raw(), hi.raw(), MPFR_RNDN);
  int t2 = mpfr_div_2ui(r.mid_.raw(), r.mid_.raw(), 1, MPFR_RNDN);  // exact
  (void)t2;
  // radius >= max(hi - mid, mid - lo), each rounded up
  BigFloat up = fsub(hi, r.mid_, kRadPrec, MPFR_RNDU);
  BigFloat dn = fsub(r.mid_, lo, kRadPrec, MPFR_RNDU);
  r.rad_ = fmax(up, dn);
  if (r.rad_.sgn() < 0) mpfr_set_zero(r.rad_.raw(), 1);  // lo == hi exactly
  if (t != 0) r.rad_ = rad_add(r.rad_, round_err_bound(r.mid_));
  return r;
}

Ball Ball::pi(mpfr_prec_t prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_const_pi(lo.raw(), MPFR_RNDD);
  mpfr_const_pi(hi.raw(), MPFR_RNDU);
  return from_endpoints(lo, hi, prec);
}

Ball Ball::sqrt_ui(unsigned long m, mpfr_prec_t prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_sqrt_ui(lo.raw(), m, MPFR_RNDD);
  mpfr_sqrt_ui(hi.raw(), m, MPFR_RNDU);
  return from_endpoints(lo, hi, prec);
}

BigFloat Ball::lo() const {
  // Exact subtraction: wide enough target precision.
  BigFloat r(mid_.prec() + kRadPrec + 4);
  mpfr_sub(r.raw(), mid_.raw(), rad_.raw(), MPFR_RNDD);
  return r;
}

BigFloat Ball::hi() const {
  BigFloat r(mid_.prec() + kRadPrec + 4);
  mpfr_add(r.raw(), mid_.raw(), rad_.raw(), MPFR_RNDU);
  return r;
}

bool Ball::contains(const mpq_class& v) const {
  BigFloat l = lo(), h = hi();
  return mpfr_cmp_q(l.raw(), v.get_mpq_t()) <= 0 && mpfr_cmp_q(h.raw(), v.get_mpq_t()) >= 0;
}

bool Ball::contains(const Ball& other) const {
  return lo().cmp(other.lo()) <= 0 && hi().cmp(other.hi()) >= 0;
}

bool Ball::overlaps(const Ball& other) const {
  return lo().cmp(other.hi()) <= 0 && other.lo().cmp(hi()) <= 0;
}

std::string Ball::str(int digits) const {
  if (is_exact()) return mid_.str(digits);
  return mid_.str(digits) + " +/- " + rad_.str(3);
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  int t = mpfr_add(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
  r.rad_ = rad_add(a.rad_, b.rad_);
  r.absorb_round_err(t);
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  int t = mpfr_sub(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
  r.rad_ = rad_add(a.rad_, b.rad_);
  r.absorb_round_err(t);
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec(), b.prec()));
  int t = mpfr_mul(r.mid_.raw(), a.mid_.raw(), b.mid_.raw(), MPFR_RNDN);
  // |a.mid|*b.rad + |b.mid|*a.rad + a.rad*b.rad, all rounded up
  BigFloat am(kRadPrec), bm(kRadPrec);
  mpfr_abs(am.raw(), a.mid_.raw(), MPFR_RNDU);
  mpfr_abs(bm.raw(), b.mid_.raw(), MPFR_RNDU);
  BigFloat r1 = fmul(am, b.rad_, kRadPrec, MPFR_RNDU);
  BigFloat r2 = fmul(bm, a.rad_, kRadPrec, MPFR_RNDU);
  BigFloat r3 = fmul(a.rad_, b.rad_, kRadPrec, MPFR_RNDU);
  r.rad_ = rad_add(rad_add(r1, r2), r3);
  r.absorb_round_err(t);
  return r;
}

Ball Ball::operator-() const {
  Ball r(prec());
  mpfr_neg(r.mid_.raw(), mid_.raw(), MPFR_RNDN);  // exact
  r.rad_ = rad_;
  return r;
}

Ball Ball::recip() const {
  if (contains_zero()) throw divisor_straddles_zero();
  BigFloat l = lo(), h = hi();
  mpfr_prec_t p = prec();
  BigFloat rl(p), rh(p);
  // 1/[l,h]: monotone decreasing on intervals excluding zero
  mpfr_ui_div(rl.raw(), 1, h.raw(), MPFR_RNDD);
  mpfr_ui_div(rh.raw(), 1, l.raw(), MPFR_RNDU);
  return from_endpoints(rl, rh, p);
}

Ball operator/(const Ball& a, const Ball& b) { return a * b.recip(); }

Ball Ball::abs() const {
  if (is_nonnegative()) return *this;
  if (is_negative()) return -*this;
  // straddles zero: [0, max(-lo, hi)]
  BigFloat h = fmax(fneg(lo()), hi());
  return from_endpoints(BigFloat(prec()), h, prec());
}

Ball Ball::square() const {
  Ball m = abs();
  BigFloat l = m.lo(), h = m.hi();
  mpfr_prec_t p = prec();
  BigFloat rl(p), rh(p);
  mpfr_sqr(rl.raw(), l.raw(), MPFR_RNDD);
  mpfr_sqr(rh.raw(), h.raw(), MPFR_RNDU);
  return from_endpoints(rl, rh, p);
}

Ball Ball::sqrt() const {
  BigFloat l = lo(), h = hi();
  if (l.sgn() < 0) {
    if (hi().sgn() < 0) throw precondition_error("sqrt of a negative interval");
    mpfr_set_zero(l.raw(), 1);  // clamp: value known nonnegative by caller contract
  }
  mpfr_prec_t p = prec();
  BigFloat rl(p), rh(p);
  mpfr_sqrt(rl.raw(), l.raw(), MPFR_RNDD);
  mpfr_sqrt(rh.raw(), h.raw(), MPFR_RNDU);
  return from_endpoints(rl, rh, p);
}

Ball Ball::log() const {
  if (lo().sgn() <= 0) throw log_of_nonpositive();
  mpfr_prec_t p = prec();
  BigFloat l = lo(), h = hi();
  BigFloat rl(p), rh(p);
  mpfr_log(rl.raw(), l.raw(), MPFR_RNDD);
  mpfr_log(rh.raw(), h.raw(), MPFR_RNDU);
  return from_endpoints(rl, rh, p);
}

Ball Ball::exp() const {
  mpfr_prec_t p = prec();
  BigFloat l = lo(), h = hi();
  BigFloat rl(p), rh(p);
  mpfr_exp(rl.raw(), l.raw(), MPFR_RNDD);
  mpfr_exp(rh.raw(), h.raw(), MPFR_RNDU);
  if (!rh.is_finite()) throw precision_error("exp overflow; use the log-domain representation");
  return from_endpoints(rl, rh, p);
}

namespace {

// sin/cos with radius propagated through the unit Lipschitz constant.
Ball lipschitz1(const Ball& x, int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)) {
  mpfr_prec_t p = x.prec();
  Ball r(p);
  BigFloat mid(p);
  int t = op(mid.raw(), x.mid().raw(), MPFR_RNDN);
  BigFloat rad = x.rad();
  if (t != 0) {
    mpfr_exp_t e = mpfr_zero_p(mid.raw()) ? mpfr_get_emin() : mpfr_get_exp(mid.raw());
    rad = fadd(rad, BigFloat::pow2(e - p, Ball::kRadPrec), Ball::kRadPrec, MPFR_RNDU);
  }
  Ball out = Ball::from_endpoints(mid, mid, p).widened(rad);
  // clamp to [-1, 1]
  BigFloat l = out.lo(), h = out.hi();
  BigFloat one = BigFloat::of_long(1, 32);
  BigFloat mone = BigFloat::of_long(-1, 32);
  if (l.cmp(mone) < 0) l = mone;
  if (h.cmp(one) > 0) h = one;
  return Ball::from_endpoints(l, h, p);
}

}  // namespace

Ball Ball::sin() const { return lipschitz1(*this, mpfr_sin); }
Ball Ball::cos() const { return lipschitz1(*this, mpfr_cos); }

Ball Ball::hull(const Ball& other) const {
  return from_endpoints(fmin(lo(), other.lo()), fmax(hi(), other.hi()),
                        std::max(prec(), other.prec()));
}

Ball Ball::widened(const BigFloat& extra_rad) const {
  Ball r = *this;
  r.rad_ = rad_add(r.rad_, extra_rad);
  return r;
}

Ball Ball::round_to(mpfr_prec_t p) const {
  Ball r(p);
  int t = mpfr_set(r.mid_.raw(), mid_.raw(), MPFR_RNDN);
  r.rad_ = rad_;
  r.absorb_round_err(t);
  return r;
}

bool Ball::certified_ge(const Ball& a, const Ball& b) {
  return a.lo().cmp(b.hi()) >= 0;
}

bool Ball::certified_gt(const Ball& a, const Ball& b) {
  return a.lo().cmp(b.hi()) > 0;
}

// ---------------------------------------------------------------------------
// BallComplex

BallComplex operator+(const BallComplex& a, const BallComplex& b) {
  return BallComplex(a.re_ + b.re_, a.im_ + b.im_);
}

BallComplex operator-(const BallComplex& a, const BallComplex& b) {
  return BallComplex(a.re_ - b.re_, a.im_ - b.im_);
}

BallComplex operator*(const BallComplex& a, const BallComplex& b) {
  return BallComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
}

BallComplex operator*(const Ball& a, const BallComplex& b) {
  return BallComplex(a * b.re_, a * b.im_);
}

BallComplex operator/(const BallComplex& a, const BallComplex& b) {
  Ball n2 = b.norm2();
  if (n2.contains_zero()) throw divisor_straddles_zero();
  BallComplex num = a * b.conj();
  Ball inv = n2.recip();
  return BallComplex(num.re() * inv, num.im() * inv);
}

Ball BallComplex::norm2() const { return re_.square() + im_.square(); }

Ball BallComplex::abs() const { return norm2().sqrt(); }

std::string BallComplex::str(int digits) const {
  return "(" + re_.str(digits) + ", " + im_.str(digits) + ")";
}

BallComplex unit_exp(const Ball& s) {
  mpfr_prec_t p = s.prec();
  Ball ang = Ball::pi(p) * s;
  return BallComplex(ang.cos(), ang.sin());
}

BallComplex unit_exp(const BallComplex& s) {
  mpfr_prec_t p = s.prec();
  Ball pi = Ball::pi(p);
  Ball modulus = (pi * (-s.im())).exp();
  Ball ang = pi * s.re();
  return BallComplex(modulus * ang.cos(), modulus * ang.sin());
}

}  // namespace hartogs
