// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace hartogs {

/// Thin RAII value wrapper around mpfr_t.
///
/// The wrapper owns exactly one mpfr number at a fixed precision.  All
/// arithmetic lives in free functions that take an explicit target precision
/// and rounding mode, so rounding direction is always visible at call sites;
/// the ball layer on top of this is the intended user-facing interface.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 64) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
  BigFloat(const BigFloat& o) {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_set(x_, o.x_, MPFR_RNDN);  // exact: same precision
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_swap(x_, o.x_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(x_, mpfr_get_prec(o.x_));
      mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    if (this != &o) mpfr_swap(x_, o.x_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(x_); }

  mpfr_ptr raw() { return x_; }
  mpfr_srcptr raw() const { return x_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(x_); }

  static BigFloat of_long(long v, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r(prec);
    mpfr_set_si(r.x_, v, rnd);
    return r;
  }
  static BigFloat of_mpz(const mpz_class& v, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    BigFloat r(prec);
    mpfr_set_z(r.x_, v.get_mpz_t(), rnd);
    return r;
  }
  static BigFloat of_mpq(const mpq_class& v, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    BigFloat r(prec);
    mpfr_set_q(r.x_, v.get_mpq_t(), rnd);
    return r;
  }
  static BigFloat of_double(double v, mpfr_prec_t prec = 64) {
    BigFloat r(prec);
    mpfr_set_d(r.x_, v, MPFR_RNDN);  // exact for prec >= 53
    return r;
  }
  /// 2^e, exact.
  static BigFloat pow2(mpfr_exp_t e, mpfr_prec_t prec = 32) {
    BigFloat r(prec);
    mpfr_set_ui_2exp(r.x_, 1, e, MPFR_RNDU);
    return r;
  }

  int sgn() const { return mpfr_sgn(x_); }
  bool is_zero() const { return mpfr_zero_p(x_) != 0; }
  bool is_finite() const { return mpfr_number_p(x_) != 0; }
  int cmp(const BigFloat& o) const { return mpfr_cmp(x_, o.x_); }
  int cmp_si(long v) const { return mpfr_cmp_si(x_, v); }
  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

  std::string str(int digits = 17) const {
    char fmt[32];
    std::snprintf(fmt, sizeof fmt, "%%.%dRg", digits);
    char* s = nullptr;
    mpfr_asprintf(&s, fmt, x_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

 private:
  mpfr_t x_;
};

// Rounded arithmetic helpers.  Result precision is explicit.
inline BigFloat fadd(const BigFloat& a, const BigFloat& b, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  BigFloat r(prec);
  mpfr_add(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}
inline BigFloat fsub(const BigFloat& a, const BigFloat& b, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  BigFloat r(prec);
  mpfr_sub(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}
inline BigFloat fmul(const BigFloat& a, const BigFloat& b, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  BigFloat r(prec);
  mpfr_mul(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}
inline BigFloat fdiv(const BigFloat& a, const BigFloat& b, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  BigFloat r(prec);
  mpfr_div(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}
inline BigFloat fneg(const BigFloat& a) {
  BigFloat r(a.prec());
  mpfr_neg(r.raw(), a.raw(), MPFR_RNDN);  // exact
  return r;
}
inline BigFloat fabsolute(const BigFloat& a) {
  BigFloat r(a.prec());
  mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);  // exact
  return r;
}
inline BigFloat fmin(const BigFloat& a, const BigFloat& b) { return a.cmp(b) <= 0 ? a : b; }
inline BigFloat fmax(const BigFloat& a, const BigFloat& b) { return a.cmp(b) >= 0 ? a : b; }

}  // namespace hartogs
