// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles and frozen reference values for the test suite.
//
// Every nontrivial expected value is either (a) recomputed here from first
// principles with a different algorithm than the library uses (exact rational
// recurrences, integer square roots, plain mpfr loops), or (b) frozen as a
// decimal literal cross-checked against an independent arbitrary-precision
// implementation.  Tests compare library enclosures against these.
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <vector>

#include <hartogs/ball.hpp>
#include <hartogs/exact_real.hpp>

namespace oracle {

using hartogs::Ball;
using hartogs::BigFloat;

// ---------------------------------------------------------------------------
// Frozen reference values (40 significant digits, independently confirmed).

// theta11(1/2; tau=i) -- also -2*sum_m exp(-pi*(m+1/2)^2).
inline constexpr const char* kThetaHalfI =
    "-0.913579138156116821407242593401222089702";
// log|theta11(1/2; i)|
inline constexpr const char* kLogAbsThetaHalfI =
    "-0.09038527510893165529988416438870916386671";
// |g(0)| = |theta11'(0; i)|
inline constexpr const char* kAbsG0 = "2.848694603987787316079985057120911720743";
// |g(1/2)|, the minimum of |g| over the closed fundamental cell (on its boundary)
inline constexpr const char* kAbsGHalf = "1.827158276312233642814485186802444179404";
// |g(1/4)|
inline constexpr const char* kAbsGQuarter = "2.574359056154343536361307369795593908796";
// |g(i/2)| (half-period tau/2 for tau = i)
inline constexpr const char* kAbsGTauHalf = "4.007469796976480669223371087294223174158";
// |g((1+i)/2)|
inline constexpr const char* kAbsGTauPlusOneHalf =
    "3.369866986515053802317658562181824047404";
// theta11(3.4 + 2.2i; i)
inline constexpr const char* kTheta3422Re = "494889.5212176480553463968941940411034396";
inline constexpr const char* kTheta3422Im = "3738253.538687137493203214603127859779395";
// log|theta11(0.3 + 0.7i; i)|
inline constexpr const char* kLogAbsTheta0307 =
    "1.471075972183183246018090887223520696598";
// sqrt(2)
inline constexpr const char* kSqrt2 = "1.414213562373095048801688724209698078570";

// Parse a decimal literal into a few-ulp ball at the given precision.
inline Ball ref_ball(const char* decimal, mpfr_prec_t bits) {
  BigFloat v(bits);
  mpfr_set_str(v.raw(), decimal, 10, MPFR_RNDN);
  BigFloat ulp(32);
  mpfr_set_ui_2exp(ulp.raw(), 1, mpfr_get_exp(v.raw()) - bits + 2, MPFR_RNDU);
  return Ball::from_endpoints(hartogs::fsub(v, ulp, bits, MPFR_RNDD),
                              hartogs::fadd(v, ulp, bits, MPFR_RNDU), bits);
}

// Two enclosures of the same quantity must intersect.
inline bool overlaps(const Ball& a, const Ball& b) { return a.overlaps(b); }

// ---------------------------------------------------------------------------
// Integer-square-root enclosure of sqrt(m): pure GMP, no MPFR involved.
// s = isqrt(m * 4^p) gives s/2^p <= sqrt(m) < (s+1)/2^p.
inline void sqrt_bounds(unsigned long m, unsigned p, mpq_class& lo, mpq_class& hi) {
  mpz_class scaled = mpz_class(m) << (2 * p);
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
  mpz_class den = mpz_class(1) << p;
  lo = mpq_class(s, den);
  hi = mpq_class(s + 1, den);
  lo.canonicalize();
  hi.canonicalize();
}

// ---------------------------------------------------------------------------
// Paper nearest-integer convention on exact rationals: e(x) = [x] when the
// fractional part is <= 1/2, else [x]+1; equivalently e(x) = ceil(x - 1/2).
inline mpz_class e_rational(const mpq_class& x) {
  mpz_class num = 2 * x.get_num() - x.get_den();
  mpz_class den = 2 * x.get_den();
  mpz_class e;
  mpz_cdiv_q(e.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return e;
}

// ---------------------------------------------------------------------------
// Exact factoradic recurrence over Q: a_k = e(k*b_{k-1}), b_k = k*b_{k-1}-a_k,
// E_k = k*E_{k-1} + a_k, seeded with b_0 = x - E_0... the convention used in
// the library starts at k = 1 with a_1 = e(x), b_1 = x - a_1, E_1 = a_1.
struct RationalFactoradic {
  std::vector<mpz_class> a;  // digits a_1..a_K
  std::vector<mpq_class> b;  // remainders b_1..b_K
  std::vector<mpz_class> E;  // companions E_1..E_K
};

inline RationalFactoradic factoradic_rational(const mpq_class& x, unsigned K) {
  RationalFactoradic r;
  mpq_class b = x;
  mpz_class E = 0;
  for (unsigned k = 1; k <= K; ++k) {
    mpq_class kb = mpq_class(long(k)) * b;
    mpz_class ak = e_rational(kb);
    b = kb - mpq_class(ak);
    E = mpz_class(long(k)) * E + ak;
    r.a.push_back(ak);
    r.b.push_back(b);
    r.E.push_back(E);
  }
  return r;
}

// Same recurrence for a quadratic surd seed, run in plain MPFR at a fixed
// high precision with round-to-nearest.  Valid as an oracle because every
// quantity compared against it is re-verified to tolerances far above the
// accumulated rounding error at 512 bits.
struct FloatFactoradic {
  std::vector<mpz_class> a;
  std::vector<double> b;
};

inline FloatFactoradic factoradic_float(const hartogs::ExactReal& x, unsigned K,
                                        mpfr_prec_t bits = 512) {
  FloatFactoradic r;
  hartogs::PrecisionBudget pb(bits);
  BigFloat b = x.eval(pb).mid();
  for (unsigned k = 1; k <= K; ++k) {
    BigFloat kb = hartogs::fmul(BigFloat::of_long(long(k), bits), b, bits, MPFR_RNDN);
    // nearest integer, ties toward -inf (never hit for irrational seeds)
    BigFloat half(bits);
    mpfr_set_d(half.raw(), 0.5, MPFR_RNDN);
    BigFloat shifted = hartogs::fadd(kb, half, bits, MPFR_RNDN);
    mpz_class ak;
    mpfr_get_z(ak.get_mpz_t(), shifted.raw(), MPFR_RNDD);  // floor(kb + 1/2)
    // the paper convention rounds ties down: e(x) = ceil(x - 1/2); for
    // off-tie values floor(x + 1/2) coincides.
    b = hartogs::fsub(kb, BigFloat::of_mpz(ak, bits, MPFR_RNDN), bits, MPFR_RNDN);
    r.a.push_back(ak);
    r.b.push_back(mpfr_get_d(b.raw(), MPFR_RNDN));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Exact termination index for rational lattice points: the model series'
// coefficient vanishes identically from the first n with den(x) | n! and
// den(y) | n!.
inline long termination_index(const mpq_class& x, const mpq_class& y) {
  mpz_class dx = x.get_den(), dy = y.get_den();
  mpz_class fact = 1;
  for (long n = 1;; ++n) {
    fact *= n;
    if (mpz_divisible_p(fact.get_mpz_t(), dx.get_mpz_t()) &&
        mpz_divisible_p(fact.get_mpz_t(), dy.get_mpz_t()))
      return n;
  }
}

// ---------------------------------------------------------------------------
// Exact binomial coefficients C(1/2, n) by the rational recurrence
// C(1/2, 0) = 1, C(1/2, n) = C(1/2, n-1) * (1/2 - (n-1)) / n.
inline std::vector<mpq_class> binom_half(unsigned N) {
  std::vector<mpq_class> c{mpq_class(1)};
  for (unsigned n = 1; n <= N; ++n) {
    mpq_class f = (mpq_class(1, 2) - mpq_class(long(n) - 1)) / mpq_class(long(n));
    f.canonicalize();
    c.push_back(c.back() * f);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Reference theta11(1/2; i) = -2 * sum_m exp(-pi*(m+1/2)^2), plain MPFR.
inline Ball theta_half_i(mpfr_prec_t bits) {
  mpfr_prec_t wp = bits + 32;
  BigFloat pi(wp);
  mpfr_const_pi(pi.raw(), MPFR_RNDN);
  BigFloat acc(wp);
  for (long m = 0; m < 12; ++m) {
    BigFloat expo(wp);
    mpq_class s(2 * m + 1, 2);
    s = s * s;  // (m + 1/2)^2
    mpfr_mul_q(expo.raw(), pi.raw(), s.get_mpq_t(), MPFR_RNDN);
    mpfr_neg(expo.raw(), expo.raw(), MPFR_RNDN);
    mpfr_exp(expo.raw(), expo.raw(), MPFR_RNDN);
    mpfr_add(acc.raw(), acc.raw(), expo.raw(), MPFR_RNDN);
  }
  mpfr_mul_si(acc.raw(), acc.raw(), -2, MPFR_RNDN);
  BigFloat rad(32);
  mpfr_set_ui_2exp(rad.raw(), 1, mpfr_get_exp(acc.raw()) - bits, MPFR_RNDU);
  return Ball::from_endpoints(hartogs::fsub(acc, rad, wp, MPFR_RNDD),
                              hartogs::fadd(acc, rad, wp, MPFR_RNDU), wp);
}

}  // namespace oracle
