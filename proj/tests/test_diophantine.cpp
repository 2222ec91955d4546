// SPDX-License-Identifier: Apache-2.0
//
// Nearest-integer calculus: e/d rounding, the factoradic recurrence with its
// big-integer companion, small-divisor witnesses, and lattice reduction.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <hartogs/diophantine.hpp>
#include <hartogs/errors.hpp>

#include "oracles.hpp"

using namespace hartogs;

namespace {

ExactReal sqrt2() { return ExactReal::sqrt_int(2); }

}  // namespace

TEST_CASE("nearest integer rounds ties down") {
  NearestInt r = nearest_int(Ball::from_mpq(mpq_class(5, 2), 64));
  CHECK(r.e == 2);
  CHECK(r.d.is_exact());
  CHECK(r.d.contains(mpq_class(1, 2)));
}

TEST_CASE("nearest integer of a small negative value") {
  NearestInt r = nearest_int(Ball::from_mpq(mpq_class(-3, 10), 64));
  CHECK(r.e == 0);
  CHECK(r.d.contains(mpq_class(-3, 10)));
}

TEST_CASE("a ball overlapping a half-integer tie signals") {
  Ball straddling = Ball::from_endpoints(BigFloat::of_double(0.3, 64),
                                         BigFloat::of_double(0.7, 64), 64);
  CHECK_THROWS_AS(nearest_int(straddling), tie_straddle);
}

TEST_CASE("nearest integer convention agrees with the exact rational oracle") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-500, 500);
  std::uniform_int_distribution<long> den(1, 40);
  for (int i = 0; i < 2000; ++i) {
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    NearestInt r = nearest_int(Ball::from_mpq(q, 128));
    CHECK(r.e == oracle::e_rational(q));
    CHECK(r.d.contains(q - mpq_class(r.e)));
  }
}

TEST_CASE("factoradic of 1/3 to depth 4 matches the exact recurrence") {
  FactoradicExpansion fx = factoradic_expand(ExactReal(mpq_class(1, 3)), 4,
                                             PrecisionBudget(128));
  REQUIRE(fx.digits.size() == 4);
  CHECK(fx.digits[0] == 0);
  CHECK(fx.digits[1] == 1);
  CHECK(fx.digits[2] == -1);
  CHECK(fx.digits[3] == 0);
  CHECK(fx.remainder_exact.is_rational());
  CHECK(fx.remainder_exact.as_rational() == 0);
  oracle::RationalFactoradic ref = oracle::factoradic_rational(mpq_class(1, 3), 4);
  for (int k = 0; k < 4; ++k) CHECK(fx.digits[size_t(k)] == ref.a[size_t(k)]);
  CHECK(fx.e_fact == ref.E[3]);
}

TEST_CASE("factoradic of zero is identically zero") {
  FactoradicExpansion fx = factoradic_expand(ExactReal(0L), 6, PrecisionBudget(64));
  for (const mpz_class& a : fx.digits) CHECK(a == 0);
  CHECK(fx.remainder_exact.sgn() == 0);
  CHECK(fx.e_fact == 0);
}

TEST_CASE("factoradic of sqrt(2) to depth 3: digits, remainder, reconstruction") {
  FactoradicExpansion fx = factoradic_expand(sqrt2(), 3, PrecisionBudget(128));
  REQUIRE(fx.digits.size() == 3);
  CHECK(fx.digits[0] == 1);
  CHECK(fx.digits[1] == 1);
  CHECK(fx.digits[2] == -1);
  // b_3 = 3!*sqrt(2) - E_3 = 6*sqrt(2) - 8, exactly
  ExactReal b3 = ExactReal::surd(mpq_class(-8), mpq_class(6), 2);
  CHECK(fx.remainder_exact.cmp(b3) == 0);
  CHECK(fx.e_fact == 8);
  CHECK(fx.remainder.contains(b3.eval(PrecisionBudget(256))));
  // reconstruction: 1/1! + 1/2! - 1/3! + b3/3! = sqrt(2)
  ExactReal recon = ExactReal(mpq_class(1) + mpq_class(1, 2) - mpq_class(1, 6)) +
                    b3.scaled(mpq_class(1, 6));
  CHECK(recon.cmp(sqrt2()) == 0);
  // and agrees with the plain 512-bit float recurrence
  oracle::FloatFactoradic ref = oracle::factoradic_float(sqrt2(), 3);
  for (int k = 0; k < 3; ++k) CHECK(fx.digits[size_t(k)] == ref.a[size_t(k)]);
}

TEST_CASE("factoradic digits match the float recurrence deep into several surds") {
  std::vector<ExactReal> seeds{sqrt2(), ExactReal::sqrt_int(3),
                               ExactReal::surd(mpq_class(1, 2), mpq_class(1, 2), 5),
                               ExactReal::surd(mpq_class(-2, 3), mpq_class(3, 7), 6)};
  for (const ExactReal& s : seeds) {
    FactoradicExpansion fx = factoradic_expand(s, 40, PrecisionBudget(128));
    oracle::FloatFactoradic ref = oracle::factoradic_float(s, 40, 1024);
    REQUIRE(fx.digits.size() == 40);
    for (size_t k = 0; k < 40; ++k) CHECK(fx.digits[k] == ref.a[k]);
  }
}

TEST_CASE("every remainder ball lies within [-1/2, 1/2] and the exact identity holds") {
  FactoradicStream st(ExactReal(mpq_class(17, 12)));
  mpz_class fact = 1;
  for (unsigned k = 1; k <= 12; ++k) {
    const FactoradicStep& s = st.next();
    fact *= k;
    // k! * x == E_k + b_k exactly (rational seed: everything is mpq)
    mpq_class lhs = mpq_class(fact) * mpq_class(17, 12);
    mpq_class rhs = mpq_class(s.e_fact) + s.b.as_rational();
    CHECK(lhs == rhs);
    CHECK(mpq_class(2) * abs(s.b.as_rational()) <= 1);
  }
}

TEST_CASE("d(n! x) without forming n!: anchor cases") {
  PrecisionBudget pb(128);
  DFactorial a = d_factorial(ExactReal(mpq_class(1, 2)), 3, pb);
  CHECK(a.d_exact.sgn() == 0);
  CHECK(a.e == 3);

  DFactorial b = d_factorial(ExactReal(mpq_class(1, 3)), 1, pb);
  CHECK(b.d_exact.cmp(ExactReal(mpq_class(1, 3))) == 0);
  CHECK(b.e == 0);

  DFactorial c = d_factorial(sqrt2(), 2, pb);
  // 2!*sqrt(2) = 2.828...: nearest integer 3, remainder 2*sqrt(2) - 3
  CHECK(c.e == 3);
  CHECK(c.d_exact.cmp(ExactReal::surd(mpq_class(-3), mpq_class(2), 2)) == 0);
  CHECK(c.d.contains(ExactReal::surd(mpq_class(-3), mpq_class(2), 2).eval(PrecisionBudget(256))));
}

TEST_CASE("witness search on sqrt(2) finds the first two known witnesses") {
  std::vector<Witness> ws = witness_search(sqrt2(), 10, PrecisionBudget(128));
  REQUIRE(!ws.empty());
  bool has1 = false, has2 = false;
  for (const Witness& w : ws) {
    if (w.n == 1) {
      has1 = true;
      // |d(sqrt 2)| = sqrt(2) - 1 ~ 0.4142 >= 1/4
      CHECK(w.threshold == mpq_class(1, 4));
      CHECK(w.d_abs.contains(ExactReal::surd(mpq_class(-1), mpq_class(1), 2).eval(PrecisionBudget(256))));
    }
    if (w.n == 2) {
      has2 = true;
      // |d(2 sqrt 2)| = 3 - 2 sqrt(2) ~ 0.1716 >= 1/6
      CHECK(w.threshold == mpq_class(1, 6));
      CHECK(w.d_abs.contains(ExactReal::surd(mpq_class(3), mpq_class(-2), 2).eval(PrecisionBudget(256))));
    }
    // the defining certified inequality
    CHECK(Ball::certified_ge(w.d_abs, Ball::from_mpq(w.threshold, 64)));
  }
  CHECK(has1);
  CHECK(has2);
}

TEST_CASE("witness search rejects rational seeds") {
  CHECK_THROWS_AS(witness_search(ExactReal(mpq_class(1, 3)), 10, PrecisionBudget(64)),
                  precondition_error);
}

TEST_CASE("every index with a nonzero next digit appears as a witness") {
  std::vector<ExactReal> seeds{sqrt2(), ExactReal::sqrt_int(5),
                               ExactReal::surd(mpq_class(1, 2), mpq_class(1, 2), 5)};
  for (const ExactReal& s : seeds) {
    FactoradicExpansion fx = factoradic_expand(s, 31, PrecisionBudget(128));
    std::vector<Witness> ws = witness_search(s, 30, PrecisionBudget(128));
    std::vector<bool> present(31, false);
    for (const Witness& w : ws) {
      REQUIRE(w.n <= 30);
      present[w.n] = true;
    }
    for (unsigned n = 1; n <= 30; ++n)
      if (fx.digits[n] != 0)  // digits[n] is a_{n+1}
        CHECK(present[n]);
  }
}

TEST_CASE("lattice coordinates for tau0 = i") {
  mpfr_prec_t p = 128;
  BallComplex tau(Ball::from_long(0, p), Ball::from_long(1, p));
  BallComplex z(Ball::from_mpq(mpq_class(3, 10), p), Ball::from_mpq(mpq_class(7, 10), p));
  LatticeCoords lc = lattice_coords(z, tau);
  CHECK(lc.x.contains(mpq_class(7, 10)));
  CHECK(lc.y.contains(mpq_class(3, 10)));

  LatticeCoords at_tau = lattice_coords(tau, tau);
  CHECK(at_tau.x.contains(mpq_class(1)));
  CHECK(at_tau.y.contains(mpq_class(0)));

  LatticeCoords at0 = lattice_coords(BallComplex::exact_zero(p), tau);
  CHECK(at0.x.contains(mpq_class(0)));
  CHECK(at0.y.contains(mpq_class(0)));
}

TEST_CASE("lattice coordinates reconstruct z for random tau0") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> small(-20, 20);
  mpfr_prec_t p = 128;
  for (int i = 0; i < 100; ++i) {
    mpq_class tre(small(rng), 7), tim(std::abs(small(rng)) + 1, 5);
    mpq_class zre(small(rng), 3), zim(small(rng), 11);
    BallComplex tau(Ball::from_mpq(tre, p), Ball::from_mpq(tim, p));
    BallComplex z(Ball::from_mpq(zre, p), Ball::from_mpq(zim, p));
    LatticeCoords lc = lattice_coords(z, tau);
    BallComplex recon = BallComplex(lc.x) * tau + BallComplex(lc.y);
    CHECK(recon.re().contains(zre));
    CHECK(recon.im().contains(zim));
  }
}

TEST_CASE("lattice reduction splits integer part and cell remainder") {
  mpfr_prec_t p = 128;
  BallComplex tau(Ball::from_long(0, p), Ball::from_long(1, p));
  BallComplex z(Ball::from_mpq(mpq_class(17, 5), p), Ball::from_mpq(mpq_class(11, 5), p));
  ReducedPoint rp = lattice_reduce(z, tau);
  CHECK(rp.a == 2);
  CHECK(rp.b == 3);
  CHECK(rp.dx.contains(mpq_class(1, 5)));
  CHECK(rp.dy.contains(mpq_class(2, 5)));
  // d = dx*tau + dy = 0.4 + 0.2i
  CHECK(rp.d.re().contains(mpq_class(2, 5)));
  CHECK(rp.d.im().contains(mpq_class(1, 5)));

  BallComplex lat(Ball::from_long(7, p), Ball::from_long(5, p));  // 5*tau0 + 7
  ReducedPoint onlat = lattice_reduce(lat, tau);
  CHECK(onlat.a == 5);
  CHECK(onlat.b == 7);
  CHECK(onlat.dx.contains_zero());
  CHECK(onlat.dy.contains_zero());
}

TEST_CASE("lattice reduction reconstruction encloses z and the remainder stays in the cell") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<long> small(-50, 50);
  mpfr_prec_t p = 128;
  BallComplex tau(Ball::from_mpq(mpq_class(1, 3), p), Ball::from_mpq(mpq_class(3, 2), p));
  for (int i = 0; i < 100; ++i) {
    mpq_class zre(small(rng), 13), zim(small(rng), 9);
    BallComplex z(Ball::from_mpq(zre, p), Ball::from_mpq(zim, p));
    ReducedPoint rp = lattice_reduce(z, tau);
    BallComplex lat = BallComplex(Ball::from_mpz(rp.a, p)) * tau +
                      BallComplex(Ball::from_mpz(rp.b, p));
    BallComplex recon = lat + rp.d;
    CHECK(recon.re().contains(zre));
    CHECK(recon.im().contains(zim));
    CHECK(rp.dx.hi().cmp(BigFloat::of_mpq(mpq_class(1, 2), 64, MPFR_RNDN)) <= 0);
    CHECK(rp.dx.lo().cmp(BigFloat::of_mpq(mpq_class(-1, 2), 64, MPFR_RNDN)) >= 0);
    CHECK(rp.dy.hi().cmp(BigFloat::of_mpq(mpq_class(1, 2), 64, MPFR_RNDN)) <= 0);
    CHECK(rp.dy.lo().cmp(BigFloat::of_mpq(mpq_class(-1, 2), 64, MPFR_RNDN)) >= 0);
  }
}
