// SPDX-License-Identifier: Apache-2.0
#include "hartogs/diophantine.hpp"

#include <cmath>

#include "hartogs/errors.hpp"

namespace hartogs {

NearestInt nearest_int(const Ball& x) {
  // e(x) = ceil(x - 1/2) realizes nearest-with-ties-down.  Evaluate on both
  // endpoints; they must agree or the interval straddles a tie boundary.
  BigFloat half = BigFloat::of_double(0.5, 32);
  BigFloat lo_sh = fsub(x.lo(), half, x.lo().prec() + 4, MPFR_RNDD);
  BigFloat hi_sh = fsub(x.hi(), half, x.hi().prec() + 4, MPFR_RNDU);
  mpz_class e_lo, e_hi;
  mpfr_get_z(e_lo.get_mpz_t(), lo_sh.raw(), MPFR_RNDU);  // ceil
  mpfr_get_z(e_hi.get_mpz_t(), hi_sh.raw(), MPFR_RNDU);
  if (e_lo != e_hi) throw tie_straddle();
  Ball e_ball = Ball::from_mpz(e_lo, x.prec());
  return NearestInt{e_lo, x - e_ball};
}

FactoradicStream::FactoradicStream(ExactReal seed) : seed_(std::move(seed)) {
  step_.k = 0;
  step_.b = seed_;
  step_.e_fact = 0;
}

const FactoradicStep& FactoradicStream::next() {
  unsigned k = step_.k + 1;
  // a_k = e(k * b_{k-1}), b_k = d(k * b_{k-1}); for k = 1 this is e(x), d(x).
  ExactReal scaled = step_.b.scaled(mpz_class(k));
  auto [e, d] = scaled.nearest();
  step_.k = k;
  step_.a = e;
  step_.b = d;
  step_.e_fact = step_.e_fact * k + e;
  return step_;
}

FactoradicExpansion factoradic_expand(const ExactReal& x, unsigned K,
                                      const PrecisionBudget& budget) {
  if (K == 0) throw precondition_error("factoradic depth must be >= 1");
  FactoradicStream s(x);
  FactoradicExpansion out;
  out.digits.reserve(K);
  for (unsigned k = 1; k <= K; ++k) {
    const FactoradicStep& st = s.next();
    out.digits.push_back(st.a);
  }
  out.remainder_exact = s.current().b;
  out.e_fact = s.current().e_fact;
  out.remainder = out.remainder_exact.eval(PrecisionBudget(bits_for_depth(K, budget.bits)));
  return out;
}

DFactorial d_factorial(const ExactReal& x, unsigned n, const PrecisionBudget& budget) {
  if (n == 0) throw precondition_error("d_factorial requires n >= 1");
  FactoradicStream s(x);
  for (unsigned k = 1; k <= n; ++k) s.next();
  DFactorial out;
  out.d_exact = s.current().b;
  out.e = s.current().e_fact;
  out.d = out.d_exact.eval(PrecisionBudget(bits_for_depth(n, budget.bits)));
  return out;
}

mpfr_prec_t bits_for_depth(unsigned n, mpfr_prec_t base) {
  double lg = 0.0;
  for (unsigned k = 2; k <= n; ++k) lg += std::log2(double(k));
  mpfr_prec_t need = mpfr_prec_t(lg) + 64;
  return need > base ? need : base;
}

std::vector<Witness> witness_search(const ExactReal& x, unsigned n_max,
                                    const PrecisionBudget& budget) {
  if (x.is_rational()) throw rational_input();
  std::vector<Witness> out;
  FactoradicStream s(x);
  s.next();  // step 1: b_1 = d(x)
  for (unsigned n = 1; n <= n_max; ++n) {
    const ExactReal b_n = s.current().b;  // d(n! x), exact
    mpq_class threshold(1, 2 * (mpz_class(n) + 1));
    // Exact test first (surd vs. rational comparison is decidable), then a
    // ball enclosure refined until it certifies the same inequality.
    ExactReal babs = b_n.sgn() >= 0 ? b_n : -b_n;
    if (babs.cmp(threshold) >= 0) {
      mpfr_prec_t bits = bits_for_depth(n, budget.bits);
      Ball d_abs = babs.eval(PrecisionBudget(bits));
      int attempts = 0;
      while (!(mpfr_cmp_q(d_abs.lo().raw(), threshold.get_mpq_t()) >= 0)) {
        bits *= 2;
        if (++attempts > budget.max_restarts)
          throw precision_exhausted("witness ball failed to clear its threshold");
        d_abs = babs.eval(PrecisionBudget(bits));
      }
      out.push_back(Witness{n, d_abs, threshold});
    }
    s.next();
  }
  return out;
}

LatticeCoords lattice_coords(const BallComplex& z, const BallComplex& tau0) {
  if (!tau0.im().is_positive()) throw nonpositive_im_tau();
  Ball x = z.im() / tau0.im();
  Ball y = z.re() - x * tau0.re();
  return LatticeCoords{x, y};
}

ReducedPoint lattice_reduce(const BallComplex& z, const BallComplex& tau0) {
  LatticeCoords c = lattice_coords(z, tau0);
  NearestInt nx = nearest_int(c.x);
  NearestInt ny = nearest_int(c.y);
  ReducedPoint out;
  out.a = nx.e;
  out.b = ny.e;
  out.dx = nx.d;
  out.dy = ny.d;
  out.d = BallComplex(nx.d) * tau0 + BallComplex(ny.d);
  return out;
}

}  // namespace hartogs
