// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "hartogs/ball.hpp"
#include "hartogs/exact_real.hpp"

namespace hartogs {

/// Nearest integer with ties rounded down: e(x) = [x] when x - [x] <= 1/2,
/// otherwise [x] + 1.  The remainder d(x) = x - e(x) satisfies -1/2 < d <= 1/2.
/// Throws tie_straddle when the interval cannot decide the rounding.
struct NearestInt {
  mpz_class e;
  Ball d;
};
NearestInt nearest_int(const Ball& x);

/// One step of the factoradic recurrence.  Digits a_k are exact integers; the
/// running remainder stays in the exact field of the seed.
struct FactoradicStep {
  unsigned k = 0;          ///< index, starting at 1
  mpz_class a;             ///< digit a_k = e(k * b_{k-1})  (a_1 = e(x))
  ExactReal b;             ///< remainder b_k, |b_k| <= 1/2, exact
  mpz_class e_fact;        ///< E_k = e(k! * x), via E_k = k*E_{k-1} + a_k
};

/// Streaming generator of the factoradic expansion of an exact seed:
///   a_1 = e(x), b_1 = d(x);  a_k = e(k*b_{k-1}), b_k = d(k*b_{k-1}).
/// Every step maintains the exact identity k! * x = E_k + b_k.
class FactoradicStream {
 public:
  explicit FactoradicStream(ExactReal seed);
  const ExactReal& seed() const { return seed_; }
  /// Advance to the next index and return its step.
  const FactoradicStep& next();
  const FactoradicStep& current() const { return step_; }

 private:
  ExactReal seed_;
  FactoradicStep step_;
};

/// Digits a_1..a_K plus the final remainder, exact and as a certified ball.
struct FactoradicExpansion {
  std::vector<mpz_class> digits;  ///< a_1 .. a_K
  ExactReal remainder_exact;      ///< b_K
  Ball remainder;                 ///< enclosure of b_K at the budget precision
  mpz_class e_fact;               ///< E_K = e(K! * x)
};
FactoradicExpansion factoradic_expand(const ExactReal& x, unsigned K,
                                      const PrecisionBudget& budget);

/// d(n! * x) and e(n! * x) without ever forming n! * x.
struct DFactorial {
  ExactReal d_exact;  ///< b_n = d(n! * x)
  Ball d;             ///< enclosure of b_n
  mpz_class e;        ///< E_n = e(n! * x)
};
DFactorial d_factorial(const ExactReal& x, unsigned n, const PrecisionBudget& budget);

/// Precision adequate for factoradic work at depth n: log2(n!) plus guard bits.
mpfr_prec_t bits_for_depth(unsigned n, mpfr_prec_t base);

/// A certified small-divisor witness: |d(n! * x)| >= 1/(2(n+1)).
struct Witness {
  unsigned n = 0;
  Ball d_abs;           ///< enclosure of |d(n! * x)|, certified >= threshold
  mpq_class threshold;  ///< 1/(2(n+1))
};

/// All witnesses with index <= n_max for an irrational seed.  Throws
/// rational_input for rational seeds.  Whenever the digit a_{n+1} is nonzero
/// the index n is included (the converse filter is exact, not heuristic).
std::vector<Witness> witness_search(const ExactReal& x, unsigned n_max,
                                    const PrecisionBudget& budget);

/// Real coordinates of z in the basis (tau0, 1):
///   x = Im z / Im tau0,   y = Re z - x * Re tau0.
/// Throws nonpositive_im_tau unless Im tau0 is certifiably positive.
struct LatticeCoords {
  Ball x, y;
};
LatticeCoords lattice_coords(const BallComplex& z, const BallComplex& tau0);

/// z reduced modulo the lattice Z*tau0 + Z: z = (a*tau0 + b) + d with
/// |x(d)| <= 1/2 and |y(d)| <= 1/2.
struct ReducedPoint {
  mpz_class a, b;  ///< lattice part e(z) = a*tau0 + b
  Ball dx, dy;     ///< coordinates of the remainder d
  BallComplex d;   ///< d = dx*tau0 + dy
};
ReducedPoint lattice_reduce(const BallComplex& z, const BallComplex& tau0);

}  // namespace hartogs
