// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <memory>

#include "hartogs/ball.hpp"
#include "hartogs/diophantine.hpp"
#include "hartogs/gauss.hpp"

namespace hartogs {

/// log|value| with an explicit representation of exact zeros.
struct LogMagnitude {
  bool neg_inf = false;
  Ball value;  ///< enclosure of log|value| when !neg_inf

  static LogMagnitude neg_infinity() { return LogMagnitude{true, Ball()}; }
  static LogMagnitude of(Ball v) { return LogMagnitude{false, std::move(v)}; }
};

/// Fixed modulus tau0 in the upper half plane plus a precision policy.
///
/// tau0 is kept exact (a Gaussian rational) so lattice reduction of exact
/// points and the constant M stay exactly computable; enclosures at any
/// precision are derived on demand.
struct ThetaContext {
  GaussRat tau0;
  PrecisionBudget budget;
  /// Memo for the certified cell-minimum constant, shared across copies of
  /// the context (grid scans classify many points against one modulus).
  /// Keyed by (refinement level, working precision); guarded by its mutex.
  struct CellMinCache;
  std::shared_ptr<CellMinCache> cell_min_cache;

  ThetaContext(GaussRat t, PrecisionBudget b = PrecisionBudget());

  BallComplex tau(mpfr_prec_t bits) const { return tau0.eval(bits); }
  Ball im_tau(mpfr_prec_t bits) const { return Ball::from_mpq(tau0.im, bits); }

  /// M = Im(tau0) * min(1, 1/|tau0|); bounds |z| >= M*max(|x(z)|, |y(z)|).
  /// M^2 is rational and exact; M itself may be a square root.
  mpq_class M2() const;
  Ball M(mpfr_prec_t bits) const;
};

/// Defining sum of the odd Jacobi theta function
///   theta11(z; tau) = sum_m exp(pi*i*((m+1/2)^2 tau + 2(m+1/2)(z+1/2))),
/// summed symmetrically with a certified geometric tail bound folded into the
/// returned enclosure.  Requires Im(tau) certifiably positive; throws
/// cutoff_overflow when the needed summation range is unreasonable.
BallComplex theta11_direct(const BallComplex& z, const BallComplex& tau, mpfr_prec_t bits);

/// log|theta11(z; tau0)| for arbitrary z, computed by lattice reduction:
///   log|theta11(z)| = pi*(a^2 + 2a*x(d))*Im(tau0) + log|theta11(d)|
/// with z = (a*tau0 + b) + d reduced and a^2 taken exactly in big integers.
/// Returns NegInfinity iff z is exactly a lattice point.
LogMagnitude log_abs_theta(const BallComplex& z, const ThetaContext& ctx);

/// Same, with the reduction already performed: lattice index a and remainder
/// coordinates (dx, dy).  Throws precision-class errors when the theta
/// enclosure at the remainder cannot exclude zero; callers escalate.
Ball log_abs_theta_reduced(const mpz_class& a, const Ball& dx, const Ball& dy,
                           const ThetaContext& ctx, mpfr_prec_t bits);

/// g(z) = theta11(z; tau0) / z, extended across the simple zero at the origin
/// by the sine-product form of the series; g is even and g(0) != 0.
BallComplex g_at(const BallComplex& z, const ThetaContext& ctx, mpfr_prec_t bits);

/// Certified enclosure of min{|g(z)| : z in the closed fundamental cell
/// Lambda = {x*tau0 + y : |x| <= 1/2, |y| <= 1/2}} by exhaustive interval
/// evaluation on a 2^level x 2^level coordinate grid.  The lower endpoint of
/// the result is a certified positive lower bound.
Ball c_constant(const ThetaContext& ctx, int level);

}  // namespace hartogs
