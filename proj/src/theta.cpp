// SPDX-License-Identifier: Apache-2.0
#include "hartogs/theta.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "hartogs/errors.hpp"

namespace hartogs {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.69314718055994530942;

}  // namespace

struct ThetaContext::CellMinCache {
  std::mutex mu;
  std::map<std::pair<int, mpfr_prec_t>, Ball> by_key;
};

ThetaContext::ThetaContext(GaussRat t, PrecisionBudget b)
    : tau0(std::move(t)),
      budget(b),
      cell_min_cache(std::make_shared<CellMinCache>()) {
  if (!(tau0.im > 0)) throw nonpositive_im_tau();
}

mpq_class ThetaContext::M2() const {
  mpq_class im2 = tau0.im * tau0.im;
  mpq_class n2 = tau0.norm2();
  if (n2 <= 1) return im2;
  return im2 / n2;
}

Ball ThetaContext::M(mpfr_prec_t bits) const {
  return Ball::from_mpq(M2(), bits).sqrt();
}

// ---------------------------------------------------------------------------
// Direct defining sum

namespace {

// Smallest symmetric cutoff making the omitted terms negligible at the target
// precision.  Heuristic (doubles); the returned cutoff is then validated by a
// rigorous ball tail bound.
long theta_cutoff(double t_lo, double v_hi, mpfr_prec_t bits) {
  if (!(t_lo > 0)) throw nonpositive_im_tau();
  double c = v_hi / t_lo;
  double reach = std::sqrt((double(bits) + 24.0) * kLn2 / (kPi * t_lo));
  double m = c + reach + 2.0;
  if (!(m < 2e6)) throw cutoff_overflow();
  return long(std::ceil(m));
}

// Upper bound (as BigFloat) of 2*first/(1-ratio) given enclosures of the
// first omitted majorant and the majorant ratio; requires ratio <= 1/2.
BigFloat geometric_tail(const Ball& first, const Ball& ratio) {
  if (!(ratio.hi().cmp(BigFloat::of_double(0.5, 32)) <= 0))
    throw precision_error("tail ratio above 1/2; summation cutoff too small");
  BigFloat num = fmul(BigFloat::of_long(2, 32), first.hi(), 32, MPFR_RNDU);
  BigFloat den = fsub(BigFloat::of_long(1, 32), ratio.hi(), 32, MPFR_RNDD);
  return fdiv(num, den, 32, MPFR_RNDU);
}

}  // namespace

BallComplex theta11_direct(const BallComplex& z, const BallComplex& tau, mpfr_prec_t bits) {
  if (!tau.im().is_positive()) throw nonpositive_im_tau();
  double t_lo = mpfr_get_d(tau.im().lo().raw(), MPFR_RNDD);
  double v_hi = mpfr_get_d(z.im().abs().hi().raw(), MPFR_RNDU);
  mpfr_prec_t wp = bits + 16;

  long M = theta_cutoff(t_lo, v_hi, bits);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 24 || M > 2000000) throw cutoff_overflow();

    BallComplex zp = z + BallComplex(Ball::from_mpq(mpq_class(1, 2), wp));
    BallComplex acc = BallComplex::exact_zero(wp);
    for (long m = -M - 1; m <= M; ++m) {
      mpq_class mu(2 * m + 1, 2);  // m + 1/2
      BallComplex s = Ball::from_mpq(mu * mu, wp) * tau +
                      Ball::from_mpq(2 * mu, wp) * zp;
      acc = acc + unit_exp(s);
    }

    // Tail majorant exp(-pi*(mu^2*Im(tau) - 2*mu*|Im z|)) summed over both
    // ends |mu| >= mu0 = M + 3/2; consecutive-ratio at most
    // exp(-pi*((2*mu0+1)*Im(tau) - 2*|Im z|)).
    Ball pi_b = Ball::pi(wp);
    Ball t_b = tau.im();
    Ball v_b = z.im().abs();
    Ball mu0 = Ball::from_mpq(mpq_class(2 * M + 3, 2), wp);
    Ball two = Ball::from_long(2, wp);
    Ball first = (-(pi_b * (mu0.square() * t_b - two * mu0 * v_b))).exp();
    Ball ratio = (-(pi_b * ((two * mu0 + Ball::from_long(1, wp)) * t_b - two * v_b))).exp();
    try {
      BigFloat tail = geometric_tail(first, ratio);
      return BallComplex(acc.re().widened(tail), acc.im().widened(tail));
    } catch (const precision_error&) {
      M *= 2;  // ratio not yet below 1/2 (very flat tau); enlarge and retry
    }
  }
}

// ---------------------------------------------------------------------------
// Sine-product form and sinc helpers (used for g = theta/z)

namespace {

Ball ball_cosh(const Ball& x) {
  mpfr_prec_t p = x.prec();
  BigFloat l = x.lo(), h = x.hi();
  BigFloat rl(p), rh(p);
  if (l.sgn() >= 0) {
    mpfr_cosh(rl.raw(), l.raw(), MPFR_RNDD);
    mpfr_cosh(rh.raw(), h.raw(), MPFR_RNDU);
  } else if (h.sgn() <= 0) {
    mpfr_cosh(rl.raw(), h.raw(), MPFR_RNDD);
    mpfr_cosh(rh.raw(), l.raw(), MPFR_RNDU);
  } else {
    mpfr_set_ui(rl.raw(), 1, MPFR_RNDD);
    BigFloat c1(p), c2(p);
    mpfr_cosh(c1.raw(), l.raw(), MPFR_RNDU);
    mpfr_cosh(c2.raw(), h.raw(), MPFR_RNDU);
    rh = fmax(c1, c2);
  }
  return Ball::from_endpoints(rl, rh, p);
}

Ball ball_sinh(const Ball& x) {
  mpfr_prec_t p = x.prec();
  BigFloat l = x.lo(), h = x.hi();
  BigFloat rl(p), rh(p);
  mpfr_sinh(rl.raw(), l.raw(), MPFR_RNDD);
  mpfr_sinh(rh.raw(), h.raw(), MPFR_RNDU);
  return Ball::from_endpoints(rl, rh, p);
}

// sin(x + i*y) = sin(x)cosh(y) + i*cos(x)sinh(y)
BallComplex csin(const BallComplex& z) {
  return BallComplex(z.re().sin() * ball_cosh(z.im()),
                     z.re().cos() * ball_sinh(z.im()));
}

// Truncation index for the entire series sum_k |u|^{2k+s}*c_k with factorial
// denominators: stop when the bound drops below 2^-(bits+8) and behaves
// geometrically (next/current <= 1/2).
struct SincTail {
  int K;
  BigFloat bound;  // rigorous upper bound on the omitted tail
};

// Tail of the (possibly differentiated) sinc series from index K.  The
// consecutive-term ratio of either series is at most q = |u|^2/((2K)(2K+3)),
// so once q <= 1/2 the tail is bounded by twice its first term:
//   plain:       2 * |u|^{2K} / (2K+1)!
//   derivative:  2 * 2K * |u|^{2K-1} / (2K+1)!
SincTail sinc_tail(const Ball& u_abs, mpfr_prec_t bits, bool derivative) {
  double uhi = mpfr_get_d(u_abs.hi().raw(), MPFR_RNDU);
  int K = 1;
  while (uhi * uhi / double((2 * K) * (2 * K + 3)) > 0.5) ++K;
  // grow K until the double estimate of the term is small enough
  double lu = std::log(std::max(uhi, 1e-300));
  while ((2 * K) * lu - std::lgamma(double(2 * K + 2)) > -(double(bits) + 8.0) * kLn2 &&
         K < 256)
    ++K;
  mpfr_prec_t p = u_abs.prec();
  BigFloat t(p);
  mpfr_pow_ui(t.raw(), u_abs.hi().raw(), 2 * unsigned(K) - (derivative ? 1 : 0), MPFR_RNDU);
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), 2 * unsigned(K) + 1);
  BigFloat f = BigFloat::of_mpz(fact, p, MPFR_RNDD);
  BigFloat bound = fdiv(t, f, 32, MPFR_RNDU);
  bound = fmul(bound, BigFloat::of_long(derivative ? 4 * long(K) : 2, 32), 32, MPFR_RNDU);
  return SincTail{K, bound};
}

// sinc(u) = sin(u)/u continued by 1 at u = 0.  The explicit quotient is used
// only for large |u|: on wide interval inputs a complex interval division
// inflates the enclosure by roughly 1/|u|_lo per component pair, which ruins
// the per-cell derivative bounds the grid certification relies on.  The power
// series needs no division by u and stays proportionally tight, so it is used
// whenever |u| is moderate (the term estimate in sinc_tail converges fast for
// |u| < 8 and the largest intermediate term costs only ~9 bits of headroom).
BallComplex csinc(const BallComplex& u, mpfr_prec_t bits) {
  Ball ua = u.abs();
  if (ua.lo().cmp(BigFloat::of_double(0.25, 32)) >= 0 &&
      ua.hi().cmp(BigFloat::of_double(8.0, 32)) >= 0)
    return csin(u) / u;
  // power series sum_k (-1)^k u^{2k}/(2k+1)!
  SincTail tl = sinc_tail(ua, bits, false);
  mpfr_prec_t p = u.prec();
  BallComplex u2 = u * u;
  BallComplex term(Ball::from_long(1, p));
  BallComplex acc = term;
  for (int k = 1; k < tl.K; ++k) {
    term = term * u2;
    term = BallComplex(term.re() / Ball::from_long(-long(2 * k) * long(2 * k + 1), p),
                       term.im() / Ball::from_long(-long(2 * k) * long(2 * k + 1), p));
    acc = acc + term;
  }
  return BallComplex(acc.re().widened(tl.bound), acc.im().widened(tl.bound));
}

// sinc'(u) = (cos(u) - sinc(u))/u, series sum_{k>=1} (-1)^k 2k u^{2k-1}/(2k+1)!
// Same branch policy as csinc: the quotient form divides by u twice, squaring
// the interval-division blowup, so it is reserved for large |u| where the
// caller's exponentially small prefactors absorb the slack.
BallComplex csinc_prime(const BallComplex& u, mpfr_prec_t bits) {
  Ball ua = u.abs();
  if (ua.lo().cmp(BigFloat::of_double(0.25, 32)) >= 0 &&
      ua.hi().cmp(BigFloat::of_double(8.0, 32)) >= 0) {
    BallComplex c(u.re().cos() * ball_cosh(u.im()), -(u.re().sin() * ball_sinh(u.im())));
    return (c - csinc(u, bits)) / u;
  }
  SincTail tl = sinc_tail(ua, bits, true);
  mpfr_prec_t p = u.prec();
  BallComplex u2 = u * u;
  BallComplex upow = u;  // u^{2k-1}
  BallComplex acc = BallComplex::exact_zero(p);
  mpz_class fact = 6;    // (2k+1)! at k = 1
  for (int k = 1; k < tl.K; ++k) {
    if (k > 1) {
      upow = upow * u2;
      fact *= mpz_class(2 * k) * (2 * k + 1);
    }
    Ball coeff = Ball::from_mpq(mpq_class((k % 2 ? -1 : 1) * mpz_class(2 * k), fact), p);
    acc = acc + coeff * upow;
  }
  return BallComplex(acc.re().widened(tl.bound), acc.im().widened(tl.bound));
}

// Cutoff and rigorous tail for the sine-form series with term majorant
//   2*pi*(2m+1)^pw * exp(pi*((2m+1)*|z| - Im(tau)*(m+1/2)^2)).
struct SineCutoff {
  long M;
  BigFloat tail;
};

SineCutoff sine_cutoff(const Ball& t_ball, const Ball& zabs, mpfr_prec_t bits, int pw) {
  double t_lo = mpfr_get_d(t_ball.lo().raw(), MPFR_RNDD);
  double z_hi = mpfr_get_d(zabs.hi().raw(), MPFR_RNDU);
  if (!(t_lo > 0)) throw nonpositive_im_tau();
  long M = theta_cutoff(t_lo, z_hi, bits) + pw + 2;
  mpfr_prec_t wp = bits + 16;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 24 || M > 2000000) throw cutoff_overflow();
    Ball pi_b = Ball::pi(wp);
    Ball mu0 = Ball::from_mpq(mpq_class(2 * M + 3, 2), wp);
    Ball n0 = Ball::from_long(2 * M + 3, wp);  // 2m+1 at m = M+1
    Ball expo = pi_b * (n0 * zabs - t_ball * mu0.square());
    Ball poly = Ball::from_long(1, wp);
    for (int i = 0; i < pw; ++i) poly = poly * n0;
    Ball first = Ball::from_long(2, wp) * pi_b * poly * expo.exp();
    // ratio <= ((2M+5)/(2M+3))^pw * exp(pi*(2*|z| - 2*Im(tau)*(M+2)))
    Ball rexp = pi_b * (Ball::from_long(2, wp) * zabs -
                        Ball::from_long(2, wp) * t_ball * Ball::from_long(M + 2, wp));
    Ball rpoly = Ball::from_long(1, wp);
    Ball growth = Ball::from_long(2 * M + 5, wp) / Ball::from_long(2 * M + 3, wp);
    for (int i = 0; i < pw; ++i) rpoly = rpoly * growth;
    Ball ratio = rpoly * rexp.exp();
    try {
      return SineCutoff{M, geometric_tail(first, ratio)};
    } catch (const precision_error&) {
      M *= 2;
    }
  }
}

enum class SineKind { g, g_prime };

// Shared evaluator for g and g' via the sine-product form:
//   g(z)  = -2*pi * sum (-1)^m q_m (2m+1) sinc((2m+1)*pi*z)
//   g'(z) = -2*pi^2 * sum (-1)^m q_m (2m+1)^2 sinc'((2m+1)*pi*z)
// with q_m = exp(pi*i*tau*(m+1/2)^2).
BallComplex sine_form(const BallComplex& z, const BallComplex& tau, mpfr_prec_t bits,
                      SineKind kind) {
  mpfr_prec_t wp = bits + 16;
  int pw = kind == SineKind::g ? 1 : 2;
  SineCutoff cut = sine_cutoff(tau.im(), z.abs(), bits, pw);
  Ball pi_b = Ball::pi(wp);
  BallComplex acc = BallComplex::exact_zero(wp);
  for (long m = 0; m <= cut.M; ++m) {
    mpq_class mu(2 * m + 1, 2);
    BallComplex q = unit_exp(Ball::from_mpq(mu * mu, wp) * tau);
    BallComplex u = (Ball::from_long(2 * m + 1, wp) * pi_b) * z;
    BallComplex s = kind == SineKind::g ? csinc(u, bits) : csinc_prime(u, bits);
    Ball poly = Ball::from_long(2 * m + 1, wp);
    if (kind == SineKind::g_prime) poly = poly * Ball::from_long(2 * m + 1, wp);
    BallComplex term = poly * (q * s);
    acc = (m % 2 == 0) ? acc + term : acc - term;
  }
  Ball scale = Ball::from_long(-2, wp) * pi_b;
  if (kind == SineKind::g_prime) scale = scale * pi_b;
  BallComplex out = scale * acc;
  // account for the omitted terms (the scale factor is part of the majorant)
  BigFloat tail = cut.tail;
  if (kind == SineKind::g_prime) tail = fmul(tail, pi_b.hi(), 32, MPFR_RNDU);
  return BallComplex(out.re().widened(tail), out.im().widened(tail));
}

}  // namespace

BallComplex g_at(const BallComplex& z, const ThetaContext& ctx, mpfr_prec_t bits) {
  return sine_form(z, ctx.tau(bits), bits, SineKind::g);
}

// ---------------------------------------------------------------------------
// Lattice-reduced logarithmic magnitude

Ball log_abs_theta_reduced(const mpz_class& a, const Ball& dx, const Ball& dy,
                           const ThetaContext& ctx, mpfr_prec_t bits) {
  BallComplex tau = ctx.tau(bits);
  BallComplex d = BallComplex(dx) * tau + BallComplex(dy);
  Ball mag = theta11_direct(d, tau, bits).abs();
  Ball lg = mag.log();  // log_of_nonpositive when 0-containing: escalate upstream
  mpz_class a2 = a * a;
  Ball lat = Ball::pi(bits) *
             (Ball::from_mpz(a2, bits) +
              Ball::from_long(2, bits) * Ball::from_mpz(a, bits) * dx) *
             ctx.im_tau(bits);
  return lat + lg;
}

LogMagnitude log_abs_theta(const BallComplex& z, const ThetaContext& ctx) {
  return with_escalation(ctx.budget, [&](mpfr_prec_t bits) {
    BallComplex tau = ctx.tau(bits);
    ReducedPoint rp = lattice_reduce(z, tau);
    if (rp.dx.is_exact() && rp.dx.mid().is_zero() &&
        rp.dy.is_exact() && rp.dy.mid().is_zero())
      return LogMagnitude::neg_infinity();
    return LogMagnitude::of(log_abs_theta_reduced(rp.a, rp.dx, rp.dy, ctx, bits));
  });
}

// ---------------------------------------------------------------------------
// Certified minimum of |g| over the fundamental cell

Ball c_constant(const ThetaContext& ctx, int level) {
  if (level < 2 || level > 12)
    throw precondition_error("c_constant refinement level out of range [2, 12]");
  mpfr_prec_t bits = ctx.budget.bits;
  {
    std::lock_guard<std::mutex> lk(ctx.cell_min_cache->mu);
    auto it = ctx.cell_min_cache->by_key.find({level, bits});
    if (it != ctx.cell_min_cache->by_key.end()) return it->second;
  }
  BallComplex tau = ctx.tau(bits);
  long n = 1L << level;

  // Mean-value certification: on each cell, |g| >= |g(center)| - L_cell * r
  // with L_cell an interval bound for |g'| over the cell and r the cell's
  // half-diagonal in z.  Evaluating g at exact cell centers keeps the
  // enclosures tight; the derivative term absorbs the cell variation.
  BigFloat min_lo(64), min_hi(64);
  bool first = true;
  for (long i = 0; i < n; ++i) {
    mpq_class xl(2 * i - n, 2 * n), xh(2 * (i + 1) - n, 2 * n);
    Ball xcell = Ball::from_endpoints(BigFloat::of_mpq(xl, bits, MPFR_RNDD),
                                      BigFloat::of_mpq(xh, bits, MPFR_RNDU), bits);
    Ball xc = Ball::from_mpq((xl + xh) / 2, bits);
    for (long j = 0; j < n; ++j) {
      // Evenness of g halves the work: the cell grid is symmetric under
      // z -> -z, which maps cell (i, j) to (n-1-i, n-1-j).
      if (std::make_pair(n - 1 - i, n - 1 - j) < std::make_pair(i, j)) continue;
      mpq_class yl(2 * j - n, 2 * n), yh(2 * (j + 1) - n, 2 * n);
      Ball ycell = Ball::from_endpoints(BigFloat::of_mpq(yl, bits, MPFR_RNDD),
                                        BigFloat::of_mpq(yh, bits, MPFR_RNDU), bits);
      Ball yc = Ball::from_mpq((yl + yh) / 2, bits);

      BallComplex z_center = xc * tau + BallComplex(yc);
      BallComplex z_cell = xcell * tau + BallComplex(ycell);

      Ball gc = g_at(z_center, ctx, bits).abs();
      Ball gp = sine_form(z_cell, tau, bits, SineKind::g_prime).abs();
      // half-diagonal of the cell in z
      Ball r = (z_cell - z_center).abs();
      Ball lower = gc - gp * r;

      BigFloat cell_lo = lower.lo();
      BigFloat cell_hi = gc.hi();
      if (first || cell_lo.cmp(min_lo) < 0) min_lo = cell_lo;
      if (first || cell_hi.cmp(min_hi) < 0) min_hi = cell_hi;
      first = false;
    }
  }
  if (min_lo.sgn() < 0) min_lo = BigFloat(64);  // clamp at zero: |g| >= 0 always
  Ball result = Ball::from_endpoints(min_lo, min_hi, bits);
  std::lock_guard<std::mutex> lk(ctx.cell_min_cache->mu);
  ctx.cell_min_cache->by_key.insert({{level, bits}, result});
  return result;
}

}  // namespace hartogs
