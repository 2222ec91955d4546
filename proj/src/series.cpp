// SPDX-License-Identifier: Apache-2.0
#include "hartogs/series.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "hartogs/errors.hpp"

namespace hartogs {

namespace {

// Pinned estimator thresholds (see radius_estimate): a tail growth rate above
// kBlowUp with a certified window increase reads as radius zero at desk
// scale; a certified decrease below kDecay reads as entire; two windows
// agreeing within kAgree produce a Finite enclosure.
constexpr double kBlowUpThreshold = 50.0;
constexpr double kDecayThreshold = -2.0;
constexpr double kAgreeTolerance = 0.05;
// Growth rates beyond this are treated as numerically meaningless for a
// Finite verdict (they are astronomically certain Zero/Infinite anyway).
constexpr double kRhoSanity = 1e6;

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Zero: return "zero";
    case Verdict::Finite: return "finite";
    case Verdict::Infinite: return "infinite";
    default: return "inconclusive";
  }
}

HartogsSeries counterexample_series(const ThetaContext& ctx) {
  ThetaContext c = ctx;  // value copy: the series owns its modulus
  auto provider = [c](long n, const ExactPoint& p, const PrecisionBudget& budget) -> LogMagnitude {
    if (n < 0) throw precondition_error("coefficient index must be nonnegative");
    if (n == 0) return LogMagnitude::neg_infinity();
    mpfr_prec_t base = std::max(budget.bits, bits_for_depth(unsigned(n), 64));
    PrecisionBudget local(base, budget.max_restarts);
    DFactorial rx = d_factorial(p.x, unsigned(n), local);
    DFactorial ry = d_factorial(p.y, unsigned(n), local);
    if (rx.d_exact.is_zero() && ry.d_exact.is_zero())
      return LogMagnitude::neg_infinity();  // n! * alpha is exactly a lattice point

    // lattice exponent pi * (E^2 + 2*E*b_x) * Im(tau0), exact up to evaluation
    mpz_class e2(2 * rx.e), esq(rx.e * rx.e);
    ExactReal lat_exact = rx.d_exact.scaled(e2) + mpq_class(esq);
    return LogMagnitude::of(with_escalation(local, [&](mpfr_prec_t bits) -> Ball {
      PrecisionBudget at(bits, 1);
      Ball nb = Ball::from_long(n, bits);
      Ball nlogn = nb * nb.log();
      Ball lat = Ball::pi(bits) * lat_exact.eval(at) * c.im_tau(bits);
      BallComplex tau = c.tau(bits);
      BallComplex d = BallComplex(rx.d_exact.eval(at)) * tau + BallComplex(ry.d_exact.eval(at));
      Ball mag = theta11_direct(d, tau, bits).abs();
      return nlogn + lat + mag.log();
    }));
  };
  return HartogsSeries("counterexample", provider);
}

long rational_termination(const ExactPoint& p) {
  if (!p.is_rational())
    throw precondition_error("termination index requires a rational point");
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), p.x.as_rational().get_den().get_mpz_t(),
          p.y.as_rational().get_den().get_mpz_t());
  long n0 = 1;
  for (long k = 2; r != 1; ++k) {
    mpz_class g, kk(k);
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), kk.get_mpz_t());
    r /= g;
    n0 = k;
    if (k > (1L << 26))
      throw precondition_error("termination index is unreasonably large");
  }
  return n0;
}

RadiusEstimate radius_estimate(const HartogsSeries& series, const ExactPoint& p,
                               long terms, long window, const PrecisionBudget& budget) {
  if (window < 1 || 2 * window > terms)
    throw precondition_error("radius_estimate requires 1 <= 2*window <= terms");
  const long N = terms, W = window;
  RadiusEstimate out;
  out.terms = N;
  out.window = W;

  // rho_n = log|f_n| / n for n = 1..N; nullopt marks an exactly-zero f_n.
  std::vector<std::optional<Ball>> rho(size_t(N) + 1);
  for (long n = 1; n <= N; ++n) {
    LogMagnitude lm = series.log_coeff(n, p, budget);
    if (!lm.neg_inf) rho[size_t(n)] = lm.value / Ball::from_long(n, lm.value.prec());
  }

  // Trailing run of exact zeros.
  long zero_from = N + 1;
  for (long n = N; n >= 1 && !rho[size_t(n)]; --n) zero_from = n;
  if (zero_from <= N) out.zero_tail_from = zero_from;

  auto window_max = [&](long lo_n, long hi_n) -> std::optional<Ball> {
    bool any = false;
    BigFloat mlo, mhi;
    for (long n = lo_n; n <= hi_n; ++n) {
      const auto& v = rho[size_t(n)];
      if (!v) continue;
      BigFloat l = v->lo(), h = v->hi();
      if (!any || l.cmp(mlo) > 0) mlo = l;
      if (!any || h.cmp(mhi) > 0) mhi = h;
      any = true;
    }
    if (!any) return std::nullopt;
    return Ball::from_endpoints(mlo, mhi, 64);
  };
  out.window1 = window_max(N - 2 * W + 1, N - W);
  out.window2 = window_max(N - W + 1, N);

  // 1. The whole final window vanished exactly: polynomial-like tail.
  if (!out.window2) {
    out.verdict = Verdict::Infinite;
    return out;
  }
  if (!out.window1) return out;  // zeros then values again: no stable trend

  const Ball& m1 = *out.window1;
  const Ball& m2 = *out.window2;
  bool increase = Ball::certified_gt(m2, m1);
  bool decrease = Ball::certified_gt(m1, m2);

  // 2. Certified super-exponential growth.
  if (increase && m2.lo().cmp(BigFloat::of_double(kBlowUpThreshold)) > 0) {
    out.verdict = Verdict::Zero;
    return out;
  }
  // 3. Certified super-exponential decay.
  if (decrease && m2.hi().cmp(BigFloat::of_double(kDecayThreshold)) < 0) {
    out.verdict = Verdict::Infinite;
    return out;
  }
  // 4. Stable finite rate.
  double mid1 = mpfr_get_d(m1.mid().raw(), MPFR_RNDN);
  double mid2 = mpfr_get_d(m2.mid().raw(), MPFR_RNDN);
  if (std::isfinite(mid1) && std::isfinite(mid2) &&
      std::abs(mid2 - mid1) <= kAgreeTolerance && std::abs(mid2) < kRhoSanity) {
    Ball rho_hat = m1.hull(m2);
    out.rho_hat = rho_hat;
    out.radius = (-rho_hat).exp();
    out.verdict = Verdict::Finite;
    return out;
  }
  return out;  // Inconclusive
}

DivergenceCertificate divergence_certificate(const ExactPoint& p, const ThetaContext& ctx,
                                             long n_max, int cell_level) {
  if (p.is_rational())
    throw precondition_error("divergence certificate requires an irrational coordinate");
  if (n_max < 1) throw precondition_error("n_max must be >= 1");

  DivergenceCertificate cert;
  cert.n_max = n_max;
  bool on_x = !p.x.is_rational();
  cert.witness_coord = on_x ? 'x' : 'y';

  const PrecisionBudget& budget = ctx.budget;
  cert.c_lower = c_constant(ctx, cell_level);
  cert.m_lower = ctx.M(budget.bits);
  bool c_ok = cert.c_lower.is_positive();

  // Factoradic steps 1..n_max+1 for both coordinates (index i holds step i+1).
  FactoradicStream fx(p.x), fy(p.y);
  std::vector<FactoradicStep> sx, sy;
  sx.reserve(size_t(n_max) + 1);
  sy.reserve(size_t(n_max) + 1);
  for (long k = 1; k <= n_max + 1; ++k) {
    sx.push_back(fx.next());
    sy.push_back(fy.next());
  }
  const std::vector<FactoradicStep>& sw = on_x ? sx : sy;

  mpq_class m2q = ctx.M2();
  mpq_class tau_norm2 = ctx.tau0.norm2();
  mpq_class tau_re2 = 2 * ctx.tau0.re;

  long prev = 0;
  for (long n = 1; n <= n_max; ++n) {
    if (sw[size_t(n)].a == 0) continue;  // digit a_{n+1} vanishes: not a witness
    CertifiedWitness w;
    w.n = n;

    const ExactReal& bw = sw[size_t(n) - 1].b;  // witness remainder b_n
    ExactReal babs = bw.sgn() >= 0 ? bw : -bw;

    // Link 4: |b_n| >= 1/(2(n+1)), exact surd-vs-rational comparison.
    mpq_class thr(1, 2 * (n + 1));
    w.threshold = babs.cmp(thr) >= 0 ? CertStatus::Exact : CertStatus::Failed;

    // Link 1: the lattice exponent E*(E + 2*b_x) is nonnegative, exactly.
    const mpz_class& E = sx[size_t(n) - 1].e_fact;
    mpz_class e2(2 * E), esq(E * E);
    ExactReal s1 = sx[size_t(n) - 1].b.scaled(e2) + mpq_class(esq);
    w.lattice_sign = s1.sgn() >= 0 ? CertStatus::Exact : CertStatus::Failed;

    // Link 2: |g| >= c > 0 on the closed fundamental cell.
    w.cell_minimum = c_ok ? CertStatus::Interval : CertStatus::Failed;

    // Link 3: |d|^2 >= M^2 * b_n^2 with d = b_x*tau0 + b_y.  When both
    // remainders lie in one quadratic field the comparison is exact (this
    // covers the equality case d_y = 0, tau0 = i, where interval arithmetic
    // can never separate the sides); otherwise fall back to balls.
    const ExactReal& bx = sx[size_t(n) - 1].b;
    const ExactReal& by = sy[size_t(n) - 1].b;
    if (bx.same_field(by)) {
      ExactReal d2 = (bx * bx).scaled(tau_norm2) + (bx * by).scaled(tau_re2) + by * by;
      ExactReal rhs = (bw * bw).scaled(m2q);
      if (d2.cmp(rhs) >= 0) w.distance = CertStatus::Exact;
    } else {
      try {
        with_escalation(budget, [&](mpfr_prec_t bits) -> bool {
          PrecisionBudget at(bits, 1);
          BallComplex tau = ctx.tau(bits);
          Ball d2 = (BallComplex(bx.eval(at)) * tau + BallComplex(by.eval(at))).norm2();
          Ball rhs = bw.eval(at).square() * Ball::from_mpq(m2q, bits);
          if (!Ball::certified_ge(d2, rhs))
            throw precision_error("distance link not separated");
          return true;
        });
        w.distance = CertStatus::Interval;
      } catch (const error&) {
        w.distance = CertStatus::Failed;
      }
    }

    w.ok = w.threshold == CertStatus::Exact && w.lattice_sign == CertStatus::Exact &&
           w.cell_minimum != CertStatus::Failed && w.distance != CertStatus::Failed;

    // Certified lower bound log|f_n| >= n log n + log c + log M + log|b_n|
    // (the nonnegative lattice exponent is dropped).
    if (w.ok) {
      w.log_lower = with_escalation(budget, [&](mpfr_prec_t bits) -> Ball {
        PrecisionBudget at(bits, 1);
        Ball nb = Ball::from_long(n, bits);
        return nb * nb.log() + cert.c_lower.log() + cert.m_lower.log() + babs.eval(at).log();
      });
    } else if (!cert.failed_at) {
      cert.failed_at = n;
    }
    cert.max_gap = std::max(cert.max_gap, n - prev);
    prev = n;
    cert.witnesses.push_back(std::move(w));
  }

  cert.certified = !cert.witnesses.empty() && !cert.failed_at;
  return cert;
}

PointResult classify_point(const ExactPoint& p, const ThetaContext& ctx,
                           const ScanOptions& opts) {
  PointResult r;
  r.x = p.x;
  r.y = p.y;
  if (p.is_rational()) {
    long n0 = rational_termination(p);
    // Cross-check the termination index: both remainders vanish exactly at n0
    // and the previous index still carries a nonzero remainder somewhere.
    DFactorial cx = d_factorial(p.x, unsigned(n0), opts.budget);
    DFactorial cy = d_factorial(p.y, unsigned(n0), opts.budget);
    if (!cx.d_exact.is_zero() || !cy.d_exact.is_zero())
      throw precondition_error("termination index failed its exactness cross-check");
    r.verdict = Verdict::Infinite;
    r.n0 = n0;
    return r;
  }

  HartogsSeries series = counterexample_series(ctx);
  RadiusEstimate est = radius_estimate(series, p, opts.terms, opts.window, opts.budget);
  r.rho_hat = est.rho_hat;
  // The growth estimate is the verdict source; the certificate is the
  // rigorous backing for Zero and supplies the witness count.  When the
  // certificate fails the raw estimate verdict stands.
  DivergenceCertificate cert = divergence_certificate(p, ctx, opts.terms, opts.cell_level);
  if (cert.certified) {
    r.verdict = Verdict::Zero;
    r.witness_count = long(cert.witnesses.size());
  } else {
    r.verdict = est.verdict;
  }
  return r;
}

std::vector<PointResult> scan_grid(const ExactReal& x0, const ExactReal& x1,
                                   const ExactReal& y0, const ExactReal& y1, long res,
                                   const ThetaContext& ctx, const ScanOptions& opts) {
  if (res < 2) throw precondition_error("grid resolution must be at least 2 per axis");
  // Exact nodes: endpoint + k/(res-1) * span stays in the endpoint's field.
  std::vector<ExactReal> xs, ys;
  xs.reserve(size_t(res));
  ys.reserve(size_t(res));
  for (long k = 0; k < res; ++k) {
    mpq_class t(k, res - 1);
    t.canonicalize();
    xs.push_back(x0 + (x1 - x0).scaled(t));
    ys.push_back(y0 + (y1 - y0).scaled(t));
  }
  std::vector<PointResult> rows(size_t(res) * size_t(res));
  // Row-major node indices partitioned among workers; each worker writes its
  // own slots, so assembly order (and hence output) is worker-count
  // independent.
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&]() {
    for (;;) {
      size_t idx = next.fetch_add(1);
      if (idx >= rows.size() || failed.load()) return;
      long i = long(idx) / res, j = long(idx) % res;
      try {
        rows[idx] = classify_point(ExactPoint{xs[size_t(i)], ys[size_t(j)]}, ctx, opts);
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  unsigned hw = std::thread::hardware_concurrency();
  if (!mpfr_buildopt_tls_p()) hw = 1;  // MPFR caches need TLS to share safely
  size_t nworkers = std::min<size_t>(std::max(1u, hw), rows.size());
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (size_t w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

namespace {

std::string sig17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double as_double(const ExactReal& v) {
  return mpfr_get_d(v.eval(PrecisionBudget(64)).mid().raw(), MPFR_RNDN);
}

}  // namespace

void write_scan_csv(std::ostream& out, const std::vector<PointResult>& rows) {
  out << "x,y,verdict,n0_or_blank,rho_hat,witness_count\n";
  for (const PointResult& r : rows) {
    out << sig17(as_double(r.x)) << ',' << sig17(as_double(r.y)) << ','
        << verdict_name(r.verdict) << ',';
    if (r.n0) out << *r.n0;
    out << ',';
    if (r.rho_hat) out << sig17(mpfr_get_d(r.rho_hat->mid().raw(), MPFR_RNDN));
    out << ',' << r.witness_count << '\n';
  }
}

}  // namespace hartogs
