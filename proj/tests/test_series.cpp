// SPDX-License-Identifier: Apache-2.0
//
// The model series and its classification machinery: exact termination at
// rational points, tail-window radius estimation, the witness-by-witness
// divergence certificate, and grid scans.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <hartogs/errors.hpp>
#include <hartogs/series.hpp>

#include "oracles.hpp"

using namespace hartogs;

namespace {

ThetaContext ctx_i(mpfr_prec_t bits = 128) {
  return ThetaContext(GaussRat(mpq_class(0), mpq_class(1)), PrecisionBudget(bits));
}

ExactPoint pt(const ExactReal& x, const ExactReal& y) { return ExactPoint{x, y}; }

ExactPoint rat(long xn, long xd, long yn, long yd) {
  return pt(ExactReal(mpq_class(xn, xd)), ExactReal(mpq_class(yn, yd)));
}

// Synthetic geometric series |f_n| = r^n given as log|f_n| = n*log(r).
HartogsSeries geometric(double r) {
  return HartogsSeries("geometric", [r](long n, const ExactPoint&, const PrecisionBudget& b) {
    Ball lr = Ball::from_double_exact(r, b.bits).log();
    return LogMagnitude::of(lr * Ball::from_long(n, b.bits));
  });
}

}  // namespace

TEST_CASE("coefficient zero and lattice hits are exact negative infinities") {
  ThetaContext ctx = ctx_i();
  HartogsSeries f = counterexample_series(ctx);
  PrecisionBudget pb(128);

  CHECK(f.log_coeff(0, pt(ExactReal::sqrt_int(2), ExactReal(0L)), pb).neg_inf);
  // 2! * (1/2, 1/2) = tau0 + 1 is a lattice point
  CHECK(f.log_coeff(2, rat(1, 2, 1, 2), pb).neg_inf);
}

TEST_CASE("first coefficient at (sqrt 2, 0) is log|theta(sqrt 2 * tau0)|") {
  ThetaContext ctx = ctx_i();
  HartogsSeries f = counterexample_series(ctx);
  PrecisionBudget pb(128);
  LogMagnitude lm = f.log_coeff(1, pt(ExactReal::sqrt_int(2), ExactReal(0L)), pb);
  REQUIRE(!lm.neg_inf);
  BallComplex z(Ball::from_long(0, 256), ExactReal::sqrt_int(2).eval(PrecisionBudget(256)));
  LogMagnitude direct = log_abs_theta(z, ctx);
  REQUIRE(!direct.neg_inf);
  CHECK(oracle::overlaps(lm.value, direct.value));
}

TEST_CASE("exact termination indices at rational points") {
  CHECK(rational_termination(rat(1, 3, 1, 2)) == 3);
  CHECK(rational_termination(rat(0, 1, 0, 1)) == 1);
  CHECK(rational_termination(rat(1, 8, 0, 1)) == 4);
  CHECK_THROWS_AS(rational_termination(pt(ExactReal::sqrt_int(2), ExactReal(0L))),
                  precondition_error);

  std::mt19937_64 rng(64);
  std::uniform_int_distribution<long> num(-24, 24);
  std::uniform_int_distribution<long> den(1, 12);
  for (int i = 0; i < 300; ++i) {
    mpq_class x(num(rng), den(rng)), y(num(rng), den(rng));
    x.canonicalize();
    y.canonicalize();
    CHECK(rational_termination(pt(ExactReal(x), ExactReal(y))) ==
          oracle::termination_index(x, y));
  }
}

TEST_CASE("geometric providers produce Finite verdicts enclosing 1/r") {
  PrecisionBudget pb(128);
  for (double r : {0.5, 1.0, 2.0, 10.0}) {
    RadiusEstimate est = radius_estimate(geometric(r), rat(0, 1, 0, 1), 40, 6, pb);
    CHECK(est.verdict == Verdict::Finite);
    REQUIRE(est.radius.has_value());
    mpq_class inv_r;
    if (r == 0.5) inv_r = 2;
    if (r == 1.0) inv_r = 1;
    if (r == 2.0) inv_r = mpq_class(1, 2);
    if (r == 10.0) inv_r = mpq_class(1, 10);
    CHECK(est.radius->contains(inv_r));
  }
}

TEST_CASE("factorially decaying coefficients read as an entire series") {
  HartogsSeries f("inverse-factorial", [](long n, const ExactPoint&, const PrecisionBudget& b) {
    Ball acc = Ball::exact_zero(b.bits);
    for (long k = 2; k <= n; ++k) acc = acc + Ball::from_long(k, b.bits).log();
    return LogMagnitude::of(-acc);
  });
  RadiusEstimate est = radius_estimate(f, rat(0, 1, 0, 1), 40, 6, PrecisionBudget(128));
  CHECK(est.verdict == Verdict::Infinite);
}

TEST_CASE("super-exponential growth reads as radius zero") {
  HartogsSeries f("hyper", [](long n, const ExactPoint&, const PrecisionBudget& b) {
    return LogMagnitude::of(Ball::from_long(n * n, b.bits));
  });
  // growth rate log|f_n|/n = n crosses the pinned blow-up threshold of 50
  // once the trailing window reaches past n = 50
  RadiusEstimate est = radius_estimate(f, rat(0, 1, 0, 1), 80, 6, PrecisionBudget(128));
  CHECK(est.verdict == Verdict::Zero);
}

TEST_CASE("the model series at (sqrt 2, 0) is certified radius zero within 25 terms") {
  ThetaContext ctx = ctx_i();
  HartogsSeries f = counterexample_series(ctx);
  ExactPoint p = pt(ExactReal::sqrt_int(2), ExactReal(0L));
  RadiusEstimate est = radius_estimate(f, p, 25, 6, PrecisionBudget(128));
  CHECK(est.verdict == Verdict::Zero);
}

TEST_CASE("rational points: estimator verdict and diagnostics match exact termination") {
  ThetaContext ctx = ctx_i();
  HartogsSeries f = counterexample_series(ctx);
  for (const ExactPoint& p : {rat(1, 3, 1, 2), rat(1, 8, 0, 1), rat(5, 12, 7, 12)}) {
    RadiusEstimate est = radius_estimate(f, p, 25, 6, PrecisionBudget(128));
    CHECK(est.verdict == Verdict::Infinite);
    REQUIRE(est.zero_tail_from.has_value());
    CHECK(*est.zero_tail_from == rational_termination(p));
  }
}

TEST_CASE("divergence certificate at (sqrt 2, 0): all links certified") {
  ThetaContext ctx = ctx_i();
  // M for tau0 = i is exactly 1
  CHECK(ctx.M2() == 1);
  ExactPoint p = pt(ExactReal::sqrt_int(2), ExactReal(0L));
  DivergenceCertificate cert = divergence_certificate(p, ctx, 10);
  CHECK(cert.certified);
  CHECK(!cert.failed_at.has_value());
  CHECK(cert.witness_coord == 'x');
  CHECK(cert.c_lower.is_positive());
  CHECK(cert.m_lower.contains(mpq_class(1)));
  bool has1 = false, has2 = false;
  for (const CertifiedWitness& w : cert.witnesses) {
    CHECK(w.ok);
    CHECK(w.lattice_sign != CertStatus::Failed);
    CHECK(w.cell_minimum != CertStatus::Failed);
    CHECK(w.distance != CertStatus::Failed);
    CHECK(w.threshold != CertStatus::Failed);
    if (w.n == 1) has1 = true;
    if (w.n == 2) has2 = true;
  }
  CHECK(has1);
  CHECK(has2);
}

TEST_CASE("certificate lower bounds never exceed independently computed magnitudes") {
  ThetaContext ctx = ctx_i();
  HartogsSeries f = counterexample_series(ctx);
  ExactPoint p = pt(ExactReal::sqrt_int(2), ExactReal(0L));
  DivergenceCertificate cert = divergence_certificate(p, ctx, 12);
  REQUIRE(cert.certified);
  for (const CertifiedWitness& w : cert.witnesses) {
    LogMagnitude lm = f.log_coeff(w.n, p, PrecisionBudget(256));
    REQUIRE(!lm.neg_inf);
    CHECK(w.log_lower.lo().cmp(lm.value.hi()) <= 0);
  }
}

TEST_CASE("certificates demand an irrational coordinate") {
  CHECK_THROWS_AS(divergence_certificate(rat(1, 3, 1, 2), ctx_i(), 10), precondition_error);
}

TEST_CASE("certificate prefers the x coordinate and falls back to y") {
  ThetaContext ctx = ctx_i();
  DivergenceCertificate cx =
      divergence_certificate(pt(ExactReal::sqrt_int(3), ExactReal::sqrt_int(3)), ctx, 6);
  CHECK(cx.witness_coord == 'x');
  DivergenceCertificate cy =
      divergence_certificate(pt(ExactReal(mpq_class(1, 2)), ExactReal::sqrt_int(3)), ctx, 6);
  CHECK(cy.witness_coord == 'y');
  CHECK(cy.certified);
}

TEST_CASE("rational points classify Infinite with the oracle termination index") {
  ThetaContext ctx = ctx_i();
  ScanOptions opts;
  PointResult r = classify_point(rat(1, 8, 0, 1), ctx, opts);
  CHECK(r.verdict == Verdict::Infinite);
  REQUIRE(r.n0.has_value());
  CHECK(*r.n0 == 4);
  CHECK(r.witness_count == 0);
}

TEST_CASE("a 2x2 grid yields exactly 4 rows in row-major order") {
  ThetaContext ctx = ctx_i();
  ScanOptions opts;
  std::vector<PointResult> rows =
      scan_grid(ExactReal(0L), ExactReal(mpq_class(1, 2)), ExactReal(0L),
                ExactReal(mpq_class(1, 3)), 2, ctx, opts);
  REQUIRE(rows.size() == 4);
  // row-major: x is the slow axis
  CHECK(rows[0].x.cmp(ExactReal(0L)) == 0);
  CHECK(rows[0].y.cmp(ExactReal(0L)) == 0);
  CHECK(rows[1].x.cmp(ExactReal(0L)) == 0);
  CHECK(rows[1].y.cmp(ExactReal(mpq_class(1, 3))) == 0);
  CHECK(rows[2].x.cmp(ExactReal(mpq_class(1, 2))) == 0);
  CHECK(rows[3].y.cmp(ExactReal(mpq_class(1, 3))) == 0);
  CHECK_THROWS_AS(scan_grid(ExactReal(0L), ExactReal(1L), ExactReal(0L), ExactReal(1L), 1,
                            ctx, opts),
                  precondition_error);
}

TEST_CASE("all-rational grids classify Infinite everywhere") {
  ThetaContext ctx = ctx_i();
  ScanOptions opts;
  std::vector<PointResult> rows =
      scan_grid(ExactReal(0L), ExactReal(mpq_class(1, 2)), ExactReal(0L),
                ExactReal(mpq_class(1, 2)), 3, ctx, opts);
  REQUIRE(rows.size() == 9);
  for (const PointResult& r : rows) {
    CHECK(r.verdict == Verdict::Infinite);
    REQUIRE(r.n0.has_value());
    CHECK(*r.n0 == oracle::termination_index(r.x.as_rational(), r.y.as_rational()));
  }
}

TEST_CASE("a grid node at (sqrt 2, 0) classifies Zero") {
  ThetaContext ctx = ctx_i();
  ScanOptions opts;
  ExactReal r2 = ExactReal::sqrt_int(2);
  std::vector<PointResult> rows =
      scan_grid(r2, r2 + ExactReal(1L), ExactReal(0L), ExactReal(1L), 2, ctx, opts);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].x.cmp(r2) == 0);
  CHECK(rows[0].y.cmp(ExactReal(0L)) == 0);
  CHECK(rows[0].verdict == Verdict::Zero);
  CHECK(rows[0].witness_count > 0);
}

TEST_CASE("scan output is deterministic and carries the pinned CSV schema") {
  ThetaContext ctx = ctx_i();
  ScanOptions opts;
  auto run = [&]() {
    std::vector<PointResult> rows =
        scan_grid(ExactReal(0L), ExactReal::sqrt_int(2), ExactReal(0L), ExactReal(1L), 3,
                  ctx, opts);
    std::ostringstream os;
    write_scan_csv(os, rows);
    return os.str();
  };
  std::string first = run();
  std::string second = run();
  CHECK(first == second);
  CHECK(first.rfind("x,y,verdict,n0_or_blank,rho_hat,witness_count\n", 0) == 0);
  CHECK(first.find("zero") != std::string::npos);      // the sqrt(2) column
  CHECK(first.find("infinite") != std::string::npos);  // the rational columns
}

TEST_CASE("verdict names are the pinned lowercase strings") {
  CHECK(std::string(verdict_name(Verdict::Zero)) == "zero");
  CHECK(std::string(verdict_name(Verdict::Finite)) == "finite");
  CHECK(std::string(verdict_name(Verdict::Infinite)) == "infinite");
  CHECK(std::string(verdict_name(Verdict::Inconclusive)) == "inconclusive");
}
