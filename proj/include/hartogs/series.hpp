// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hartogs/exact_real.hpp"
#include "hartogs/theta.hpp"

namespace hartogs {

/// Point of the base plane written in lattice coordinates: z = x*tau0 + y.
/// Membership in the rational lattice span is decidable exactly.
struct ExactPoint {
  ExactReal x;
  ExactReal y;
  bool is_rational() const { return x.is_rational() && y.is_rational(); }
};

/// One-variable power series known through certified logarithmic coefficient
/// magnitudes log|f_n| at exact points.  Providers are pure and deterministic
/// in (n, point, budget); NegInfinity encodes an exactly-zero coefficient.
class HartogsSeries {
 public:
  using Provider =
      std::function<LogMagnitude(long n, const ExactPoint& p, const PrecisionBudget&)>;

  HartogsSeries(std::string name, Provider provider)
      : name_(std::move(name)), provider_(std::move(provider)) {}

  const std::string& name() const { return name_; }
  LogMagnitude log_coeff(long n, const ExactPoint& p, const PrecisionBudget& budget) const {
    return provider_(n, p, budget);
  }

 private:
  std::string name_;
  Provider provider_;
};

/// The model series f_n = n^n * theta11(n! * (x*tau0 + y)) for n >= 1 and
/// f_0 = 0, evaluated through the lattice reduction
///   log|f_n| = n*log n + pi*(E^2 + 2*E*b_x)*Im(tau0) + log|theta11(d)|
/// where E, b_x are the integer and remainder parts of n!*x under
/// nearest-integer reduction (computed by d_factorial on the exact
/// coordinates, never forming n!*x numerically) and d = b_x*tau0 + b_y.
HartogsSeries counterexample_series(const ThetaContext& ctx);

/// First index n0 with den(x) | n0! and den(y) | n0!, i.e. the exact bound
/// past which every coefficient of the model series at a rational point
/// vanishes.  Throws precondition_error unless both coordinates are rational.
long rational_termination(const ExactPoint& p);

enum class Verdict { Zero, Finite, Infinite, Inconclusive };

const char* verdict_name(Verdict v);

/// Tail-window growth estimate for the radius of convergence.
struct RadiusEstimate {
  Verdict verdict = Verdict::Inconclusive;
  /// Enclosure of rho = limsup log|f_n|/n when verdict == Finite.
  std::optional<Ball> rho_hat;
  /// exp(-rho_hat), the estimated radius, when verdict == Finite.
  std::optional<Ball> radius;
  /// Start of the trailing run of exactly-zero coefficients, when the sampled
  /// range ends in one (equals the exact termination index for rational
  /// points of the model series).
  std::optional<long> zero_tail_from;
  /// Window maxima of log|f_n|/n over (N-2W, N-W] and (N-W, N].
  std::optional<Ball> window1;
  std::optional<Ball> window2;
  long terms = 0;
  long window = 0;
};

/// Estimate the radius of convergence at p from coefficients f_1..f_N using
/// two trailing windows of width W (requires 1 <= 2W <= N).  Verdicts are
/// conservative: Zero only on a certified window increase beyond a pinned
/// blow-up threshold, Infinite only on an exactly-zero trailing window or a
/// certified decrease below a pinned decay threshold, Finite only when the
/// two windows agree closely; otherwise Inconclusive.
RadiusEstimate radius_estimate(const HartogsSeries& series, const ExactPoint& p,
                               long terms, long window, const PrecisionBudget& budget);

/// Certification status of one link of the divergence chain.
enum class CertStatus { Exact, Interval, Failed };

/// One certified witness index n: digit a_{n+1} != 0 forces
/// |b_n| >= 1/(2(n+1)), and the chain
///   |theta11(n! alpha)| >= |theta11(d)| >= c*|d| >= c*M*|b_n| >= c*M/(2(n+1))
/// bounds log|f_n| from below by n*log n + log(c*M*|b_n|).
struct CertifiedWitness {
  long n = 0;
  CertStatus lattice_sign = CertStatus::Failed;  // E*(E + 2*b_x) >= 0
  CertStatus cell_minimum = CertStatus::Failed;  // |g| >= c on the cell
  CertStatus distance = CertStatus::Failed;      // |d| >= M*|b_n|
  CertStatus threshold = CertStatus::Failed;     // |b_n| >= 1/(2(n+1))
  Ball log_lower;                                // certified bound for log|f_n|
  bool ok = false;
};

/// Proof object for divergence (radius zero) of the model series at a point
/// with an irrational coordinate.
struct DivergenceCertificate {
  std::vector<CertifiedWitness> witnesses;
  char witness_coord = 'x';  // coordinate carrying the witnesses
  Ball c_lower;              // certified positive minimum of |g| on the cell
  Ball m_lower;              // enclosure of the lattice distance constant M
  long n_max = 0;
  long max_gap = 0;          // largest gap between consecutive witness indices
  bool certified = false;
  std::optional<long> failed_at;  // first index with an uncertified link
};

/// Build the witness-by-witness divergence certificate for the model series
/// at p, scanning factoradic digits up to index n_max.  The witness
/// coordinate is x when x is irrational, else y; throws precondition_error
/// when both coordinates are rational.  cell_level is the grid refinement
/// forwarded to c_constant.  Indeterminate links are reported as Failed
/// entries with failed_at set, never dropped.
DivergenceCertificate divergence_certificate(const ExactPoint& p, const ThetaContext& ctx,
                                             long n_max, int cell_level = 4);

/// Classification options for single points and grids.
struct ScanOptions {
  long terms = 25;
  long window = 6;
  int cell_level = 4;
  PrecisionBudget budget;
};

/// One classified point.
struct PointResult {
  ExactReal x;
  ExactReal y;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<long> n0;       // exact termination index (rational points)
  std::optional<Ball> rho_hat;  // growth rate (finite-radius verdicts)
  long witness_count = 0;       // certified witnesses backing a Zero verdict
};

/// Classify one point of the dichotomy for the model series: rational points
/// terminate exactly (Infinite, with n0), points with an irrational
/// coordinate are classified Zero either by the growth estimate or, when the
/// estimate alone is not conclusive, by a full divergence certificate.  Falls
/// back to the raw estimate verdict when certification fails.
PointResult classify_point(const ExactPoint& p, const ThetaContext& ctx,
                           const ScanOptions& opts);

/// Classify every node of the res x res grid spanning [x0, x1] x [y0, y1]
/// (res >= 2, endpoints included, row-major with x as the slow axis).  Grid
/// nodes are exact: endpoint coordinates may be quadratic surds, in which
/// case every node along that axis lives in the same quadratic field.  Nodes
/// are partitioned among hardware threads; assembly is row-major, so the
/// result is identical regardless of worker count.
std::vector<PointResult> scan_grid(const ExactReal& x0, const ExactReal& x1,
                                   const ExactReal& y0, const ExactReal& y1, long res,
                                   const ThetaContext& ctx, const ScanOptions& opts);

/// Deterministic CSV: header x,y,verdict,n0_or_blank,rho_hat,witness_count;
/// numeric fields in decimal with 17 significant digits.
void write_scan_csv(std::ostream& out, const std::vector<PointResult>& rows);

}  // namespace hartogs
