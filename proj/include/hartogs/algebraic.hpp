// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hartogs/ball.hpp"
#include "hartogs/gauss.hpp"
#include "hartogs/series.hpp"

namespace hartogs {

/// Dense univariate polynomial over the Gaussian rationals (coefficient k
/// multiplies the k-th power).  Always trimmed: no trailing zero coefficient.
class UnivarPoly {
 public:
  UnivarPoly() = default;
  explicit UnivarPoly(GaussRat c0) { c_.push_back(std::move(c0)); trim(); }
  explicit UnivarPoly(std::vector<GaussRat> c) : c_(std::move(c)) { trim(); }

  static UnivarPoly zero() { return UnivarPoly(); }
  static UnivarPoly one() { return UnivarPoly(GaussRat(1)); }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return long(c_.size()) - 1; }  // -1 for the zero poly
  const std::vector<GaussRat>& coeffs() const { return c_; }
  GaussRat coeff(long k) const {
    return (k >= 0 && k < long(c_.size())) ? c_[size_t(k)] : GaussRat(0);
  }

  UnivarPoly operator+(const UnivarPoly& o) const;
  UnivarPoly operator-(const UnivarPoly& o) const;
  UnivarPoly operator*(const UnivarPoly& o) const;
  UnivarPoly scaled(const GaussRat& s) const;
  UnivarPoly monic() const;  ///< divide by the leading coefficient
  UnivarPoly derivative() const;

  /// Quotient and remainder; divisor must be nonzero.
  static std::pair<UnivarPoly, UnivarPoly> divrem(const UnivarPoly& a, const UnivarPoly& b);
  /// Monic greatest common divisor (Euclid over the exact field).
  static UnivarPoly gcd(UnivarPoly a, UnivarPoly b);

  GaussRat eval(const GaussRat& z) const;
  BallComplex eval(const BallComplex& z, mpfr_prec_t bits) const;

  bool operator==(const UnivarPoly& o) const { return c_ == o.c_; }
  std::string str(const std::string& var = "z") const;

 private:
  void trim();
  std::vector<GaussRat> c_;
};

/// Reduced ratio of univariate polynomials: gcd(num, den) = 1, den monic and
/// nonzero.  The exact coefficient field for lifted series.
class RationalFunc {
 public:
  RationalFunc() : num_(), den_(UnivarPoly::one()) {}
  RationalFunc(UnivarPoly num, UnivarPoly den);
  RationalFunc(const GaussRat& c) : num_(UnivarPoly(c)), den_(UnivarPoly::one()) {}
  static RationalFunc of_poly(UnivarPoly p) { return RationalFunc(std::move(p), UnivarPoly::one()); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.degree() == 0; }
  const UnivarPoly& num() const { return num_; }
  const UnivarPoly& den() const { return den_; }

  RationalFunc operator+(const RationalFunc& o) const;
  RationalFunc operator-(const RationalFunc& o) const;
  RationalFunc operator*(const RationalFunc& o) const;
  RationalFunc operator/(const RationalFunc& o) const;  ///< throws on zero divisor
  RationalFunc operator-() const;

  /// Exact evaluation; throws precondition_error when den(z) = 0.
  GaussRat eval(const GaussRat& z) const;
  BallComplex eval(const BallComplex& z, mpfr_prec_t bits) const;

  bool operator==(const RationalFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  std::string str(const std::string& var = "z") const;

 private:
  void normalize();
  UnivarPoly num_, den_;
};

/// Sparse bivariate polynomial over the Gaussian rationals, keyed by
/// (deg_z, deg_w).  No zero coefficients are stored; total monomial count is
/// capped to keep exact arithmetic from blowing up.
class BivarPoly {
 public:
  static constexpr size_t kMonomialCap = 10000;

  BivarPoly() = default;
  explicit BivarPoly(const GaussRat& c) { set(0, 0, c); }

  static BivarPoly monomial(long dz, long dw, const GaussRat& c);

  bool is_zero() const { return m_.empty(); }
  size_t monomials() const { return m_.size(); }
  long degree_z() const;
  long degree_w() const;
  GaussRat coeff(long dz, long dw) const;
  void set(long dz, long dw, const GaussRat& c);  ///< erases on zero
  const std::map<std::pair<long, long>, GaussRat>& terms() const { return m_; }

  BivarPoly operator+(const BivarPoly& o) const;
  BivarPoly operator-(const BivarPoly& o) const;
  BivarPoly operator*(const BivarPoly& o) const;
  BivarPoly operator-() const;
  BivarPoly pow(unsigned long e) const;

  GaussRat eval(const GaussRat& z, const GaussRat& w) const;
  BallComplex eval(const BallComplex& z, const BallComplex& w, mpfr_prec_t bits) const;
  /// Specialize z exactly, leaving a univariate polynomial in w.
  UnivarPoly eval_z(const GaussRat& z) const;
  /// Coefficient of w^k as a polynomial in z.
  UnivarPoly w_coeff(long k) const;

  bool operator==(const BivarPoly& o) const { return m_ == o.m_; }
  std::string str() const;  ///< canonical text over variables z, w

 private:
  std::map<std::pair<long, long>, GaussRat> m_;
};

/// Algebraic relation Phi(z, w, X) = sum_j Phi_j(z, w) * X^(t-j): a
/// polynomial of degree t >= 1 in X whose leading coefficient Phi_0 is not
/// identically zero.
class XPoly {
 public:
  static constexpr long kMaxDegree = 8;

  /// coeffs[j] multiplies X^(t-j); coeffs[0] is the leading coefficient.
  explicit XPoly(std::vector<BivarPoly> coeffs);

  long t() const { return long(c_.size()) - 1; }
  const BivarPoly& coeff(long j) const { return c_[size_t(j)]; }
  const std::vector<BivarPoly>& coeffs() const { return c_; }
  bool is_monic() const;

  /// Formal derivative with respect to X (degree t-1 in X).
  XPoly dX() const;

  std::string str() const;

 private:
  std::vector<BivarPoly> c_;
};

/// Monicization: X -> X/Phi_0 after scaling by Phi_0^(t-1), so that any root
/// series G of the original relation corresponds to the root Phi_0 * G of the
/// monic one.
struct Monicized {
  XPoly relation;   ///< monic of the same degree
  BivarPoly scale;  ///< Phi_0: multiply roots by this to move between relations
};
Monicized monicize(const XPoly& phi);

/// Discriminant of a monic relation (t >= 2): the resultant of Phi and its
/// X-derivative with the standard alternating-sign normalization, computed as
/// an exact Sylvester determinant.  Vanishes exactly where Phi(z0, w0, .) has
/// a repeated root.
BivarPoly discriminant(const XPoly& phi);

/// Truncated power series in w with exact rational-function coefficients.
struct ExactSeries {
  long order = 0;                // valid through w^order
  std::vector<RationalFunc> c;   // c[k] multiplies w^k; size order+1
  std::string str() const;       ///< line-oriented num/den serialization
};

/// Truncated power series in w with complex enclosure coefficients.
struct NumericSeries {
  long order = 0;
  std::vector<BallComplex> c;
};

/// Newton-Hensel lift of the branch of Phi(z, w, X) = 0 through the simple
/// root F0 at w = 0: returns F with F = F0 + O(w) and Phi(F) = 0 mod
/// w^(order+1), exactly.  Requires Phi(z, 0, F0) = 0 (NotARoot otherwise) and
/// dPhi/dX(z, 0, F0) != 0 as a rational function (SingularInitialRoot
/// otherwise).  The relation need not be monic.
ExactSeries hensel_lift_exact(const XPoly& phi, const RationalFunc& f0, long order);

/// Evaluate Phi(z, w, F(w)) mod w^(order+1) for an exact series F: the
/// residual is identically zero iff every returned coefficient is zero.
ExactSeries relation_residual(const XPoly& phi, const ExactSeries& f);

/// One polynomial root enclosure: a disk certified to contain at least one
/// root; certified_simple marks disks proven to contain exactly one.
struct RootDisk {
  BallComplex center;
  BigFloat radius;
  int cluster_size = 1;          ///< disks in this root's overlap component
  bool certified_simple = false;
};

/// All roots of sum_k coeffs[k] X^k (enclosure coefficients) with certified
/// inclusion disks from a simultaneous-iteration solver plus a posteriori
/// correction bounds.  Trims certified-zero leading coefficients; throws
/// zero_polynomial when every coefficient is zero, returns empty for nonzero
/// constants, and throws root_not_certified when the leading coefficient
/// cannot be separated from zero.
std::vector<RootDisk> roots_univar(const std::vector<BallComplex>& coeffs, bool certify,
                                   mpfr_prec_t bits);

/// Newton-Hensel lift at a sample point z0: coefficients are complex
/// enclosures.  The seed enclosure x0 must certifiably contain exactly one
/// simple root of Phi(z0, 0, .) (RootNotCertified otherwise); the returned
/// series passes the residual check: every coefficient of Phi(F) through
/// w^order is a ball containing zero.
NumericSeries hensel_lift_numeric(const XPoly& phi, const GaussRat& z0,
                                  const BallComplex& x0, long order,
                                  const PrecisionBudget& budget);

/// Distance from w = 0 to the discriminant locus along the fiber z = z0.
struct SingularityRadius {
  bool infinite = false;  ///< no discriminant root in the search disk
  Ball value;             ///< min |w| over certified roots, when finite
};

/// Smallest |w| among roots of the discriminant specialized at exact z0,
/// restricted to |w| <= search_radius when given.  Throws
/// discriminant_vanishes_identically when the specialized discriminant is the
/// zero polynomial, degree_too_small for t < 2.
SingularityRadius singularity_radius(const XPoly& phi, const GaussRat& z0,
                                     const std::optional<mpq_class>& search_radius,
                                     const PrecisionBudget& budget);

/// One sample point of the consistency report.
struct ConsistencyRow {
  GaussRat z0;
  Verdict growth_verdict = Verdict::Inconclusive;
  std::optional<Ball> growth_radius;   // from the coefficient-growth estimate
  bool sing_infinite = false;
  std::optional<Ball> sing_radius;     // from the discriminant locus
  double ratio = 0.0;                  // growth / locus, when both finite
  bool pass = false;
};

/// Radius-vs-discriminant-locus consistency check for an algebraic branch:
/// lift numerically at each sample to N coefficients, estimate the radius of
/// convergence from coefficient growth, and compare against the distance to
/// the discriminant locus.  Pass per point: ratio within [0.9, 1.1], or both
/// sides infinite.
struct ConsistencyReport {
  std::vector<ConsistencyRow> rows;
  bool pass = false;
  std::string contrast;  ///< fixed note contrasting the non-algebraic model series
};
ConsistencyReport radius_locus_consistency(const XPoly& phi,
                                           const std::vector<GaussRat>& samples,
                                           long terms, long window,
                                           const PrecisionBudget& budget);

void render_report(std::ostream& out, const ConsistencyReport& report);

}  // namespace hartogs
