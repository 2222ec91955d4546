// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hartogs {

/// Error category; the CLI maps each category to a fixed process exit code.
enum class error_kind {
  parse,        ///< malformed input text (exit code 2)
  precondition, ///< an operation precondition was violated (exit code 3)
  precision,    ///< enclosure too wide even after precision escalation (exit code 4)
};

/// Base class of all exceptions thrown by this library.
class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  error_kind kind() const noexcept { return kind_; }

 private:
  error_kind kind_;
};

/// Malformed input text.  `offset` is the byte offset of the offending token.
class parse_error : public error {
 public:
  parse_error(std::size_t offset, const std::string& what)
      : error(error_kind::parse,
              what + " (byte offset " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

class precondition_error : public error {
 public:
  explicit precondition_error(const std::string& what)
      : error(error_kind::precondition, what) {}
};

class precision_error : public error {
 public:
  explicit precision_error(const std::string& what)
      : error(error_kind::precision, what) {}
};

// --- precision-class failures (candidates for escalation and retry) ---

struct divisor_straddles_zero : precision_error {
  divisor_straddles_zero() : precision_error("interval divisor straddles zero") {}
};

struct log_of_nonpositive : precision_error {
  log_of_nonpositive() : precision_error("log of an interval not strictly positive") {}
};

struct tie_straddle : precision_error {
  tie_straddle() : precision_error("interval straddles a half-integer rounding boundary") {}
};

struct root_not_certified : precision_error {
  explicit root_not_certified(
      const std::string& what = "failed to certify an isolated simple root")
      : precision_error(what) {}
};

struct precision_exhausted : precision_error {
  explicit precision_exhausted(const std::string& what = "precision budget exhausted")
      : precision_error(what) {}
};

// --- precondition failures (escalation cannot help) ---

struct rational_input : precondition_error {
  rational_input() : precondition_error("input is rational; an irrational value is required") {}
};

struct irrational_point : precondition_error {
  irrational_point() : precondition_error("point has an irrational coordinate; a rational point is required") {}
};

struct nonpositive_im_tau : precondition_error {
  nonpositive_im_tau() : precondition_error("Im(tau) must be strictly positive") {}
};

struct cutoff_overflow : precondition_error {
  cutoff_overflow() : precondition_error("theta summation cutoff exceeds the supported range") {}
};

struct degree_too_small : precondition_error {
  explicit degree_too_small(
      const std::string& what = "polynomial degree in X is too small for this operation")
      : precondition_error(what) {}
};

struct zero_leading_coefficient : precondition_error {
  zero_leading_coefficient() : precondition_error("leading X-coefficient is identically zero") {}
};

struct not_a_root : precondition_error {
  not_a_root() : precondition_error("seed does not satisfy the polynomial at w = 0") {}
};

struct singular_initial_root : precondition_error {
  singular_initial_root() : precondition_error("seed is a multiple root at w = 0; lifting requires a simple root") {}
};

struct zero_polynomial : precondition_error {
  zero_polynomial() : precondition_error("the zero polynomial has no well-defined root set") {}
};

struct discriminant_vanishes_identically : precondition_error {
  discriminant_vanishes_identically()
      : precondition_error("discriminant vanishes identically at this base point") {}
};

}  // namespace hartogs
