// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>

#include "hartogs/algebraic.hpp"
#include "hartogs/exact_real.hpp"
#include "hartogs/gauss.hpp"

namespace hartogs {

/// Parse an exact rational: `int`, `int/int`, or a decimal such as `0.25`
/// (decimals become exact rationals; no binary-float contamination).
/// Throws parse_error with a byte offset on malformed input.
mpq_class parse_rational(const std::string& src);

/// Parse an exact real number:
///   real := ['+'|'-'] term {('+'|'-') term}
///   term := number ['*' root] | root
///   root := 'sqrt' '(' int ')'
/// All roots must share one radicand; square radicands canonicalize to
/// rationals (`sqrt(4)` parses as 2).  Negative radicands are rejected.
ExactReal parse_real(const std::string& src);

/// Parse a Gaussian rational in `a+bi` form: `2`, `0+1i`, `1/2-2i`, `-i`,
/// `0.5+1.25i`.  The imaginary unit binds to the number it follows.
GaussRat parse_complex(const std::string& src);

/// Parse an algebraic relation over variables z, w, X:
///   poly   := ['+'|'-'] term {('+'|'-') term}
///   term   := ['-'] factor {'*' ['-'] factor}
///   factor := primary ['^' int]
///   primary := number ['i'] | 'i' | 'sqrt' '(' int ')' | 'z' | 'w' | 'X'
///            | '(' poly ')'
/// `/` appears only inside numeric literals; `^` exponents are nonnegative
/// integer literals; `sqrt(k)` is accepted only for square k (the value must
/// be a Gaussian rational).  Validates degree t >= 1 in X and a leading
/// coefficient that is not identically zero.
XPoly parse_poly(const std::string& src);

}  // namespace hartogs
