#pragma once

#include <gmpxx.h>

#include <string>

namespace curvreal {

// Exact arbitrary-precision rational scalar. Note gmpxx arithmetic yields
// expression templates: assign results into a Rational before calling member
// functions, and avoid `auto` on the result of rational arithmetic.
using Rational = mpq_class;

// Parses "p", "-p", or "p/q" (q nonzero). No whitespace, no decimals.
// The result is canonicalized. Throws ValidationError on malformed input.
Rational parse_rational(const std::string& text);

// Canonical text form: "p/q", or plain "p" when the denominator is one.
std::string to_string(const Rational& value);

inline bool is_zero(const Rational& value) { return sgn(value) == 0; }

inline Rational zero_like(const Rational&) { return Rational(0); }

}  // namespace curvreal
