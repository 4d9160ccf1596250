#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include "curvreal/errors.hpp"
#include "curvreal/rational.hpp"

namespace curvreal {

// Valuation assigned to the zero jet.
inline constexpr int kValuationInfinity = std::numeric_limits<int>::max();

// Exponent multi-index, one byte per axis packed into a word with axis 0 in
// the most significant byte. Ordering is graded lexicographic: total degree
// first, then plain integer comparison of the packed word, so the leading
// term of a jet is always a term of minimal degree.
class Monomial {
 public:
  static constexpr int kMaxDim = 8;
  static constexpr int kMaxExponent = 255;

  Monomial() = default;  // the constant monomial

  static Monomial from_exponents(std::span<const int> exponents);
  static Monomial unit(int axis);  // x_axis

  int exponent(int axis) const {
    return static_cast<int>((bits_ >> shift(axis)) & 0xff);
  }
  int degree() const { return degree_; }
  std::vector<int> exponents(int dim) const;

  // Exponent-wise sum. Callers keep per-axis exponents within kMaxExponent by
  // bounding total degree first; byte lanes cannot carry into each other then.
  Monomial times(const Monomial& other) const;
  Monomial with_exponent(int axis, int value) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    return a.bits_ < b.bits_;
  }

 private:
  static int shift(int axis) { return 8 * (kMaxDim - 1 - axis); }

  std::uint64_t bits_ = 0;
  int degree_ = 0;
};

// Polynomial jet: a multivariate polynomial over exact rationals carrying a
// fixed dimension and total-degree cap. Terms are kept in canonical form
// (graded-lex sorted, no zero coefficients, nothing above the cap), so
// equality of jets is equality of representations. Operations are pure; two
// operands must agree in both dimension and cap or a ShapeError is thrown.
// Truncation never happens silently: use truncated() to change the cap.
class Jet {
 public:
  struct Term {
    Monomial monomial;
    Rational coefficient;
    friend bool operator==(const Term&, const Term&) = default;
  };

  // Dimensionless placeholder so jets can live in containers; any arithmetic
  // involving it fails the shape check.
  Jet() = default;

  Jet(int dim, int degree_cap);  // the zero jet
  static Jet constant(int dim, int degree_cap, const Rational& value);
  static Jet variable(int dim, int degree_cap, int axis);
  static Jet monomial(int dim, int degree_cap, std::span<const int> exponents,
                      const Rational& coefficient);
  // Canonicalizes an arbitrary term list: sorts, merges equal monomials,
  // drops zero coefficients. Terms above the cap are an error, not dropped.
  static Jet from_terms(int dim, int degree_cap, std::vector<Term> terms);

  int dim() const { return dim_; }
  int degree_cap() const { return cap_; }
  bool is_zero() const { return terms_.empty(); }
  std::span<const Term> terms() const { return terms_; }

  Rational coefficient(std::span<const int> exponents) const;
  Rational constant_term() const;

  // Copy carrying a different cap. Lowering the cap drops the terms above it;
  // raising it is exact. This is the only way terms get truncated.
  Jet truncated(int new_cap) const;
  Jet homogeneous_part(int degree) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Rational& scale);

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  friend Jet operator+(const Jet&, const Jet&);
  friend Jet operator-(const Jet&, const Jet&);
  friend Jet operator-(const Jet&);
  friend Jet operator*(const Jet&, const Jet&);
  friend Jet partial_derivative(const Jet&, int axis);
  friend Jet integrate_axis(const Jet&, int axis);

  int dim_ = 0;
  int cap_ = 0;
  std::vector<Term> terms_;
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Rational& s);
Jet operator*(const Rational& s, const Jet& a);

std::ostream& operator<<(std::ostream& os, const Jet& jet);
std::string to_string(const Jet& jet);

Jet partial_derivative(const Jet& jet, int axis);

// Antiderivative along an axis with zero constant of integration. Terms whose
// degree would exceed the cap are dropped (the cap is part of the contract).
Jet integrate_axis(const Jet& jet, int axis);

Rational evaluate(const Jet& jet, std::span<const Rational> point);

// Lowest total degree with a nonzero coefficient; kValuationInfinity for zero.
int valuation(const Jet& jet);

// Square root of a jet with constant term exactly 1, degree by degree:
// the unique unit square root with constant term 1.
Jet sqrt_unit(const Jet& jet);

// Multiplicative inverse of a jet with nonzero constant term (geometric series
// around the constant part).
Jet inverse_unit(const Jet& jet);

// Composition: substitutes images[i] for variable i. Every image must share
// one target dimension and the source's cap, and must vanish at the origin so
// that composition is cap-stable.
Jet substitute(const Jet& jet, std::span<const Jet> images);

inline Jet zero_like(const Jet& jet) { return Jet(jet.dim(), jet.degree_cap()); }

}  // namespace curvreal
