#include "curvreal/jet.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace curvreal {

namespace {

void check_axis(int dim, int axis) {
  if (axis < 0 || axis >= dim) {
    throw ShapeError("axis " + std::to_string(axis) + " out of range for dimension " +
                     std::to_string(dim));
  }
}

void check_shape(int dim, int cap) {
  if (dim < 1 || dim > Monomial::kMaxDim) {
    throw DomainError("jet dimension " + std::to_string(dim) + " outside supported range 1.." +
                      std::to_string(Monomial::kMaxDim));
  }
  if (cap < 0 || cap > Monomial::kMaxExponent) {
    throw DomainError("degree cap " + std::to_string(cap) + " outside supported range 0.." +
                      std::to_string(Monomial::kMaxExponent));
  }
}

void check_same_shape(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim() || a.degree_cap() != b.degree_cap()) {
    throw ShapeError("jet shape mismatch: (dim " + std::to_string(a.dim()) + ", cap " +
                     std::to_string(a.degree_cap()) + ") vs (dim " + std::to_string(b.dim()) +
                     ", cap " + std::to_string(b.degree_cap()) + ")");
  }
  if (a.dim() == 0) {
    throw ShapeError("arithmetic on a default-constructed jet");
  }
}

}  // namespace

Monomial Monomial::from_exponents(std::span<const int> exponents) {
  if (exponents.size() > static_cast<std::size_t>(kMaxDim)) {
    throw DomainError("monomial has more than " + std::to_string(kMaxDim) + " axes");
  }
  Monomial m;
  for (std::size_t axis = 0; axis < exponents.size(); ++axis) {
    const int e = exponents[axis];
    if (e < 0 || e > kMaxExponent) {
      throw DomainError("monomial exponent " + std::to_string(e) + " out of range");
    }
    m.bits_ |= static_cast<std::uint64_t>(e) << shift(static_cast<int>(axis));
    m.degree_ += e;
  }
  return m;
}

Monomial Monomial::unit(int axis) {
  Monomial m;
  m.bits_ = std::uint64_t{1} << shift(axis);
  m.degree_ = 1;
  return m;
}

std::vector<int> Monomial::exponents(int dim) const {
  std::vector<int> out(static_cast<std::size_t>(dim));
  for (int axis = 0; axis < dim; ++axis) out[static_cast<std::size_t>(axis)] = exponent(axis);
  return out;
}

Monomial Monomial::times(const Monomial& other) const {
  Monomial m;
  m.bits_ = bits_ + other.bits_;  // no lane carries: degrees are cap-bounded first
  m.degree_ = degree_ + other.degree_;
  return m;
}

Monomial Monomial::with_exponent(int axis, int value) const {
  if (value < 0 || value > kMaxExponent) {
    throw DomainError("monomial exponent " + std::to_string(value) + " out of range");
  }
  Monomial m = *this;
  const int old = exponent(axis);
  m.bits_ &= ~(std::uint64_t{0xff} << shift(axis));
  m.bits_ |= static_cast<std::uint64_t>(value) << shift(axis);
  m.degree_ += value - old;
  return m;
}

Jet::Jet(int dim, int degree_cap) : dim_(dim), cap_(degree_cap) { check_shape(dim, degree_cap); }

Jet Jet::constant(int dim, int degree_cap, const Rational& value) {
  Jet jet(dim, degree_cap);
  if (!curvreal::is_zero(value)) jet.terms_.push_back({Monomial{}, value});
  return jet;
}

Jet Jet::variable(int dim, int degree_cap, int axis) {
  Jet jet(dim, degree_cap);
  check_axis(dim, axis);
  if (degree_cap < 1) {
    throw ShapeError("degree cap 0 cannot hold a variable");
  }
  jet.terms_.push_back({Monomial::unit(axis), Rational(1)});
  return jet;
}

Jet Jet::monomial(int dim, int degree_cap, std::span<const int> exponents,
                  const Rational& coefficient) {
  Jet jet(dim, degree_cap);
  if (exponents.size() != static_cast<std::size_t>(dim)) {
    throw ShapeError("exponent list length " + std::to_string(exponents.size()) +
                     " does not match dimension " + std::to_string(dim));
  }
  const Monomial m = Monomial::from_exponents(exponents);
  if (m.degree() > degree_cap) {
    throw ShapeError("monomial degree " + std::to_string(m.degree()) + " exceeds cap " +
                     std::to_string(degree_cap));
  }
  if (!curvreal::is_zero(coefficient)) jet.terms_.push_back({m, coefficient});
  return jet;
}

Jet Jet::from_terms(int dim, int degree_cap, std::vector<Term> terms) {
  Jet jet(dim, degree_cap);
  for (const Term& t : terms) {
    if (t.monomial.degree() > degree_cap) {
      throw ShapeError("term degree " + std::to_string(t.monomial.degree()) + " exceeds cap " +
                       std::to_string(degree_cap));
    }
    for (int axis = dim; axis < Monomial::kMaxDim; ++axis) {
      if (t.monomial.exponent(axis) != 0) {
        throw ShapeError("term uses axis " + std::to_string(axis) + " beyond dimension " +
                         std::to_string(dim));
      }
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
  for (Term& t : terms) {
    if (!jet.terms_.empty() && jet.terms_.back().monomial == t.monomial) {
      jet.terms_.back().coefficient += t.coefficient;
      if (curvreal::is_zero(jet.terms_.back().coefficient)) jet.terms_.pop_back();
    } else if (!curvreal::is_zero(t.coefficient)) {
      jet.terms_.push_back(std::move(t));
    }
  }
  return jet;
}

Rational Jet::coefficient(std::span<const int> exponents) const {
  if (exponents.size() != static_cast<std::size_t>(dim_)) {
    throw ShapeError("exponent list length does not match jet dimension");
  }
  const Monomial m = Monomial::from_exponents(exponents);
  const auto it = std::lower_bound(
      terms_.begin(), terms_.end(), m,
      [](const Term& t, const Monomial& key) { return t.monomial < key; });
  if (it != terms_.end() && it->monomial == m) return it->coefficient;
  return Rational(0);
}

Rational Jet::constant_term() const {
  if (!terms_.empty() && terms_.front().monomial.degree() == 0) {
    return terms_.front().coefficient;
  }
  return Rational(0);
}

Jet Jet::truncated(int new_cap) const {
  Jet out(dim_, new_cap);
  for (const Term& t : terms_) {
    if (t.monomial.degree() <= new_cap) out.terms_.push_back(t);
  }
  return out;
}

Jet Jet::homogeneous_part(int degree) const {
  Jet out(dim_, cap_);
  for (const Term& t : terms_) {
    if (t.monomial.degree() == degree) out.terms_.push_back(t);
  }
  return out;
}

Jet operator+(const Jet& a, const Jet& b) {
  check_same_shape(a, b);
  Jet out(a.dim_, a.cap_);
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  while (ia != a.terms_.end() && ib != b.terms_.end()) {
    if (ia->monomial < ib->monomial) {
      out.terms_.push_back(*ia++);
    } else if (ib->monomial < ia->monomial) {
      out.terms_.push_back(*ib++);
    } else {
      Rational sum = ia->coefficient + ib->coefficient;
      if (!is_zero(sum)) out.terms_.push_back({ia->monomial, std::move(sum)});
      ++ia;
      ++ib;
    }
  }
  out.terms_.insert(out.terms_.end(), ia, a.terms_.end());
  out.terms_.insert(out.terms_.end(), ib, b.terms_.end());
  return out;
}

Jet operator-(const Jet& a) {
  Jet out = a;
  for (Jet::Term& t : out.terms_) t.coefficient = -t.coefficient;
  return out;
}

Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

Jet operator*(const Jet& a, const Jet& b) {
  check_same_shape(a, b);
  Jet out(a.dim_, a.cap_);
  std::vector<Jet::Term> products;
  products.reserve(a.terms_.size() * b.terms_.size());
  for (const Jet::Term& ta : a.terms_) {
    const int budget = a.cap_ - ta.monomial.degree();
    for (const Jet::Term& tb : b.terms_) {
      if (tb.monomial.degree() > budget) break;  // b is sorted by degree
      Rational c = ta.coefficient * tb.coefficient;
      products.push_back({ta.monomial.times(tb.monomial), std::move(c)});
    }
  }
  std::sort(products.begin(), products.end(),
            [](const Jet::Term& x, const Jet::Term& y) { return x.monomial < y.monomial; });
  for (Jet::Term& t : products) {
    if (!out.terms_.empty() && out.terms_.back().monomial == t.monomial) {
      out.terms_.back().coefficient += t.coefficient;
      if (is_zero(out.terms_.back().coefficient)) out.terms_.pop_back();
    } else {
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

Jet operator*(const Jet& a, const Rational& s) {
  Jet out = a;
  out *= s;
  return out;
}

Jet operator*(const Rational& s, const Jet& a) { return a * s; }

Jet& Jet::operator+=(const Jet& rhs) {
  *this = *this + rhs;
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  *this = *this - rhs;
  return *this;
}

Jet& Jet::operator*=(const Rational& scale) {
  if (curvreal::is_zero(scale)) {
    terms_.clear();
    return *this;
  }
  for (Term& t : terms_) t.coefficient *= scale;
  return *this;
}

Jet partial_derivative(const Jet& jet, int axis) {
  check_axis(jet.dim_, axis);
  Jet out(jet.dim_, jet.cap_);
  for (const Jet::Term& t : jet.terms_) {
    const int e = t.monomial.exponent(axis);
    if (e == 0) continue;
    Rational c = t.coefficient * e;
    out.terms_.push_back({t.monomial.with_exponent(axis, e - 1), std::move(c)});
  }
  // Decrementing one axis preserves graded-lex order, so out is canonical.
  return out;
}

Jet integrate_axis(const Jet& jet, int axis) {
  check_axis(jet.dim_, axis);
  Jet out(jet.dim_, jet.cap_);
  for (const Jet::Term& t : jet.terms_) {
    if (t.monomial.degree() + 1 > jet.cap_) continue;  // deliberate cap truncation
    const int e = t.monomial.exponent(axis);
    Rational c = t.coefficient / (e + 1);
    out.terms_.push_back({t.monomial.with_exponent(axis, e + 1), std::move(c)});
  }
  return out;
}

Rational evaluate(const Jet& jet, std::span<const Rational> point) {
  if (point.size() != static_cast<std::size_t>(jet.dim())) {
    throw ShapeError("evaluation point length does not match jet dimension");
  }
  // Cached powers per axis, grown on demand.
  std::vector<std::vector<Rational>> powers(point.size());
  for (std::size_t axis = 0; axis < point.size(); ++axis) powers[axis] = {Rational(1)};
  Rational total(0);
  for (const Jet::Term& t : jet.terms()) {
    Rational value = t.coefficient;
    for (int axis = 0; axis < jet.dim(); ++axis) {
      const int e = t.monomial.exponent(axis);
      if (e == 0) continue;
      auto& cache = powers[static_cast<std::size_t>(axis)];
      while (cache.size() <= static_cast<std::size_t>(e)) {
        Rational next = cache.back() * point[static_cast<std::size_t>(axis)];
        cache.push_back(std::move(next));
      }
      value *= cache[static_cast<std::size_t>(e)];
    }
    total += value;
  }
  return total;
}

int valuation(const Jet& jet) {
  if (jet.is_zero()) return kValuationInfinity;
  return jet.terms().front().monomial.degree();
}

Jet sqrt_unit(const Jet& jet) {
  if (!(jet.constant_term() == 1)) {
    throw DomainError("sqrt_unit needs constant term exactly 1, got " +
                      to_string(jet.constant_term()));
  }
  // Degree-by-degree: if s matches a through degree d-1, the degree-d slice of
  // a - s^2 is twice the degree-d slice of the root.
  Jet root = Jet::constant(jet.dim(), jet.degree_cap(), Rational(1));
  const Rational half(1, 2);
  for (int d = 1; d <= jet.degree_cap(); ++d) {
    Jet residue = jet - root * root;
    Jet slice = residue.homogeneous_part(d);
    if (slice.is_zero()) continue;
    slice *= half;
    root += slice;
  }
  return root;
}

Jet inverse_unit(const Jet& jet) {
  const Rational c = jet.constant_term();
  if (is_zero(c)) {
    throw DomainError("inverse_unit needs a nonzero constant term");
  }
  // 1/(c(1+u)) = (1/c) * sum (-u)^k for the valuation >= 1 part u.
  Rational c_inv = 1 / c;
  Jet u = jet * c_inv;
  u -= Jet::constant(jet.dim(), jet.degree_cap(), Rational(1));
  Jet minus_u = -u;
  Jet sum = Jet::constant(jet.dim(), jet.degree_cap(), Rational(1));
  Jet power = sum;
  for (int k = 1; k <= jet.degree_cap(); ++k) {
    power = power * minus_u;
    if (power.is_zero()) break;
    sum += power;
  }
  return sum * c_inv;
}

Jet substitute(const Jet& jet, std::span<const Jet> images) {
  if (jet.dim() == 0) {
    throw ShapeError("substitution into a default-constructed jet");
  }
  if (images.size() != static_cast<std::size_t>(jet.dim())) {
    throw ShapeError("substitution needs one image per variable");
  }
  for (const Jet& image : images) {
    if (image.dim() != images[0].dim() || image.degree_cap() != jet.degree_cap()) {
      throw ShapeError("substitution images must share one dimension and the source cap");
    }
    if (!is_zero(image.constant_term())) {
      throw DomainError("substitution image has a nonzero constant term; composition would "
                        "not respect the degree cap");
    }
  }
  const int out_dim = images[0].dim();
  const Jet one = Jet::constant(out_dim, jet.degree_cap(), Rational(1));
  std::vector<std::vector<Jet>> powers(images.size(), {one});
  Jet total(out_dim, jet.degree_cap());
  for (const Jet::Term& t : jet.terms()) {
    Jet value = Jet::constant(out_dim, jet.degree_cap(), t.coefficient);
    for (int axis = 0; axis < jet.dim(); ++axis) {
      const int e = t.monomial.exponent(axis);
      if (e == 0) continue;
      auto& cache = powers[static_cast<std::size_t>(axis)];
      while (cache.size() <= static_cast<std::size_t>(e)) {
        cache.push_back(cache.back() * images[static_cast<std::size_t>(axis)]);
      }
      value = value * cache[static_cast<std::size_t>(e)];
    }
    total += value;
  }
  return total;
}

std::string to_string(const Jet& jet) {
  if (jet.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Jet::Term& t : jet.terms()) {
    if (!first) os << " + ";
    first = false;
    os << to_string(t.coefficient);
    for (int axis = 0; axis < jet.dim(); ++axis) {
      const int e = t.monomial.exponent(axis);
      if (e == 0) continue;
      os << " x" << (axis + 1);
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Jet& jet) { return os << to_string(jet); }

}  // namespace curvreal
