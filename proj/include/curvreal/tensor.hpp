#pragma once

#include <concepts>
#include <string>
#include <utility>
#include <vector>

#include "curvreal/errors.hpp"
#include "curvreal/rational.hpp"

namespace curvreal {

// Dense rank-2 container over a ring scalar (Rational or Jet). The zero
// exemplar fixes the scalar's shape, since a Jet's shape is part of its value.
template <typename Scalar>
class SquareMatrix {
 public:
  SquareMatrix() = default;

  SquareMatrix(int dim, const Scalar& zero)
      : dim_(dim), entries_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), zero) {
    if (dim < 0) throw ShapeError("negative matrix dimension");
  }

  explicit SquareMatrix(int dim)
    requires std::default_initializable<Scalar>
      : SquareMatrix(dim, Scalar{}) {}

  int dim() const { return dim_; }

  Scalar& operator()(int i, int j) { return entries_[index(i, j)]; }
  const Scalar& operator()(int i, int j) const { return entries_[index(i, j)]; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || i >= dim_ || j < 0 || j >= dim_) {
      throw ShapeError("matrix index (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") out of range for dimension " + std::to_string(dim_));
    }
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(j);
  }

  int dim_ = 0;
  std::vector<Scalar> entries_;
};

// Dense rank-4 container; by convention slots (i, j, k) are covariant and the
// last slot is the contravariant one.
template <typename Scalar>
class Tensor4 {
 public:
  Tensor4() = default;

  Tensor4(int dim, const Scalar& zero)
      : dim_(dim), entries_(pow4(dim), zero) {
    if (dim < 0) throw ShapeError("negative tensor dimension");
  }

  explicit Tensor4(int dim)
    requires std::default_initializable<Scalar>
      : Tensor4(dim, Scalar{}) {}

  int dim() const { return dim_; }

  Scalar& operator()(int i, int j, int k, int l) { return entries_[index(i, j, k, l)]; }
  const Scalar& operator()(int i, int j, int k, int l) const {
    return entries_[index(i, j, k, l)];
  }

  friend bool operator==(const Tensor4&, const Tensor4&) = default;

 private:
  static std::size_t pow4(int dim) {
    const std::size_t d = static_cast<std::size_t>(dim);
    return d * d * d * d;
  }

  std::size_t index(int i, int j, int k, int l) const {
    if (i < 0 || i >= dim_ || j < 0 || j >= dim_ || k < 0 || k >= dim_ || l < 0 || l >= dim_) {
      throw ShapeError("tensor index out of range for dimension " + std::to_string(dim_));
    }
    const std::size_t d = static_cast<std::size_t>(dim_);
    return ((static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)) * d +
            static_cast<std::size_t>(k)) * d + static_cast<std::size_t>(l);
  }

  int dim_ = 0;
  std::vector<Scalar> entries_;
};

namespace detail {

template <typename Scalar>
Scalar exemplar_zero(const SquareMatrix<Scalar>& m) {
  if (m.dim() == 0) throw ShapeError("operation on an empty matrix");
  Scalar z = zero_like(m(0, 0));
  return z;
}

template <typename Scalar>
Scalar exemplar_zero(const Tensor4<Scalar>& t) {
  if (t.dim() == 0) throw ShapeError("operation on an empty tensor");
  Scalar z = zero_like(t(0, 0, 0, 0));
  return z;
}

}  // namespace detail

template <typename Scalar>
SquareMatrix<Scalar> operator+(const SquareMatrix<Scalar>& a, const SquareMatrix<Scalar>& b) {
  if (a.dim() != b.dim()) throw ShapeError("matrix dimension mismatch");
  SquareMatrix<Scalar> out = a;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      Scalar sum = a(i, j) + b(i, j);
      out(i, j) = std::move(sum);
    }
  return out;
}

template <typename Scalar>
SquareMatrix<Scalar> operator-(const SquareMatrix<Scalar>& a, const SquareMatrix<Scalar>& b) {
  if (a.dim() != b.dim()) throw ShapeError("matrix dimension mismatch");
  SquareMatrix<Scalar> out = a;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      Scalar diff = a(i, j) - b(i, j);
      out(i, j) = std::move(diff);
    }
  return out;
}

template <typename Scalar>
SquareMatrix<Scalar> operator*(const SquareMatrix<Scalar>& a, const Rational& s) {
  SquareMatrix<Scalar> out = a;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      Scalar scaled = a(i, j) * s;
      out(i, j) = std::move(scaled);
    }
  return out;
}

template <typename Scalar>
Tensor4<Scalar> operator+(const Tensor4<Scalar>& a, const Tensor4<Scalar>& b) {
  if (a.dim() != b.dim()) throw ShapeError("tensor dimension mismatch");
  Tensor4<Scalar> out = a;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k)
        for (int l = 0; l < a.dim(); ++l) {
          Scalar sum = a(i, j, k, l) + b(i, j, k, l);
          out(i, j, k, l) = std::move(sum);
        }
  return out;
}

template <typename Scalar>
Tensor4<Scalar> operator-(const Tensor4<Scalar>& a, const Tensor4<Scalar>& b) {
  if (a.dim() != b.dim()) throw ShapeError("tensor dimension mismatch");
  Tensor4<Scalar> out = a;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k)
        for (int l = 0; l < a.dim(); ++l) {
          Scalar diff = a(i, j, k, l) - b(i, j, k, l);
          out(i, j, k, l) = std::move(diff);
        }
  return out;
}

template <typename Scalar>
Tensor4<Scalar> operator*(const Tensor4<Scalar>& a, const Rational& s) {
  Tensor4<Scalar> out = a;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k)
        for (int l = 0; l < a.dim(); ++l) {
          Scalar scaled = a(i, j, k, l) * s;
          out(i, j, k, l) = std::move(scaled);
        }
  return out;
}

template <typename Scalar>
SquareMatrix<Scalar> transpose(const SquareMatrix<Scalar>& m) {
  SquareMatrix<Scalar> out = m;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = m(j, i);
  return out;
}

template <typename Scalar>
bool is_symmetric(const SquareMatrix<Scalar>& m) {
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i + 1; j < m.dim(); ++j)
      if (!(m(i, j) == m(j, i))) return false;
  return true;
}

template <typename Scalar>
bool is_antisymmetric(const SquareMatrix<Scalar>& m) {
  const Scalar zero = detail::exemplar_zero(m);
  for (int i = 0; i < m.dim(); ++i) {
    if (!(m(i, i) == zero)) return false;
    for (int j = i + 1; j < m.dim(); ++j) {
      Scalar sum = m(i, j) + m(j, i);
      if (!(sum == zero)) return false;
    }
  }
  return true;
}

template <typename Scalar>
SquareMatrix<Scalar> symmetric_part(const SquareMatrix<Scalar>& m) {
  SquareMatrix<Scalar> sum = m + transpose(m);
  return sum * Rational(1, 2);
}

template <typename Scalar>
SquareMatrix<Scalar> antisymmetric_part(const SquareMatrix<Scalar>& m) {
  SquareMatrix<Scalar> diff = m - transpose(m);
  return diff * Rational(1, 2);
}

template <typename Scalar>
SquareMatrix<Scalar> matmul(const SquareMatrix<Scalar>& a, const SquareMatrix<Scalar>& b) {
  if (a.dim() != b.dim()) throw ShapeError("matrix dimension mismatch");
  const Scalar zero = detail::exemplar_zero(a);
  SquareMatrix<Scalar> out(a.dim(), zero);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      Scalar acc = zero;
      for (int k = 0; k < a.dim(); ++k) {
        Scalar prod = a(i, k) * b(k, j);
        acc = acc + prod;
      }
      out(i, j) = std::move(acc);
    }
  return out;
}

// Ricci contraction of a (3,1) tensor: rho(j, k) = sum_i T(i, j, k, i).
template <typename Scalar>
SquareMatrix<Scalar> ricci(const Tensor4<Scalar>& t) {
  const Scalar zero = detail::exemplar_zero(t);
  SquareMatrix<Scalar> out(t.dim(), zero);
  for (int j = 0; j < t.dim(); ++j)
    for (int k = 0; k < t.dim(); ++k) {
      Scalar acc = zero;
      for (int i = 0; i < t.dim(); ++i) acc = acc + t(i, j, k, i);
      out(j, k) = std::move(acc);
    }
  return out;
}

template <typename Scalar>
struct RicciSplit {
  SquareMatrix<Scalar> antisymmetric;
  SquareMatrix<Scalar> symmetric;
};

// Splits a bilinear form into its antisymmetric and symmetric halves,
// rho = rho_a + rho_s.
template <typename Scalar>
RicciSplit<Scalar> ricci_split(const SquareMatrix<Scalar>& form) {
  return {antisymmetric_part(form), symmetric_part(form)};
}

// Sum of the three cyclic rotations of the covariant slots.
template <typename Scalar>
Tensor4<Scalar> cyclic_sum(const Tensor4<Scalar>& t) {
  Tensor4<Scalar> out(t.dim(), detail::exemplar_zero(t));
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j)
      for (int k = 0; k < t.dim(); ++k)
        for (int l = 0; l < t.dim(); ++l) {
          Scalar acc = t(i, j, k, l) + t(j, k, i, l);
          acc = acc + t(k, i, j, l);
          out(i, j, k, l) = std::move(acc);
        }
  return out;
}

// Antisymmetry in the first two covariant slots plus the first Bianchi-type
// cyclic identity; the pair of symmetries defining a curvature operator.
template <typename Scalar>
bool has_curvature_symmetries(const Tensor4<Scalar>& t) {
  const Scalar zero = detail::exemplar_zero(t);
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j)
      for (int k = 0; k < t.dim(); ++k)
        for (int l = 0; l < t.dim(); ++l) {
          Scalar anti = t(i, j, k, l) + t(j, i, k, l);
          if (!(anti == zero)) return false;
          Scalar cyc = t(i, j, k, l) + t(j, k, i, l);
          cyc = cyc + t(k, i, j, l);
          if (!(cyc == zero)) return false;
        }
  return true;
}

}  // namespace curvreal
