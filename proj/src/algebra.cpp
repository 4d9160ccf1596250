#include "curvreal/algebra.hpp"

#include <random>
#include <string>

#include "curvreal/errors.hpp"

namespace curvreal {

namespace {

void check_operator_dim(int dim) {
  if (dim < 3) {
    throw DomainError("curvature operators need dimension at least 3, got " +
                      std::to_string(dim));
  }
}

}  // namespace

std::vector<int> signature_epsilons(int p, int q) {
  if (p < 0 || q < 0 || p + q < 1) throw DomainError("invalid signature");
  std::vector<int> eps;
  eps.reserve(static_cast<std::size_t>(p + q));
  for (int i = 0; i < p; ++i) eps.push_back(-1);
  for (int i = 0; i < q; ++i) eps.push_back(1);
  return eps;
}

AlgebraicCurvatureOperator AlgebraicCurvatureOperator::checked(Tensor4<Rational> components) {
  check_operator_dim(components.dim());
  if (!has_curvature_symmetries(components)) {
    throw ValidationError("tensor violates the curvature symmetries "
                          "(pair antisymmetry or the cyclic identity)");
  }
  return AlgebraicCurvatureOperator(std::move(components));
}

AlgebraicCurvatureOperator operator+(const AlgebraicCurvatureOperator& a,
                                     const AlgebraicCurvatureOperator& b) {
  return AlgebraicCurvatureOperator(a.components_ + b.components_);
}

AlgebraicCurvatureOperator operator-(const AlgebraicCurvatureOperator& a,
                                     const AlgebraicCurvatureOperator& b) {
  return AlgebraicCurvatureOperator(a.components_ - b.components_);
}

AlgebraicCurvatureOperator operator*(const AlgebraicCurvatureOperator& a, const Rational& s) {
  return AlgebraicCurvatureOperator(a.components_ * s);
}

AlgebraicCurvatureOperator project_to_curvature_operator(const Tensor4<Rational>& raw) {
  check_operator_dim(raw.dim());
  const int m = raw.dim();
  // Antisymmetrize the first covariant pair.
  Tensor4<Rational> anti(m, Rational(0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          Rational v = (raw(i, j, k, l) - raw(j, i, k, l)) / 2;
          anti(i, j, k, l) = std::move(v);
        }
  // Remove a third of the cyclic sum; this kills the cyclic obstruction while
  // preserving pair antisymmetry, and fixes tensors already in the space.
  Tensor4<Rational> cyc = cyclic_sum(anti);
  Tensor4<Rational> projected = anti - cyc * Rational(1, 3);
  if (!has_curvature_symmetries(projected)) {
    throw InternalError("curvature projector produced an invalid tensor");
  }
  return AlgebraicCurvatureOperator::checked(std::move(projected));
}

BilinearForm ricci(const AlgebraicCurvatureOperator& op) { return ricci(op.components()); }

InnerProduct InnerProduct::checked(BilinearForm form) {
  if (form.dim() < 1) throw DomainError("inner product needs dimension at least 1");
  if (!is_symmetric(form)) throw DomainError("inner product matrix is not symmetric");
  const std::pair<int, int> sig = signature_of(form);  // throws if degenerate
  BilinearForm inv = curvreal::inverse(form);
  return InnerProduct(std::move(form), std::move(inv), sig.first, sig.second);
}

InnerProduct InnerProduct::standard(int p, int q) {
  const std::vector<int> eps = signature_epsilons(p, q);
  const int m = p + q;
  BilinearForm form(m, Rational(0));
  for (int i = 0; i < m; ++i) form(i, i) = Rational(eps[static_cast<std::size_t>(i)]);
  return InnerProduct(form, form, p, q);  // diag(+-1) is its own inverse
}

Rational scalar_curvature(const AlgebraicCurvatureOperator& op, const InnerProduct& g) {
  if (op.dim() != g.dim()) throw ShapeError("operator and inner product dimension mismatch");
  const BilinearForm rho = ricci(op);
  Rational tau(0);
  for (int j = 0; j < op.dim(); ++j)
    for (int k = 0; k < op.dim(); ++k) tau += g.inverse()(j, k) * rho(j, k);
  return tau;
}

BilinearForm trace_free_ricci(const AlgebraicCurvatureOperator& op, const InnerProduct& g) {
  if (op.dim() != g.dim()) throw ShapeError("operator and inner product dimension mismatch");
  const Rational tau = scalar_curvature(op, g);
  const BilinearForm rho_s = symmetric_part(ricci(op));
  return rho_s - g.form() * (tau / op.dim());
}

AlgebraicCurvatureOperator sigma_s(const BilinearForm& psi) {
  check_operator_dim(psi.dim());
  if (!is_symmetric(psi)) throw DomainError("sigma_s needs a symmetric form");
  const int m = psi.dim();
  // sigma_s(psi)_{ijk}^l = (psi_{jk} delta_i^l - psi_{ik} delta_j^l) / (m - 1);
  // the unique curvature-operator section of ricci built from psi and delta.
  Tensor4<Rational> out(m, Rational(0));
  const Rational scale(1, m - 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Rational a = psi(j, k) * scale;
        Rational b = psi(i, k) * scale;
        out(i, j, k, i) += a;
        out(i, j, k, j) -= b;
      }
  return AlgebraicCurvatureOperator::checked(std::move(out));
}

AlgebraicCurvatureOperator sigma_a(const BilinearForm& psi) {
  check_operator_dim(psi.dim());
  if (!is_antisymmetric(psi)) throw DomainError("sigma_a needs an antisymmetric form");
  const int m = psi.dim();
  // sigma_a(psi)_{ijk}^l = -[2 psi_{ij} delta_k^l + psi_{ik} delta_j^l
  //                          - psi_{jk} delta_i^l] / (m + 1).
  Tensor4<Rational> out(m, Rational(0));
  const Rational scale(-1, m + 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Rational two_ab = 2 * psi(i, j) * scale;
        Rational b1 = psi(i, k) * scale;
        Rational b2 = psi(j, k) * scale;
        out(i, j, k, k) += two_ab;
        out(i, j, k, j) += b1;
        out(i, j, k, i) -= b2;
      }
  return AlgebraicCurvatureOperator::checked(std::move(out));
}

AlgebraicCurvatureOperator weyl_projective(const AlgebraicCurvatureOperator& op) {
  const RicciSplit<Rational> split = ricci_split(ricci(op));
  return op - sigma_s(split.symmetric) - sigma_a(split.antisymmetric);
}

ClassificationFlags classify(const AlgebraicCurvatureOperator& op, const InnerProduct& g) {
  if (op.dim() != g.dim()) throw ShapeError("operator and inner product dimension mismatch");
  const int m = op.dim();
  const RicciSplit<Rational> split = ricci_split(ricci(op));
  const BilinearForm zero(m, Rational(0));
  ClassificationFlags flags;
  flags.ricci_symmetric = split.antisymmetric == zero;
  flags.ricci_antisymmetric = split.symmetric == zero;
  flags.ricci_traceless = is_zero(scalar_curvature(op, g));
  const Tensor4<Rational> zero4(m, Rational(0));
  flags.projectively_flat = weyl_projective(op).components() == zero4;
  return flags;
}

AlgebraicCurvatureOperator random_curvature_operator(std::uint64_t seed, int dim,
                                                     int coefficient_bound) {
  check_operator_dim(dim);
  if (coefficient_bound < 1) throw DomainError("coefficient bound must be positive");
  // mt19937_64 with explicit modulo: bit-identical streams on every platform,
  // unlike the standard distributions.
  std::mt19937_64 rng(seed);
  const std::uint64_t span = static_cast<std::uint64_t>(2 * coefficient_bound + 1);
  Tensor4<Rational> raw(dim, Rational(0));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          const long value = static_cast<long>(rng() % span) - coefficient_bound;
          raw(i, j, k, l) = Rational(value);
        }
  return project_to_curvature_operator(raw);
}

BilinearForm inverse(const BilinearForm& m) {
  const int n = m.dim();
  if (n < 1) throw DomainError("cannot invert an empty matrix");
  // Gauss-Jordan with exact pivots.
  BilinearForm work = m;
  BilinearForm result(n, Rational(0));
  for (int i = 0; i < n; ++i) result(i, i) = Rational(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row) {
      if (!is_zero(work(row, col))) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) throw DomainError("matrix is singular");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(result(pivot, j), result(col, j));
      }
    }
    const Rational inv_pivot = 1 / work(col, col);
    for (int j = 0; j < n; ++j) {
      work(col, j) *= inv_pivot;
      result(col, j) *= inv_pivot;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || is_zero(work(row, col))) continue;
      const Rational factor = work(row, col);
      for (int j = 0; j < n; ++j) {
        Rational w = work(row, j) - factor * work(col, j);
        work(row, j) = std::move(w);
        Rational r = result(row, j) - factor * result(col, j);
        result(row, j) = std::move(r);
      }
    }
  }
  return result;
}

std::pair<int, int> signature_of(const BilinearForm& symmetric) {
  if (!is_symmetric(symmetric)) throw DomainError("signature needs a symmetric matrix");
  const int n = symmetric.dim();
  if (n < 1) throw DomainError("signature of an empty matrix");
  // Symmetric congruence diagonalization with exact arithmetic; the inertia
  // of the resulting diagonal is the signature (Sylvester).
  BilinearForm work = symmetric;
  for (int k = 0; k < n; ++k) {
    if (is_zero(work(k, k))) {
      // Try to bring a nonzero diagonal entry into position k.
      int swap_row = -1;
      for (int j = k + 1; j < n; ++j) {
        if (!is_zero(work(j, j))) {
          swap_row = j;
          break;
        }
      }
      if (swap_row >= 0) {
        for (int c = 0; c < n; ++c) std::swap(work(k, c), work(swap_row, c));
        for (int r = 0; r < n; ++r) std::swap(work(r, k), work(r, swap_row));
      } else {
        // All remaining diagonal entries vanish; use an off-diagonal entry.
        int other = -1;
        for (int j = k + 1; j < n; ++j) {
          if (!is_zero(work(k, j))) {
            other = j;
            break;
          }
        }
        if (other < 0) throw DomainError("matrix is degenerate");
        // Congruence by "row_k += row_other": diagonal becomes 2*work(k, other).
        for (int c = 0; c < n; ++c) {
          Rational v = work(k, c) + work(other, c);
          work(k, c) = std::move(v);
        }
        for (int r = 0; r < n; ++r) {
          Rational v = work(r, k) + work(r, other);
          work(r, k) = std::move(v);
        }
      }
    }
    if (is_zero(work(k, k))) throw DomainError("matrix is degenerate");
    const Rational pivot = work(k, k);
    for (int r = k + 1; r < n; ++r) {
      if (is_zero(work(r, k))) continue;
      const Rational factor = work(r, k) / pivot;
      for (int c = 0; c < n; ++c) {
        Rational v = work(r, c) - factor * work(k, c);
        work(r, c) = std::move(v);
      }
      for (int c = 0; c < n; ++c) {
        Rational v = work(c, r) - factor * work(c, k);
        work(c, r) = std::move(v);
      }
    }
  }
  int p = 0;
  int q = 0;
  for (int k = 0; k < n; ++k) {
    const int s = sgn(work(k, k));
    if (s < 0) {
      ++p;
    } else if (s > 0) {
      ++q;
    } else {
      throw DomainError("matrix is degenerate");
    }
  }
  return {p, q};
}

}  // namespace curvreal
