#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "curvreal/tensor.hpp"

namespace curvreal {

using BilinearForm = SquareMatrix<Rational>;

// Diagonal signs for signature (p, q): p entries of -1 first, then q of +1.
std::vector<int> signature_epsilons(int p, int q);

// Constant (3,1) tensor with the curvature symmetries: antisymmetric in the
// first two covariant slots, cyclic sum over the covariant slots zero. The
// last index is the contravariant slot. Instances exist only via checked()
// or project_to_curvature_operator(), so the symmetries always hold.
class AlgebraicCurvatureOperator {
 public:
  static AlgebraicCurvatureOperator checked(Tensor4<Rational> components);

  int dim() const { return components_.dim(); }
  const Tensor4<Rational>& components() const { return components_; }
  const Rational& operator()(int i, int j, int k, int l) const {
    return components_(i, j, k, l);
  }

  friend bool operator==(const AlgebraicCurvatureOperator&,
                         const AlgebraicCurvatureOperator&) = default;

  friend AlgebraicCurvatureOperator operator+(const AlgebraicCurvatureOperator& a,
                                              const AlgebraicCurvatureOperator& b);
  friend AlgebraicCurvatureOperator operator-(const AlgebraicCurvatureOperator& a,
                                              const AlgebraicCurvatureOperator& b);
  friend AlgebraicCurvatureOperator operator*(const AlgebraicCurvatureOperator& a,
                                              const Rational& s);

 private:
  explicit AlgebraicCurvatureOperator(Tensor4<Rational> components)
      : components_(std::move(components)) {}

  Tensor4<Rational> components_;
};

// Orthogonal-style projection of an arbitrary (3,1) tensor onto the space of
// curvature operators: antisymmetrize the first pair, then remove a third of
// the cyclic sum. Idempotent, and the identity on curvature operators.
AlgebraicCurvatureOperator project_to_curvature_operator(const Tensor4<Rational>& raw);

BilinearForm ricci(const AlgebraicCurvatureOperator& op);

// Nondegenerate symmetric constant bilinear form with its exact inverse and
// signature, computed once at construction.
class InnerProduct {
 public:
  // Validates symmetry and nondegeneracy; signature comes out of an exact
  // congruence diagonalization.
  static InnerProduct checked(BilinearForm form);
  static InnerProduct standard(int p, int q);  // diag(-1 x p, +1 x q)

  int dim() const { return form_.dim(); }
  std::pair<int, int> signature() const { return {p_, q_}; }
  const BilinearForm& form() const { return form_; }
  const BilinearForm& inverse() const { return inverse_; }

 private:
  InnerProduct(BilinearForm form, BilinearForm inverse, int p, int q)
      : form_(std::move(form)), inverse_(std::move(inverse)), p_(p), q_(q) {}

  BilinearForm form_;
  BilinearForm inverse_;
  int p_ = 0;
  int q_ = 0;
};

// tau = g^{jk} rho(A)_{jk}.
Rational scalar_curvature(const AlgebraicCurvatureOperator& op, const InnerProduct& g);

// rho_0 = rho_s - (tau/m) g: the symmetric Ricci part with its g-trace removed.
BilinearForm trace_free_ricci(const AlgebraicCurvatureOperator& op, const InnerProduct& g);

// Right inverses of the Ricci contraction (the splitting sections): sigma_s
// maps symmetric forms, sigma_a antisymmetric ones, into curvature operators
// with ricci(sigma(psi)) = psi. Coefficients are forced by the curvature
// symmetries together with the section property; see the derivation tests.
AlgebraicCurvatureOperator sigma_s(const BilinearForm& symmetric_form);
AlgebraicCurvatureOperator sigma_a(const BilinearForm& antisymmetric_form);

// Projective analogue of the Weyl part: P(A) = A - sigma_s(rho_s) - sigma_a(rho_a).
// Its Ricci contraction vanishes identically.
AlgebraicCurvatureOperator weyl_projective(const AlgebraicCurvatureOperator& op);

struct ClassificationFlags {
  bool projectively_flat = false;    // P(A) = 0
  bool ricci_symmetric = false;      // rho_a = 0
  bool ricci_antisymmetric = false;  // rho_s = 0
  bool ricci_traceless = false;      // tau = 0
  friend bool operator==(const ClassificationFlags&, const ClassificationFlags&) = default;
};

ClassificationFlags classify(const AlgebraicCurvatureOperator& op, const InnerProduct& g);

// Deterministic pseudo-random curvature operator: integer entries in
// [-coefficient_bound, coefficient_bound] pushed through the projector.
AlgebraicCurvatureOperator random_curvature_operator(std::uint64_t seed, int dim,
                                                     int coefficient_bound);

// Exact rational linear algebra.
BilinearForm inverse(const BilinearForm& m);  // throws DomainError if singular

// Signature (p, q) = (negative, positive) inertia of a symmetric form;
// throws DomainError if degenerate or not symmetric.
std::pair<int, int> signature_of(const BilinearForm& symmetric);

}  // namespace curvreal
