#pragma once

#include <utility>
#include <vector>

#include "curvreal/algebra.hpp"
#include "curvreal/jet.hpp"
#include "curvreal/tensor.hpp"

namespace curvreal {

// Symmetric jet-valued metric with declared signature (p, q), timelike axes
// first. Construction validates symmetry, agreement of shapes, and that the
// value at the origin is nondegenerate with the declared signature.
class MetricField {
 public:
  static MetricField checked(int p, int q, SquareMatrix<Jet> components);
  static MetricField constant_diagonal(int p, int q, int degree_cap);

  int dim() const { return components_.dim(); }
  int degree_cap() const;
  std::pair<int, int> signature() const { return {p_, q_}; }
  const SquareMatrix<Jet>& components() const { return components_; }
  const Jet& operator()(int i, int j) const { return components_(i, j); }

  SquareMatrix<Rational> value_at_origin() const;
  MetricField truncated(int new_cap) const;

  friend bool operator==(const MetricField&, const MetricField&) = default;

 private:
  MetricField(int p, int q, SquareMatrix<Jet> components)
      : p_(p), q_(q), components_(std::move(components)) {}

  int p_ = 0;
  int q_ = 0;
  SquareMatrix<Jet> components_;
};

struct NormalFormVerdict {
  // g(0) is exactly diag(epsilon) in the declared timelike-first layout.
  bool value_normalized = false;
  // All first-order coefficients of every component vanish.
  bool first_order_flat = false;
};

NormalFormVerdict validate_normal_form(const MetricField& metric);

struct QuadraticNormalization {
  // Original coordinates expressed in the new ones, one jet per axis.
  std::vector<Jet> coordinate_map;
  MetricField metric;
  bool input_was_first_order_flat = false;
};

// Kills the first-order part of a value-normalized metric with the quadratic
// coordinate change x^i = y^i - c^i_{jk} y^j y^k / 2, where c is the
// Christoffel value of g at the origin. An already flat input passes through
// untouched with the identity map.
QuadraticNormalization quadratic_normalize(const MetricField& metric);

// Frame of jet vector fields E_i = E_i^a(x) d/dx^a, stored row-per-field.
// The value at the origin is required to be the identity matrix.
class FrameField {
 public:
  FrameField(int dim, SquareMatrix<Jet> components);
  static FrameField identity(int dim, int degree_cap);

  int dim() const { return components_.dim(); }
  int degree_cap() const;
  const SquareMatrix<Jet>& components() const { return components_; }
  // Component a of frame field i.
  const Jet& operator()(int frame_index, int axis) const {
    return components_(frame_index, axis);
  }

  FrameField truncated(int new_cap) const;

  friend bool operator==(const FrameField&, const FrameField&) = default;

 private:
  SquareMatrix<Jet> components_;
};

// Signed Gram-Schmidt on the coordinate fields of a first-order-flat metric:
// yields g(E_i, E_j) = epsilon_i delta_ij exactly as jets, with E(0) = id and
// deviation from the identity of valuation >= 2.
FrameField orthonormal_frame(const MetricField& normalized_metric);

// psi(E_i, E_j): contracts both slots of a jet bilinear form with the frame.
// The frame is truncated to the form's cap before contracting.
SquareMatrix<Jet> frame_contract(const SquareMatrix<Jet>& form, const FrameField& frame);

// Jet-valued inverse metric via the geometric series around g(0)^{-1};
// exact at the metric's cap.
SquareMatrix<Jet> inverse_metric_jets(const MetricField& metric);

}  // namespace curvreal
