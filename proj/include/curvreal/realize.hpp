#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvreal/algebra.hpp"
#include "curvreal/jet.hpp"
#include "curvreal/metric.hpp"
#include "curvreal/tensor.hpp"
#include "curvreal/verdict.hpp"

namespace curvreal {

// Torsion-free connection coefficients as jets: symmetric in the lower pair
// (i, j), upper index last. The symmetry is a construction invariant; the
// mutating accessor writes both orders at once.
class ChristoffelField {
 public:
  ChristoffelField(int dim, int degree_cap);  // zero connection
  static ChristoffelField checked(int dim, int degree_cap, std::vector<Jet> components);

  int dim() const { return dim_; }
  int degree_cap() const { return cap_; }
  const Jet& operator()(int i, int j, int k) const { return components_[index(i, j, k)]; }
  void set_symmetric_pair(int i, int j, int k, Jet value);

  // T_j = Gamma_{ji}^i summed over i; what the curvature trace formulas use.
  Jet lower_trace(int j) const;
  bool vanishes_at_origin() const;

  ChristoffelField& operator+=(const ChristoffelField& rhs);
  friend ChristoffelField operator+(const ChristoffelField& a, const ChristoffelField& b);
  friend ChristoffelField operator*(const ChristoffelField& a, const Rational& s);
  friend bool operator==(const ChristoffelField&, const ChristoffelField&) = default;

 private:
  std::size_t index(int i, int j, int k) const;

  int dim_ = 0;
  int cap_ = 0;
  std::vector<Jet> components_;
};

// Symmetric jet bilinear form measuring how far the frame-expressed symmetric
// Ricci part of a connection is from its target; the quantity the iteration
// drives to zero.
class RicciDefectField {
 public:
  RicciDefectField(int dim, int degree_cap);
  static RicciDefectField from_components(SquareMatrix<Jet> components);

  int dim() const { return components_.dim(); }
  int degree_cap() const { return components_(0, 0).degree_cap(); }
  const SquareMatrix<Jet>& components() const { return components_; }
  const Jet& operator()(int i, int j) const { return components_(i, j); }
  bool is_zero() const;
  int valuation() const;  // min over components; kValuationInfinity if zero

  friend bool operator==(const RicciDefectField&, const RicciDefectField&) = default;

 private:
  explicit RicciDefectField(SquareMatrix<Jet> components)
      : components_(std::move(components)) {}

  SquareMatrix<Jet> components_;
};

using CurvatureField = Tensor4<Jet>;

// First-derivative part of the curvature of a connection:
// L(Gamma)_{ijk}^l = d_i Gamma_{jk}^l - d_j Gamma_{ik}^l, truncated to the
// curvature-level cap (one below the connection's).
CurvatureField curvature_linear_part(const ChristoffelField& gamma);

// Symmetric bilinear pairing of connections into curvature-type tensors:
// (G * E)_{ijk}^l = E_{in}^l G_{jk}^n + G_{in}^l E_{jk}^n
//                 - E_{jn}^l G_{ik}^n - G_{jn}^l E_{ik}^n.
CurvatureField star_product(const ChristoffelField& a, const ChristoffelField& b);

// R = L(Gamma) + (Gamma * Gamma) / 2. Both curvature symmetries are asserted
// on the result.
CurvatureField curvature_of(const ChristoffelField& gamma);

// ricci(curvature_of(gamma)) contracted term by term, without materializing
// the rank-4 tensor. Same arithmetic, reordered; the verifier and tests use
// the materialized route so the two stay independent.
SquareMatrix<Jet> ricci_of_connection(const ChristoffelField& gamma);

// The linear seed Gamma_{uv}^l = (A_{wuv}^l + A_{wvu}^l) x^w / 3, whose
// curvature at the origin is exactly the prescribed operator.
ChristoffelField initial_christoffel(const AlgebraicCurvatureOperator& op, int degree_cap);

// Theta_{ij} = rho_s(R)(E_i, E_j) - rho_s(A)_{ij} at the curvature-level cap.
RicciDefectField ricci_defect(const ChristoffelField& gamma,
                              const AlgebraicCurvatureOperator& op, const FrameField& frame);

// Trace-free correction E with rho(L(E)) = -Theta and valuation one above
// Theta's: E_{ij}^l is the axis antiderivative of -Theta_{ij} along the
// smallest coordinate axis not in {i, j}, placed in that upper slot only.
ChristoffelField solve_correction(const RicciDefectField& defect, int degree_cap);

// Right-hand side of the one-step defect recursion: given the previous
// defect, connection, and correction, what the next defect must equal:
//   -Theta(E_i, E_j) + Theta_{ij} + rho_s((Gamma + E/2) * E)(E_i, E_j).
RicciDefectField recursion_identity_rhs(const RicciDefectField& defect,
                                        const ChristoffelField& gamma,
                                        const ChristoffelField& correction,
                                        const FrameField& frame);

// Full iteration state, kept for recursion-identity audits.
struct IterationStep {
  int nu = 0;
  ChristoffelField gamma;       // Gamma_nu
  RicciDefectField defect;      // Theta_nu
  std::optional<ChristoffelField> correction;  // E_{nu+1}; absent once converged
};

// Serializable per-iteration digest.
struct IterationSummary {
  int nu = 0;
  int defect_valuation = 0;  // kValuationInfinity when the defect vanished
  int decay_order = 0;       // weight 2*nu used for the norm sample
  Rational defect_norm_sample;
  std::optional<int> correction_valuation;
  std::optional<Rational> correction_norm_sample;
  // Independent recomputation of the defect recursion; absent at nu = 1.
  std::optional<bool> recursion_identity_verified;
};

struct NormalizationSummary {
  bool value_normalized = true;
  bool input_was_first_order_flat = false;
  std::vector<Jet> coordinate_map;  // original coordinates in the new ones
  // The pointwise decay condition on infinite jets is contentless at a finite
  // cap; recorded so reports say so explicitly.
  std::string regularity_condition = "vacuous at finite order";
};

struct RealizationReport {
  int dim = 0;
  int order = 0;  // curvature-level cap N
  std::pair<int, int> signature;
  NormalizationSummary normalization;
  std::vector<IterationSummary> iterations;
  bool converged = false;
  int iterations_used = 0;
  std::vector<Verdict> verdicts;  // filled in by the verification pass
};

struct RealizationResult {
  ChristoffelField gamma;  // the realized connection, cap order + 1
  MetricField normalized_metric;
  FrameField frame;
  RealizationReport report;
  std::vector<IterationStep> trace;
};

// Runs the full construction at curvature order N >= 2: normalize the metric,
// build the orthonormal frame, seed with the linear connection, then correct
// until the defect is exactly zero. The defect valuation at least doubles each
// round, which forces termination within ceil((N + 1) / 2) rounds; exceeding
// that bound raises InternalError. The result's verdicts list is left empty.
RealizationResult realize(const AlgebraicCurvatureOperator& op, const MetricField& metric,
                          int order);

}  // namespace curvreal
