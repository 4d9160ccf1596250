#pragma once

#include <span>
#include <vector>

#include "curvreal/algebra.hpp"
#include "curvreal/metric.hpp"
#include "curvreal/realize.hpp"
#include "curvreal/verdict.hpp"

namespace curvreal {

// Helpers shared by the checks: exact equality of jets through a total
// degree, with the first offending coefficient reported on failure.
bool jets_equal_through_degree(const Jet& a, const Jet& b, int degree);

// The four conclusions verified on a realized connection. Each check works
// through degree N - 1 where N + 1 is the connection's cap, recomputes the
// curvature through the materialized tensor route, and reports the exact
// offending coefficient on failure.

// curvature_of(gamma) at the origin equals the prescribed operator entry for
// entry.
Verdict check_realization_at_origin(const ChristoffelField& gamma,
                                    const AlgebraicCurvatureOperator& op);

// The scalar curvature jet g^{jk} rho(R)_{jk} is the constant
// sum_i epsilon_i rho_s(A)_{ii} through the verified degree. Uses the
// jet-valued inverse metric, not the frame, as its second route.
Verdict check_constant_scalar_curvature(const ChristoffelField& gamma,
                                        const MetricField& normalized_metric,
                                        const AlgebraicCurvatureOperator& op);

// rho_a(R) equals the constant rho_a(A) componentwise through the verified
// degree.
Verdict check_ricci_antisymmetric_part(const ChristoffelField& gamma,
                                       const AlgebraicCurvatureOperator& op);

// rho_s(R)(E_i, E_j) equals the constant rho_s(A)_{ij} through the verified
// degree; also derives the connection-level symmetry sub-verdicts.
Verdict check_ricci_symmetric_part(const ChristoffelField& gamma,
                                   const AlgebraicCurvatureOperator& op,
                                   const FrameField& frame);

std::vector<Verdict> run_all_checks(const ChristoffelField& gamma,
                                    const AlgebraicCurvatureOperator& op,
                                    const MetricField& normalized_metric,
                                    const FrameField& frame);

// Independent numerical cross-check at a point: central finite differences of
// the connection's derivative part against the jet-computed curvature. The
// returned discrepancy is the largest absolute entry difference, an exact
// rational; halving the step must shrink it by about four.
struct FiniteDifferenceProbe {
  Tensor4<Rational> approximate_curvature;
  Rational discrepancy;
};
FiniteDifferenceProbe finite_difference_oracle(const ChristoffelField& gamma,
                                               std::span<const Rational> point,
                                               const Rational& step);

// Deterministic sample grid in the box of radius 1/2: +-axis points and the
// +-all-ones diagonals at radii 1/8, 1/4, 3/8.
std::vector<std::vector<Rational>> norm_sample_grid(int dim);

// max over grid points and components of |P(x)| r^{-decay_order}, where r is
// the l-infinity radius of the point. A rational stand-in for the weighted
// sup norms; diagnostic only.
Rational weighted_norm_sample(std::span<const Jet> components, int decay_order);

}  // namespace curvreal
