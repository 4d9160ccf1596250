#include "curvreal/verify.hpp"

#include <optional>
#include <string>

#include "curvreal/errors.hpp"

namespace curvreal {

namespace {

void check_degree_reachable(const Jet& a, const Jet& b, int degree) {
  if (a.dim() != b.dim()) throw ShapeError("jet dimension mismatch in degree comparison");
  if (a.degree_cap() < degree || b.degree_cap() < degree) {
    throw ShapeError("degree " + std::to_string(degree) + " exceeds a jet cap in comparison");
  }
}

// First coefficient where got and expected disagree at or below the degree,
// in graded-lex order; nullopt when they agree.
std::optional<CoefficientWitness> first_difference(const Jet& got, const Jet& expected,
                                                   int through_degree,
                                                   std::vector<int> component_1based) {
  check_degree_reachable(got, expected, through_degree);
  const Jet diff = got.truncated(through_degree) - expected.truncated(through_degree);
  if (diff.is_zero()) return std::nullopt;
  const Monomial leading = diff.terms().front().monomial;
  const std::vector<int> exps = leading.exponents(got.dim());
  CoefficientWitness witness;
  witness.component = std::move(component_1based);
  witness.exponents = exps;
  witness.expected = to_string(expected.truncated(through_degree).coefficient(exps));
  witness.got = to_string(got.truncated(through_degree).coefficient(exps));
  return witness;
}

std::vector<int> one_based(std::initializer_list<int> zero_based) {
  std::vector<int> out;
  out.reserve(zero_based.size());
  for (int v : zero_based) out.push_back(v + 1);
  return out;
}

}  // namespace

bool jets_equal_through_degree(const Jet& a, const Jet& b, int degree) {
  check_degree_reachable(a, b, degree);
  return a.truncated(degree) == b.truncated(degree);
}

Verdict check_realization_at_origin(const ChristoffelField& gamma,
                                    const AlgebraicCurvatureOperator& op) {
  if (gamma.dim() != op.dim()) throw ShapeError("connection and operator dimension mismatch");
  const int m = gamma.dim();
  Verdict verdict;
  verdict.name = "curvature_at_origin_matches_operator";
  verdict.verified_degree = 0;
  verdict.pass = true;
  const CurvatureField curvature = curvature_of(gamma);
  for (int i = 0; i < m && verdict.pass; ++i)
    for (int j = 0; j < m && verdict.pass; ++j)
      for (int k = 0; k < m && verdict.pass; ++k)
        for (int l = 0; l < m; ++l) {
          const Rational got = curvature(i, j, k, l).constant_term();
          if (got == op(i, j, k, l)) continue;
          verdict.pass = false;
          CoefficientWitness witness;
          witness.component = one_based({i, j, k, l});
          witness.exponents = std::vector<int>(static_cast<std::size_t>(m), 0);
          witness.expected = to_string(op(i, j, k, l));
          witness.got = to_string(got);
          verdict.witness = std::move(witness);
          break;
        }
  return verdict;
}

Verdict check_constant_scalar_curvature(const ChristoffelField& gamma,
                                        const MetricField& normalized_metric,
                                        const AlgebraicCurvatureOperator& op) {
  const int m = gamma.dim();
  if (normalized_metric.dim() != m || op.dim() != m) {
    throw ShapeError("scalar curvature check operands disagree in dimension");
  }
  const int rcap = gamma.degree_cap() - 1;
  const int through = rcap - 1;

  Verdict verdict;
  verdict.name = "constant_scalar_curvature";
  verdict.verified_degree = through;

  // Route one: the scalar curvature jet of the realized connection, through
  // the jet-valued inverse metric.
  const SquareMatrix<Jet> rho = ricci(curvature_of(gamma));
  const MetricField metric_cut = normalized_metric.degree_cap() == rcap
                                     ? normalized_metric
                                     : normalized_metric.truncated(rcap);
  const SquareMatrix<Jet> ginv = inverse_metric_jets(metric_cut);
  Jet tau(m, rcap);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) tau += ginv(j, k) * rho(j, k);

  // Route two: the closed-form constant from the prescribed operator.
  const InnerProduct origin_product =
      InnerProduct::checked(normalized_metric.value_at_origin());
  const Rational expected = scalar_curvature(op, origin_product);

  const Jet expected_jet = Jet::constant(m, rcap, expected);
  verdict.pass = jets_equal_through_degree(tau, expected_jet, through);
  if (!verdict.pass) {
    verdict.witness = first_difference(tau, expected_jet, through, {});
  }
  verdict.notes["constant"] = to_string(expected);
  verdict.notes["connection_scalar_curvature_vanishes"] =
      (verdict.pass && is_zero(expected)) ? "true" : "false";
  return verdict;
}

Verdict check_ricci_antisymmetric_part(const ChristoffelField& gamma,
                                       const AlgebraicCurvatureOperator& op) {
  const int m = gamma.dim();
  if (op.dim() != m) throw ShapeError("connection and operator dimension mismatch");
  const int rcap = gamma.degree_cap() - 1;
  const int through = rcap - 1;

  Verdict verdict;
  verdict.name = "ricci_antisymmetric_part_constant";
  verdict.verified_degree = through;
  verdict.pass = true;

  const SquareMatrix<Jet> rho_a = antisymmetric_part(ricci(curvature_of(gamma)));
  const BilinearForm target = antisymmetric_part(ricci(op));
  bool connection_symmetric = true;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Jet target_jet = Jet::constant(m, rcap, target(i, j));
      if (!jets_equal_through_degree(rho_a(i, j), target_jet, through)) {
        if (verdict.pass) {
          verdict.pass = false;
          verdict.witness = first_difference(rho_a(i, j), target_jet, through,
                                             one_based({i, j}));
        }
      }
      if (!jets_equal_through_degree(rho_a(i, j), Jet(m, rcap), through)) {
        connection_symmetric = false;
      }
    }
  verdict.notes["connection_ricci_symmetric"] = connection_symmetric ? "true" : "false";
  return verdict;
}

Verdict check_ricci_symmetric_part(const ChristoffelField& gamma,
                                   const AlgebraicCurvatureOperator& op,
                                   const FrameField& frame) {
  const int m = gamma.dim();
  if (op.dim() != m || frame.dim() != m) {
    throw ShapeError("symmetric Ricci check operands disagree in dimension");
  }
  const int rcap = gamma.degree_cap() - 1;
  const int through = rcap - 1;

  Verdict verdict;
  verdict.name = "ricci_symmetric_part_constant_in_frame";
  verdict.verified_degree = through;
  verdict.pass = true;

  const SquareMatrix<Jet> rho_s = symmetric_part(ricci(curvature_of(gamma)));
  const SquareMatrix<Jet> in_frame = frame_contract(rho_s, frame);
  const BilinearForm target = symmetric_part(ricci(op));
  bool connection_antisymmetric = true;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Jet target_jet = Jet::constant(m, rcap, target(i, j));
      if (!jets_equal_through_degree(in_frame(i, j), target_jet, through)) {
        if (verdict.pass) {
          verdict.pass = false;
          verdict.witness = first_difference(in_frame(i, j), target_jet, through,
                                             one_based({i, j}));
        }
      }
      if (!jets_equal_through_degree(in_frame(i, j), Jet(m, rcap), through)) {
        connection_antisymmetric = false;
      }
    }
  verdict.notes["connection_ricci_antisymmetric"] = connection_antisymmetric ? "true" : "false";
  return verdict;
}

std::vector<Verdict> run_all_checks(const ChristoffelField& gamma,
                                    const AlgebraicCurvatureOperator& op,
                                    const MetricField& normalized_metric,
                                    const FrameField& frame) {
  std::vector<Verdict> verdicts;
  verdicts.push_back(check_realization_at_origin(gamma, op));
  verdicts.push_back(check_constant_scalar_curvature(gamma, normalized_metric, op));
  verdicts.push_back(check_ricci_antisymmetric_part(gamma, op));
  verdicts.push_back(check_ricci_symmetric_part(gamma, op, frame));
  return verdicts;
}

FiniteDifferenceProbe finite_difference_oracle(const ChristoffelField& gamma,
                                               std::span<const Rational> point,
                                               const Rational& step) {
  const int m = gamma.dim();
  if (point.size() != static_cast<std::size_t>(m)) {
    throw ShapeError("probe point length does not match dimension");
  }
  if (!(sgn(step) > 0)) throw DomainError("finite difference step must be positive");

  // Connection values at x +- h e_a, reused across all difference quotients.
  std::vector<std::vector<Rational>> plus(static_cast<std::size_t>(m));
  std::vector<std::vector<Rational>> minus(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    std::vector<Rational> shifted(point.begin(), point.end());
    shifted[static_cast<std::size_t>(a)] += step;
    std::vector<Rational> shifted_back(point.begin(), point.end());
    shifted_back[static_cast<std::size_t>(a)] -= step;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          plus[static_cast<std::size_t>(a)].push_back(evaluate(gamma(i, j, k), shifted));
          minus[static_cast<std::size_t>(a)].push_back(evaluate(gamma(i, j, k), shifted_back));
        }
  }
  auto shifted_value = [m](const std::vector<Rational>& values, int i, int j, int k) {
    return values[(static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
                   static_cast<std::size_t>(j)) * static_cast<std::size_t>(m) +
                  static_cast<std::size_t>(k)];
  };

  const CurvatureField exact = curvature_of(gamma);
  const CurvatureField quadratic = star_product(gamma, gamma);
  const Rational half(1, 2);
  const Rational inv_2h = 1 / (2 * step);

  Tensor4<Rational> approx(m, Rational(0));
  Rational worst(0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          // Central differences replace only the derivative part; the
          // quadratic part is evaluated exactly at the base point.
          Rational d1 = (shifted_value(plus[static_cast<std::size_t>(i)], j, k, l) -
                         shifted_value(minus[static_cast<std::size_t>(i)], j, k, l)) * inv_2h;
          Rational d2 = (shifted_value(plus[static_cast<std::size_t>(j)], i, k, l) -
                         shifted_value(minus[static_cast<std::size_t>(j)], i, k, l)) * inv_2h;
          Rational value = d1 - d2 + half * evaluate(quadratic(i, j, k, l), point);
          Rational gap = value - evaluate(exact(i, j, k, l), point);
          gap = abs(gap);
          if (gap > worst) worst = gap;
          approx(i, j, k, l) = std::move(value);
        }
  return {std::move(approx), std::move(worst)};
}

std::vector<std::vector<Rational>> norm_sample_grid(int dim) {
  if (dim < 1) throw ShapeError("sample grid needs dimension >= 1");
  const Rational radii[] = {Rational(1, 8), Rational(1, 4), Rational(3, 8)};
  std::vector<std::vector<Rational>> grid;
  for (const Rational& r : radii) {
    for (int axis = 0; axis < dim; ++axis) {
      for (int sign : {1, -1}) {
        std::vector<Rational> point(static_cast<std::size_t>(dim), Rational(0));
        point[static_cast<std::size_t>(axis)] = sign * r;
        grid.push_back(std::move(point));
      }
    }
    for (int sign : {1, -1}) {
      std::vector<Rational> point(static_cast<std::size_t>(dim), sign * r);
      grid.push_back(std::move(point));
    }
  }
  return grid;
}

Rational weighted_norm_sample(std::span<const Jet> components, int decay_order) {
  if (components.empty()) return Rational(0);
  const int dim = components[0].dim();
  for (const Jet& jet : components) {
    if (jet.dim() != dim) throw ShapeError("norm sample components disagree in dimension");
  }
  if (decay_order < 0) throw DomainError("decay order must be nonnegative");
  Rational best(0);
  for (const std::vector<Rational>& point : norm_sample_grid(dim)) {
    Rational radius(0);
    for (const Rational& coord : point) {
      Rational a = abs(coord);
      if (a > radius) radius = a;
    }
    // Weight r^{-decay_order}, exact because r is rational by construction.
    Rational weight(1);
    const Rational inv_r = 1 / radius;
    for (int e = 0; e < decay_order; ++e) weight *= inv_r;
    for (const Jet& jet : components) {
      Rational value = abs(evaluate(jet, point)) * weight;
      if (value > best) best = value;
    }
  }
  return best;
}

}  // namespace curvreal
