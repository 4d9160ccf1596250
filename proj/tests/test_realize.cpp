#include <doctest.h>

#include <algorithm>
#include <utility>
#include <vector>

#include "curvreal/algebra.hpp"
#include "curvreal/errors.hpp"
#include "curvreal/jet.hpp"
#include "curvreal/metric.hpp"
#include "curvreal/realize.hpp"
#include "curvreal/tensor.hpp"
#include "curvreal/verify.hpp"
#include "helpers.hpp"

using curvreal::AlgebraicCurvatureOperator;
using curvreal::ChristoffelField;
using curvreal::FrameField;
using curvreal::Jet;
using curvreal::MetricField;
using curvreal::Rational;
using curvreal::RicciDefectField;
using curvreal::SquareMatrix;
using curvreal::Tensor4;

namespace {

// The worked m = 3 example used throughout: A_{121}^2 = 1, A_{211}^2 = -1.
AlgebraicCurvatureOperator pair_operator() {
  Tensor4<Rational> t(3, Rational(0));
  t(0, 1, 0, 1) = Rational(1);
  t(1, 0, 0, 1) = Rational(-1);
  return AlgebraicCurvatureOperator::checked(std::move(t));
}

SquareMatrix<Jet> ricci_symmetric_linear(const ChristoffelField& e) {
  return curvreal::symmetric_part(curvreal::ricci(curvreal::curvature_linear_part(e)));
}

}  // namespace

TEST_SUITE_BEGIN("realize");

TEST_CASE("christoffel container enforces the torsion-free symmetry") {
  ChristoffelField gamma(3, 4);
  gamma.set_symmetric_pair(0, 1, 2, Jet::variable(3, 4, 0));
  CHECK(gamma(0, 1, 2) == gamma(1, 0, 2));
  CHECK(gamma.vanishes_at_origin());

  // checked() wants dim^3 entries with the pair symmetry.
  std::vector<Jet> bad(27, Jet(3, 4));
  bad[0 * 9 + 1 * 3 + 2] = Jet::variable(3, 4, 0);  // (0,1)^2 without its mirror
  CHECK_THROWS_AS(ChristoffelField::checked(3, 4, bad), curvreal::ValidationError);
  CHECK_THROWS_AS(ChristoffelField::checked(3, 4, std::vector<Jet>(9, Jet(3, 4))),
                  curvreal::ShapeError);
}

TEST_CASE("initial connection fixture has the two linear coefficients") {
  const ChristoffelField gamma = curvreal::initial_christoffel(pair_operator(), 5);
  const Jet x1 = Jet::variable(3, 5, 0);
  const Jet x2 = Jet::variable(3, 5, 1);
  CHECK(gamma(0, 0, 1) == Rational(-2, 3) * x2);
  CHECK(gamma(0, 1, 1) == Rational(1, 3) * x1);
  CHECK(gamma(1, 0, 1) == Rational(1, 3) * x1);
  int nonzero = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int l = 0; l < 3; ++l) {
        if (!gamma(i, j, l).is_zero()) ++nonzero;
      }
    }
  }
  CHECK(nonzero == 3);
}

TEST_CASE("linear curvature of the initial connection is the operator itself") {
  testutil::Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = rng.int_in(3, 4);
    const AlgebraicCurvatureOperator a =
        curvreal::random_curvature_operator(7000 + trial, dim, 4);
    const ChristoffelField gamma = curvreal::initial_christoffel(a, 3);
    const curvreal::CurvatureField linear = curvreal::curvature_linear_part(gamma);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
          for (int l = 0; l < dim; ++l) {
            CHECK(linear(i, j, k, l) == Jet::constant(dim, 2, a(i, j, k, l)));
          }
        }
      }
    }
    CHECK(gamma.vanishes_at_origin());
  }
}

TEST_CASE("full curvature of the initial connection deviates at valuation >= 2") {
  testutil::Rng rng(67);
  for (int trial = 0; trial < 6; ++trial) {
    const AlgebraicCurvatureOperator a =
        curvreal::random_curvature_operator(7100 + trial, 3, 4);
    const ChristoffelField gamma = curvreal::initial_christoffel(a, 4);
    const curvreal::CurvatureField r = curvreal::curvature_of(gamma);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          for (int l = 0; l < 3; ++l) {
            CHECK(r(i, j, k, l).constant_term() == a(i, j, k, l));
            const Jet deviation = r(i, j, k, l) - Jet::constant(3, 3, a(i, j, k, l));
            CHECK(valuation(deviation) >= 2);
          }
        }
      }
    }
  }
}

TEST_CASE("star product is symmetric and matches the half rule in curvature_of") {
  testutil::Rng rng(71);
  const ChristoffelField a = testutil::random_christoffel(rng, 3, 4, 2);
  const ChristoffelField b = testutil::random_christoffel(rng, 3, 4, 2);
  const curvreal::CurvatureField ab = curvreal::star_product(a, b);
  const curvreal::CurvatureField ba = curvreal::star_product(b, a);
  CHECK(ab == ba);

  const curvreal::CurvatureField full = curvreal::curvature_of(a);
  const curvreal::CurvatureField linear = curvreal::curvature_linear_part(a);
  const curvreal::CurvatureField quad = curvreal::star_product(a, a);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          CHECK(full(i, j, k, l) ==
                linear(i, j, k, l) + Rational(1, 2) * quad(i, j, k, l));
        }
      }
    }
  }
}

TEST_CASE("contracted Ricci of a connection agrees with the materialized route") {
  testutil::Rng rng(73);
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = rng.int_in(3, 4);
    const ChristoffelField gamma = testutil::random_christoffel(rng, dim, 4, 2);
    const SquareMatrix<Jet> fast = curvreal::ricci_of_connection(gamma);
    const SquareMatrix<Jet> slow = curvreal::ricci(curvreal::curvature_of(gamma));
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) CHECK(fast(j, k) == slow(j, k));
    }
  }
}

TEST_CASE("Ricci of the star square matches its closed form") {
  testutil::Rng rng(79);
  for (int trial = 0; trial < 5; ++trial) {
    const ChristoffelField gamma = testutil::random_christoffel(rng, 3, 4, 2);
    const SquareMatrix<Jet> via_star = curvreal::ricci(curvreal::star_product(gamma, gamma));
    const int rcap = 3;
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        // 2 Gamma_{ln}^l Gamma_{jk}^n - 2 Gamma_{jn}^l Gamma_{lk}^n, truncated.
        Jet closed(3, rcap);
        for (int n = 0; n < 3; ++n) {
          closed += Rational(2) * (gamma.lower_trace(n).truncated(rcap) *
                                   gamma(j, k, n).truncated(rcap));
          for (int l = 0; l < 3; ++l) {
            closed -= Rational(2) *
                      (gamma(j, n, l).truncated(rcap) * gamma(l, k, n).truncated(rcap));
          }
        }
        CHECK(via_star(j, k) == closed);
        CHECK(via_star(j, k) == via_star(k, j));
      }
    }
  }
}

TEST_CASE("antisymmetric Ricci part reduces to the trace differential") {
  testutil::Rng rng(83);
  for (int trial = 0; trial < 5; ++trial) {
    const ChristoffelField gamma = testutil::random_christoffel(rng, 3, 4, 2);
    const SquareMatrix<Jet> rho =
        curvreal::antisymmetric_part(curvreal::ricci(curvreal::curvature_of(gamma)));
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        const Jet tk = gamma.lower_trace(k).truncated(3);
        const Jet tj = gamma.lower_trace(j).truncated(3);
        const Jet expected =
            Rational(1, 2) * (partial_derivative(tj, k) - partial_derivative(tk, j));
        CHECK(rho(j, k) == expected);
      }
    }
  }
}

TEST_CASE("first defect of the fixture is -x1^2/9 in the (1,1) slot") {
  const ChristoffelField gamma = curvreal::initial_christoffel(pair_operator(), 5);
  const FrameField frame = FrameField::identity(3, 5);
  const RicciDefectField theta = curvreal::ricci_defect(gamma, pair_operator(), frame);
  const Jet x1 = Jet::variable(3, 4, 0);
  CHECK(theta(0, 0) == Rational(-1, 9) * (x1 * x1));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == 0 && j == 0) continue;
      CHECK(theta(i, j).is_zero());
    }
  }
  CHECK(theta.valuation() == 2);
}

TEST_CASE("correction solver fixture integrates along the free axis") {
  const ChristoffelField gamma = curvreal::initial_christoffel(pair_operator(), 5);
  const FrameField frame = FrameField::identity(3, 5);
  const RicciDefectField theta = curvreal::ricci_defect(gamma, pair_operator(), frame);
  const ChristoffelField e = curvreal::solve_correction(theta, 5);
  const Jet x1 = Jet::variable(3, 5, 0);
  const Jet x2 = Jet::variable(3, 5, 1);
  CHECK(e(0, 0, 1) == Rational(1, 9) * (x1 * x1 * x2));
  int nonzero = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int l = 0; l < 3; ++l) {
        if (!e(i, j, l).is_zero()) ++nonzero;
      }
    }
  }
  CHECK(nonzero == 1);
}

TEST_CASE("correction solver properties on random defects") {
  testutil::Rng rng(89);
  for (int trial = 0; trial < 8; ++trial) {
    const int dim = rng.int_in(3, 4);
    const SquareMatrix<Jet> raw = testutil::random_symmetric_jet_matrix(rng, dim, 5, 1, 4);
    const RicciDefectField theta = RicciDefectField::from_components(raw);
    if (theta.is_zero()) continue;
    const ChristoffelField e = curvreal::solve_correction(theta, 6);

    // Trace-free, torsion-free by construction, and valuation one above.
    for (int j = 0; j < dim; ++j) CHECK(e.lower_trace(j).is_zero());
    int e_valuation = curvreal::kValuationInfinity;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        for (int l = 0; l < dim; ++l) {
          e_valuation = std::min(e_valuation, valuation(e(i, j, l)));
        }
      }
    }
    CHECK(e_valuation == theta.valuation() + 1);

    // rho_s(L(E)) = -Theta exactly (here rho of L(E) is already symmetric).
    const SquareMatrix<Jet> rho = ricci_symmetric_linear(e);
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        CHECK(rho(j, k) == -(theta(j, k).truncated(5)));
      }
    }
  }
}

TEST_CASE("solver rejects undersized caps and tiny dimensions") {
  SquareMatrix<Jet> raw(3, Jet(3, 5));
  raw(0, 0) = Jet::variable(3, 5, 0);
  const RicciDefectField theta = RicciDefectField::from_components(std::move(raw));
  CHECK_THROWS_AS(curvreal::solve_correction(theta, 4), curvreal::ShapeError);

  // Dimension 2 leaves no free axis to integrate along.
  SquareMatrix<Jet> raw2(2, Jet(2, 5));
  raw2(0, 1) = Jet::variable(2, 5, 0);
  raw2(1, 0) = raw2(0, 1);
  const RicciDefectField theta2 = RicciDefectField::from_components(std::move(raw2));
  CHECK_THROWS_AS(curvreal::solve_correction(theta2, 5), curvreal::DomainError);
}

TEST_CASE("end-to-end realization of the fixture converges with closed-form output") {
  const MetricField flat = MetricField::constant_diagonal(0, 3, 5);
  const curvreal::RealizationResult result = curvreal::realize(pair_operator(), flat, 4);

  CHECK(result.report.converged);
  CHECK(result.report.iterations_used == 2);
  REQUIRE(result.report.iterations.size() == 2);
  CHECK(result.report.iterations[0].defect_valuation == 2);
  CHECK(result.report.iterations[0].correction_valuation == 3);
  CHECK(result.report.iterations[1].defect_valuation == curvreal::kValuationInfinity);
  CHECK(result.report.iterations[1].recursion_identity_verified == true);

  // Gamma = Gamma_1 + E_2 exactly, nothing else ever fires.
  ChristoffelField expected = curvreal::initial_christoffel(pair_operator(), 5);
  const Jet x1 = Jet::variable(3, 5, 0);
  const Jet x2 = Jet::variable(3, 5, 1);
  expected.set_symmetric_pair(0, 0, 1,
                              expected(0, 0, 1) + Rational(1, 9) * (x1 * x1 * x2));
  CHECK(result.gamma == expected);

  // The verification pass accepts it.
  const auto verdicts = curvreal::run_all_checks(result.gamma, pair_operator(),
                                                 result.normalized_metric, result.frame);
  for (const auto& verdict : verdicts) CHECK(verdict.pass);
}

TEST_CASE("the zero operator realizes as the zero connection") {
  const AlgebraicCurvatureOperator zero =
      AlgebraicCurvatureOperator::checked(Tensor4<Rational>(3, Rational(0)));
  const MetricField flat = MetricField::constant_diagonal(0, 3, 5);
  const curvreal::RealizationResult result = curvreal::realize(zero, flat, 4);

  CHECK(result.report.converged);
  CHECK(result.report.iterations_used == 1);
  CHECK(result.gamma == ChristoffelField(3, 5));
  const auto verdicts =
      curvreal::run_all_checks(result.gamma, zero, result.normalized_metric, result.frame);
  for (const auto& verdict : verdicts) CHECK(verdict.pass);
}

TEST_CASE("realization records doubling valuations on random inputs") {
  for (int trial = 0; trial < 3; ++trial) {
    const AlgebraicCurvatureOperator a =
        curvreal::random_curvature_operator(9000 + trial, 3, 3);
    const MetricField flat = MetricField::constant_diagonal(1, 2, 5);
    const curvreal::RealizationResult result = curvreal::realize(a, flat, 4);
    CHECK(result.report.converged);
    CHECK(result.report.iterations_used <= 3);
    for (const auto& step : result.report.iterations) {
      CHECK(step.defect_valuation >= 2 * step.nu);
      if (step.nu >= 2) CHECK(step.recursion_identity_verified == true);
    }
  }
}

TEST_CASE("realization rejects bad inputs up front") {
  const AlgebraicCurvatureOperator a = pair_operator();
  CHECK_THROWS_AS(curvreal::realize(a, MetricField::constant_diagonal(0, 3, 5), 1),
                  curvreal::DomainError);
  CHECK_THROWS_AS(curvreal::realize(a, MetricField::constant_diagonal(0, 4, 5), 4),
                  curvreal::ShapeError);

  SquareMatrix<Jet> entries(3, Jet(3, 5));
  for (int i = 0; i < 3; ++i) entries(i, i) = Jet::constant(3, 5, Rational(1));
  entries(0, 0) = Jet::constant(3, 5, Rational(9));
  const MetricField stretched = MetricField::checked(0, 3, std::move(entries));
  CHECK_THROWS_AS(curvreal::realize(a, stretched, 4), curvreal::DomainError);
}

TEST_SUITE_END();
