#include "curvreal/realize.hpp"

#include <string>

#include "curvreal/errors.hpp"
#include "curvreal/verify.hpp"

namespace curvreal {

namespace {

void check_connection_shape(int dim, int cap) {
  if (dim < 1 || cap < 1) {
    throw DomainError("connection fields need dimension >= 1 and degree cap >= 1");
  }
}

int saturating_add(int valuation, int delta) {
  return valuation == kValuationInfinity ? kValuationInfinity : valuation + delta;
}

}  // namespace

ChristoffelField::ChristoffelField(int dim, int degree_cap)
    : dim_(dim),
      cap_(degree_cap),
      components_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim) *
                      static_cast<std::size_t>(dim),
                  Jet(dim, degree_cap)) {
  check_connection_shape(dim, degree_cap);
}

ChristoffelField ChristoffelField::checked(int dim, int degree_cap, std::vector<Jet> components) {
  check_connection_shape(dim, degree_cap);
  ChristoffelField out(dim, degree_cap);
  if (components.size() != out.components_.size()) {
    throw ShapeError("connection needs dim^3 = " + std::to_string(out.components_.size()) +
                     " components, got " + std::to_string(components.size()));
  }
  for (const Jet& jet : components) {
    if (jet.dim() != dim || jet.degree_cap() != degree_cap) {
      throw ShapeError("connection component jet shape mismatch");
    }
  }
  out.components_ = std::move(components);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        if (!(out(i, j, k) == out(j, i, k))) {
          throw ValidationError("connection is not symmetric in its lower index pair at (" +
                                std::to_string(i + 1) + ", " + std::to_string(j + 1) + ") -> " +
                                std::to_string(k + 1));
        }
      }
  return out;
}

std::size_t ChristoffelField::index(int i, int j, int k) const {
  if (i < 0 || i >= dim_ || j < 0 || j >= dim_ || k < 0 || k >= dim_) {
    throw ShapeError("connection index out of range");
  }
  return (static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
          static_cast<std::size_t>(j)) * static_cast<std::size_t>(dim_) +
         static_cast<std::size_t>(k);
}

void ChristoffelField::set_symmetric_pair(int i, int j, int k, Jet value) {
  if (value.dim() != dim_ || value.degree_cap() != cap_) {
    throw ShapeError("connection component jet shape mismatch");
  }
  components_[index(j, i, k)] = value;
  components_[index(i, j, k)] = std::move(value);
}

Jet ChristoffelField::lower_trace(int j) const {
  Jet acc(dim_, cap_);
  for (int i = 0; i < dim_; ++i) acc += (*this)(j, i, i);
  return acc;
}

bool ChristoffelField::vanishes_at_origin() const {
  for (const Jet& jet : components_) {
    if (!is_zero(jet.constant_term())) return false;
  }
  return true;
}

ChristoffelField& ChristoffelField::operator+=(const ChristoffelField& rhs) {
  if (dim_ != rhs.dim_ || cap_ != rhs.cap_) {
    throw ShapeError("connection shape mismatch in addition");
  }
  for (std::size_t n = 0; n < components_.size(); ++n) components_[n] += rhs.components_[n];
  return *this;
}

ChristoffelField operator+(const ChristoffelField& a, const ChristoffelField& b) {
  ChristoffelField out = a;
  out += b;
  return out;
}

ChristoffelField operator*(const ChristoffelField& a, const Rational& s) {
  ChristoffelField out = a;
  for (Jet& jet : out.components_) jet *= s;
  return out;
}

RicciDefectField::RicciDefectField(int dim, int degree_cap)
    : components_(dim, Jet(dim, degree_cap)) {
  if (dim < 1) throw DomainError("defect field needs dimension >= 1");
}

RicciDefectField RicciDefectField::from_components(SquareMatrix<Jet> components) {
  if (components.dim() < 1) throw DomainError("defect field needs dimension >= 1");
  if (!is_symmetric(components)) {
    throw DomainError("defect field components are not symmetric");
  }
  return RicciDefectField(std::move(components));
}

bool RicciDefectField::is_zero() const {
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j)
      if (!components_(i, j).is_zero()) return false;
  return true;
}

int RicciDefectField::valuation() const {
  int best = kValuationInfinity;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) {
      const int v = curvreal::valuation(components_(i, j));
      if (v < best) best = v;
    }
  return best;
}

CurvatureField curvature_linear_part(const ChristoffelField& gamma) {
  const int m = gamma.dim();
  const int rcap = gamma.degree_cap() - 1;  // curvature-level cap
  CurvatureField out(m, Jet(m, rcap));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          Jet value = partial_derivative(gamma(j, k, l), i) -
                      partial_derivative(gamma(i, k, l), j);
          out(i, j, k, l) = value.truncated(rcap);
          out(j, i, k, l) = (-value).truncated(rcap);
        }
  if (!has_curvature_symmetries(out)) {
    throw InternalError("derivative part of the curvature lost its symmetries");
  }
  return out;
}

CurvatureField star_product(const ChristoffelField& a, const ChristoffelField& b) {
  if (a.dim() != b.dim() || a.degree_cap() != b.degree_cap()) {
    throw ShapeError("star product operands must share dimension and cap");
  }
  const int m = a.dim();
  const int rcap = a.degree_cap() - 1;
  // Terms of degree rcap + 1 in a factor cannot reach a product term of
  // degree <= rcap, so truncating the factors first is exact.
  auto truncate_all = [&](const ChristoffelField& f) {
    std::vector<Jet> cut;
    cut.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m) *
                static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) cut.push_back(f(i, j, k).truncated(rcap));
    return cut;
  };
  const std::vector<Jet> ca = truncate_all(a);
  const std::vector<Jet> cb = truncate_all(b);
  auto at = [m](const std::vector<Jet>& v, int i, int j, int k) -> const Jet& {
    return v[(static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
              static_cast<std::size_t>(j)) * static_cast<std::size_t>(m) +
             static_cast<std::size_t>(k)];
  };

  CurvatureField out(m, Jet(m, rcap));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          Jet acc(m, rcap);
          for (int n = 0; n < m; ++n) {
            acc += at(cb, i, n, l) * at(ca, j, k, n);
            acc += at(ca, i, n, l) * at(cb, j, k, n);
            acc -= at(cb, j, n, l) * at(ca, i, k, n);
            acc -= at(ca, j, n, l) * at(cb, i, k, n);
          }
          out(j, i, k, l) = -acc;
          out(i, j, k, l) = std::move(acc);
        }
  if (!has_curvature_symmetries(out)) {
    throw InternalError("star product lost the curvature symmetries");
  }
  return out;
}

CurvatureField curvature_of(const ChristoffelField& gamma) {
  CurvatureField linear = curvature_linear_part(gamma);
  CurvatureField quadratic = star_product(gamma, gamma);
  CurvatureField out = linear + quadratic * Rational(1, 2);
  if (!has_curvature_symmetries(out)) {
    throw InternalError("curvature tensor lost its symmetries");
  }
  return out;
}

namespace {

// ricci(star_product(a, b)) contracted directly:
//   rho(a*b)_{jk} = sum_n [Tb_n a_{jk}^n + Ta_n b_{jk}^n]
//                 - sum_{i,n} [b_{jn}^i a_{ik}^n + a_{jn}^i b_{ik}^n]
// with Ta_n = a_{ni}^i. Same arithmetic as the materialized route, reordered
// to skip the components the trace never touches.
SquareMatrix<Jet> ricci_of_star(const ChristoffelField& a, const ChristoffelField& b) {
  if (a.dim() != b.dim() || a.degree_cap() != b.degree_cap()) {
    throw ShapeError("star contraction operands must share dimension and cap");
  }
  const int m = a.dim();
  const int rcap = a.degree_cap() - 1;
  std::vector<Jet> trace_a;
  std::vector<Jet> trace_b;
  for (int n = 0; n < m; ++n) {
    trace_a.push_back(a.lower_trace(n).truncated(rcap));
    trace_b.push_back(b.lower_trace(n).truncated(rcap));
  }
  SquareMatrix<Jet> out(m, Jet(m, rcap));
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      Jet acc(m, rcap);
      for (int n = 0; n < m; ++n) {
        acc += trace_b[static_cast<std::size_t>(n)] * a(j, k, n).truncated(rcap);
        acc += trace_a[static_cast<std::size_t>(n)] * b(j, k, n).truncated(rcap);
        for (int i = 0; i < m; ++i) {
          acc -= b(j, n, i).truncated(rcap) * a(i, k, n).truncated(rcap);
          acc -= a(j, n, i).truncated(rcap) * b(i, k, n).truncated(rcap);
        }
      }
      out(j, k) = std::move(acc);
    }
  return out;
}

}  // namespace

SquareMatrix<Jet> ricci_of_connection(const ChristoffelField& gamma) {
  const int m = gamma.dim();
  const int rcap = gamma.degree_cap() - 1;
  // rho(L(gamma))_{ab} = sum_i d_i gamma_{ab}^i - d_a T_b.
  SquareMatrix<Jet> out(m, Jet(m, rcap));
  std::vector<Jet> traces;
  for (int b = 0; b < m; ++b) traces.push_back(gamma.lower_trace(b));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Jet acc = zero_like(gamma(a, b, 0));
      for (int i = 0; i < m; ++i) acc += partial_derivative(gamma(a, b, i), i);
      acc -= partial_derivative(traces[static_cast<std::size_t>(b)], a);
      out(a, b) = acc.truncated(rcap);
    }
  const SquareMatrix<Jet> quad = ricci_of_star(gamma, gamma);
  return out + quad * Rational(1, 2);
}

ChristoffelField initial_christoffel(const AlgebraicCurvatureOperator& op, int degree_cap) {
  if (degree_cap < 1) {
    throw DomainError("the initial connection is linear; it needs degree cap >= 1");
  }
  const int m = op.dim();
  ChristoffelField gamma(m, degree_cap);
  const Rational third(1, 3);
  for (int u = 0; u < m; ++u)
    for (int v = u; v < m; ++v)
      for (int l = 0; l < m; ++l) {
        std::vector<Jet::Term> terms;
        for (int w = 0; w < m; ++w) {
          Rational coeff = (op(w, u, v, l) + op(w, v, u, l)) * third;
          if (is_zero(coeff)) continue;
          terms.push_back({Monomial::unit(w), std::move(coeff)});
        }
        gamma.set_symmetric_pair(u, v, l, Jet::from_terms(m, degree_cap, std::move(terms)));
      }
  return gamma;
}

RicciDefectField ricci_defect(const ChristoffelField& gamma,
                              const AlgebraicCurvatureOperator& op, const FrameField& frame) {
  const int m = gamma.dim();
  if (op.dim() != m || frame.dim() != m) {
    throw ShapeError("connection, operator, and frame dimensions disagree");
  }
  const int rcap = gamma.degree_cap() - 1;
  const SquareMatrix<Jet> rho = ricci_of_connection(gamma);
  const SquareMatrix<Jet> rho_s = symmetric_part(rho);
  SquareMatrix<Jet> contracted = frame_contract(rho_s, frame);
  const BilinearForm target = symmetric_part(ricci(op));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      contracted(i, j) -= Jet::constant(m, rcap, target(i, j));
    }
  return RicciDefectField::from_components(std::move(contracted));
}

ChristoffelField solve_correction(const RicciDefectField& defect, int degree_cap) {
  const int m = defect.dim();
  if (m < 3) {
    throw DomainError("the axis-antiderivative solver needs dimension at least 3");
  }
  if (degree_cap < defect.degree_cap()) {
    throw ShapeError("correction cap below the defect cap would discard defect terms");
  }
  ChristoffelField out(m, degree_cap);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      // Smallest axis distinct from both lower indices.
      int k = 0;
      while (k == i || k == j) ++k;
      const Jet integrand = (-defect(i, j)).truncated(degree_cap);
      out.set_symmetric_pair(i, j, k, integrate_axis(integrand, k));
    }
  return out;
}

RicciDefectField recursion_identity_rhs(const RicciDefectField& defect,
                                        const ChristoffelField& gamma,
                                        const ChristoffelField& correction,
                                        const FrameField& frame) {
  const int m = defect.dim();
  if (gamma.dim() != m || correction.dim() != m || frame.dim() != m) {
    throw ShapeError("recursion identity operands disagree in dimension");
  }
  const int rcap = defect.degree_cap();
  // -Theta(E_i, E_j) + Theta_{ij} ...
  SquareMatrix<Jet> rhs = frame_contract(defect.components(), frame) * Rational(-1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) rhs(i, j) += defect(i, j);
  // ... + rho_s((Gamma + E/2) * E)(E_i, E_j), via the materialized tensor.
  const ChristoffelField mid = gamma + correction * Rational(1, 2);
  const CurvatureField quad = star_product(mid, correction);
  SquareMatrix<Jet> rho_s = symmetric_part(ricci(quad));
  if (rho_s(0, 0).degree_cap() != rcap) {
    // Connection caps exceed the defect cap by one, so this cannot trip.
    throw InternalError("recursion identity cap mismatch");
  }
  rhs = rhs + frame_contract(rho_s, frame);
  return RicciDefectField::from_components(std::move(rhs));
}

RealizationResult realize(const AlgebraicCurvatureOperator& op, const MetricField& metric,
                          int order) {
  const int m = op.dim();
  if (metric.dim() != m) {
    throw ShapeError("operator dimension " + std::to_string(m) + " does not match metric dimension " +
                     std::to_string(metric.dim()));
  }
  if (order < 2) {
    throw DomainError("realization order must be at least 2");
  }
  const int gamma_cap = order + 1;

  // The construction reads the metric through degree order + 1 only.
  const MetricField input =
      metric.degree_cap() == gamma_cap ? metric : metric.truncated(gamma_cap);
  if (!validate_normal_form(input).value_normalized) {
    throw DomainError("metric is not value-normalized: g(0) must be exactly "
                      "diag(-1 x p, +1 x q); apply a constant linear change of basis first");
  }

  QuadraticNormalization normalization = quadratic_normalize(input);
  const FrameField frame = orthonormal_frame(normalization.metric);

  const BilinearForm rho_a_target = antisymmetric_part(ricci(op));

  RealizationResult result{ChristoffelField(m, gamma_cap), normalization.metric, frame, {}, {}};
  RealizationReport& report = result.report;
  report.dim = m;
  report.order = order;
  report.signature = metric.signature();
  report.normalization.value_normalized = true;
  report.normalization.input_was_first_order_flat = normalization.input_was_first_order_flat;
  report.normalization.coordinate_map = normalization.coordinate_map;

  ChristoffelField gamma = initial_christoffel(op, gamma_cap);

  // Valuation doubling makes the defect vanish within this many rounds.
  const int max_rounds = (order + 2) / 2;

  int previous_valuation = 0;
  for (int nu = 1;; ++nu) {
    RicciDefectField defect = ricci_defect(gamma, op, frame);

    // Audit trail for the one-step recursion: the defect just computed must
    // equal the identity's right-hand side built from the previous round.
    std::optional<bool> recursion_ok;
    if (nu >= 2) {
      const IterationStep& prev = result.trace.back();
      const RicciDefectField rhs =
          recursion_identity_rhs(prev.defect, prev.gamma, *prev.correction, frame);
      if (!(rhs == defect)) {
        throw InternalError("defect recursion identity failed at round " + std::to_string(nu));
      }
      recursion_ok = true;
    }

    // Enforced normal form: each round gains two orders of vanishing.
    const int defect_valuation = defect.valuation();
    if (defect_valuation < 2 * nu || defect_valuation < saturating_add(previous_valuation, 2)) {
      throw InternalError("defect valuation failed to advance at round " + std::to_string(nu));
    }
    previous_valuation = defect_valuation;

    // The antisymmetric Ricci part must stay pinned to the target constant:
    // rho_a(R)_{jk} = (d_k T_j - d_j T_k) / 2 from the connection traces.
    const int rcap = gamma_cap - 1;
    for (int j = 0; j < m; ++j) {
      const Jet tj = gamma.lower_trace(j);
      for (int k = j + 1; k < m; ++k) {
        const Jet tk = gamma.lower_trace(k);
        Jet value = partial_derivative(tj, k) - partial_derivative(tk, j);
        value *= Rational(1, 2);
        if (!(value.truncated(rcap) == Jet::constant(m, rcap, rho_a_target(j, k)))) {
          throw InternalError("antisymmetric Ricci part drifted from its constant value");
        }
      }
    }
    if (!gamma.vanishes_at_origin()) {
      throw InternalError("connection stopped vanishing at the origin");
    }

    IterationSummary summary;
    summary.nu = nu;
    summary.defect_valuation = defect_valuation;
    summary.decay_order = 2 * nu;
    std::vector<Jet> flat;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) flat.push_back(defect(i, j));
    summary.defect_norm_sample = weighted_norm_sample(flat, 2 * nu);
    summary.recursion_identity_verified = recursion_ok;

    if (defect.is_zero()) {
      result.trace.push_back({nu, gamma, defect, std::nullopt});
      report.iterations.push_back(std::move(summary));
      report.converged = true;
      report.iterations_used = nu;
      break;
    }
    if (nu >= max_rounds) {
      throw InternalError("defect iteration failed to terminate within " +
                          std::to_string(max_rounds) + " rounds");
    }

    ChristoffelField correction = solve_correction(defect, gamma_cap);
    // The solver's two structural guarantees, asserted every round.
    int correction_valuation = kValuationInfinity;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
          const int v = valuation(correction(i, j, k));
          if (v < correction_valuation) correction_valuation = v;
        }
        if (!correction(i, j, j).is_zero()) {
          throw InternalError("correction is not trace-free");
        }
      }
    if (correction_valuation != saturating_add(defect_valuation, 1)) {
      throw InternalError("correction valuation is not one above the defect's");
    }

    summary.correction_valuation = correction_valuation;
    std::vector<Jet> flat_correction;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) flat_correction.push_back(correction(i, j, k));
    summary.correction_norm_sample = weighted_norm_sample(flat_correction, 2 * nu + 1);

    result.trace.push_back({nu, gamma, defect, correction});
    report.iterations.push_back(std::move(summary));

    gamma += correction;
  }

  result.gamma = std::move(gamma);
  return result;
}

}  // namespace curvreal
