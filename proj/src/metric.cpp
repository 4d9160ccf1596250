#include "curvreal/metric.hpp"

#include <string>

#include "curvreal/errors.hpp"

namespace curvreal {

namespace {

// All entries must share one (dim, cap) jet shape matching the matrix.
void check_jet_matrix(const SquareMatrix<Jet>& m, const char* what) {
  if (m.dim() < 1) throw DomainError(std::string(what) + " has dimension zero");
  const int dim = m.dim();
  const int cap = m(0, 0).degree_cap();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (m(i, j).dim() != dim || m(i, j).degree_cap() != cap) {
        throw ShapeError(std::string(what) + " entry (" + std::to_string(i + 1) + ", " +
                         std::to_string(j + 1) + ") has a mismatched jet shape");
      }
    }
}

SquareMatrix<Rational> origin_value(const SquareMatrix<Jet>& m) {
  SquareMatrix<Rational> out(m.dim(), Rational(0));
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = m(i, j).constant_term();
  return out;
}

}  // namespace

MetricField MetricField::checked(int p, int q, SquareMatrix<Jet> components) {
  check_jet_matrix(components, "metric");
  if (p + q != components.dim()) {
    throw DomainError("signature (" + std::to_string(p) + ", " + std::to_string(q) +
                      ") does not sum to dimension " + std::to_string(components.dim()));
  }
  if (!is_symmetric(components)) throw DomainError("metric is not symmetric");
  const std::pair<int, int> sig = signature_of(origin_value(components));
  if (sig != std::pair<int, int>{p, q}) {
    throw DomainError("metric value at the origin has signature (" +
                      std::to_string(sig.first) + ", " + std::to_string(sig.second) +
                      "), declared (" + std::to_string(p) + ", " + std::to_string(q) + ")");
  }
  return MetricField(p, q, std::move(components));
}

MetricField MetricField::constant_diagonal(int p, int q, int degree_cap) {
  const std::vector<int> eps = signature_epsilons(p, q);
  const int m = p + q;
  SquareMatrix<Jet> comps(m, Jet(m, degree_cap));
  for (int i = 0; i < m; ++i) {
    comps(i, i) = Jet::constant(m, degree_cap, Rational(eps[static_cast<std::size_t>(i)]));
  }
  return MetricField(p, q, std::move(comps));
}

int MetricField::degree_cap() const { return components_(0, 0).degree_cap(); }

SquareMatrix<Rational> MetricField::value_at_origin() const {
  return origin_value(components_);
}

MetricField MetricField::truncated(int new_cap) const {
  SquareMatrix<Jet> comps(dim(), Jet(dim(), new_cap));
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) comps(i, j) = components_(i, j).truncated(new_cap);
  return MetricField(p_, q_, std::move(comps));
}

NormalFormVerdict validate_normal_form(const MetricField& metric) {
  const int m = metric.dim();
  const std::vector<int> eps =
      signature_epsilons(metric.signature().first, metric.signature().second);
  NormalFormVerdict verdict;
  verdict.value_normalized = true;
  for (int i = 0; i < m && verdict.value_normalized; ++i)
    for (int j = 0; j < m; ++j) {
      const Rational expected(i == j ? eps[static_cast<std::size_t>(i)] : 0);
      if (!(metric(i, j).constant_term() == expected)) {
        verdict.value_normalized = false;
        break;
      }
    }
  verdict.first_order_flat = true;
  for (int i = 0; i < m && verdict.first_order_flat; ++i)
    for (int j = 0; j < m; ++j) {
      if (!metric(i, j).homogeneous_part(1).is_zero()) {
        verdict.first_order_flat = false;
        break;
      }
    }
  return verdict;
}

QuadraticNormalization quadratic_normalize(const MetricField& metric) {
  const NormalFormVerdict verdict = validate_normal_form(metric);
  if (!verdict.value_normalized) {
    throw DomainError("metric is not value-normalized at the origin; express it as "
                      "diag(epsilon) + higher-order terms first");
  }
  const int m = metric.dim();
  const int cap = metric.degree_cap();

  std::vector<Jet> identity_map;
  identity_map.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) identity_map.push_back(Jet::variable(m, cap, i));

  if (verdict.first_order_flat) {
    return {identity_map, metric, true};
  }

  const std::vector<int> eps =
      signature_epsilons(metric.signature().first, metric.signature().second);

  // Christoffel values of g at the origin, from the first-order coefficients:
  // c^i_{jk} = epsilon_i (d_j g_{ik} + d_k g_{ij} - d_i g_{jk})(0) / 2.
  // Only the inverse metric at 0 = diag(epsilon) enters.
  std::vector<std::vector<std::vector<Rational>>> c(
      static_cast<std::size_t>(m),
      std::vector<std::vector<Rational>>(static_cast<std::size_t>(m),
                                         std::vector<Rational>(static_cast<std::size_t>(m))));
  auto first_order_coeff = [&](int a, int b, int axis) {
    std::vector<int> exps(static_cast<std::size_t>(m), 0);
    exps[static_cast<std::size_t>(axis)] = 1;
    return metric(a, b).coefficient(exps);
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Rational sum = first_order_coeff(i, k, j) + first_order_coeff(i, j, k);
        sum -= first_order_coeff(j, k, i);
        sum *= Rational(eps[static_cast<std::size_t>(i)], 2);
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
         [static_cast<std::size_t>(k)] = std::move(sum);
      }

  // x^i = y^i - c^i_{jk} y^j y^k / 2 (c symmetric in j, k by construction).
  std::vector<Jet> map;
  map.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    Jet xi = Jet::variable(m, cap, i);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Rational& cijk =
            c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
             [static_cast<std::size_t>(k)];
        if (is_zero(cijk)) continue;
        Jet quad = Jet::variable(m, cap, j) * Jet::variable(m, cap, k);
        Rational coeff = cijk / 2;
        xi -= quad * coeff;
      }
    map.push_back(std::move(xi));
  }

  // Pull the metric back: g~_{ab}(y) = J^c_a J^d_b g_{cd}(x(y)), with the
  // Jacobian J^c_a = d x^c / d y^a read off the map itself.
  SquareMatrix<Jet> jacobian(m, Jet(m, cap));
  for (int cidx = 0; cidx < m; ++cidx)
    for (int a = 0; a < m; ++a) {
      jacobian(cidx, a) = partial_derivative(map[static_cast<std::size_t>(cidx)], a);
    }
  SquareMatrix<Jet> pulled(m, Jet(m, cap));
  for (int cidx = 0; cidx < m; ++cidx)
    for (int d = 0; d < m; ++d) {
      const Jet composed = substitute(metric(cidx, d), map);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          pulled(a, b) += jacobian(cidx, a) * jacobian(d, b) * composed;
        }
    }

  MetricField out = MetricField::checked(metric.signature().first, metric.signature().second,
                                         std::move(pulled));
  const NormalFormVerdict after = validate_normal_form(out);
  if (!after.value_normalized || !after.first_order_flat) {
    throw InternalError("quadratic normalization failed to flatten the metric to first order");
  }
  return {std::move(map), std::move(out), false};
}

FrameField::FrameField(int dim, SquareMatrix<Jet> components)
    : components_(std::move(components)) {
  check_jet_matrix(components_, "frame");
  if (components_.dim() != dim) throw ShapeError("frame dimension mismatch");
  for (int i = 0; i < dim; ++i)
    for (int a = 0; a < dim; ++a) {
      const Rational expected(i == a ? 1 : 0);
      if (!(components_(i, a).constant_term() == expected)) {
        throw DomainError("frame value at the origin is not the identity");
      }
    }
}

FrameField FrameField::identity(int dim, int degree_cap) {
  SquareMatrix<Jet> comps(dim, Jet(dim, degree_cap));
  for (int i = 0; i < dim; ++i) comps(i, i) = Jet::constant(dim, degree_cap, Rational(1));
  return FrameField(dim, std::move(comps));
}

int FrameField::degree_cap() const { return components_(0, 0).degree_cap(); }

FrameField FrameField::truncated(int new_cap) const {
  const int m = dim();
  SquareMatrix<Jet> comps(m, Jet(m, new_cap));
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < m; ++a) comps(i, a) = components_(i, a).truncated(new_cap);
  return FrameField(m, std::move(comps));
}

FrameField orthonormal_frame(const MetricField& metric) {
  const NormalFormVerdict verdict = validate_normal_form(metric);
  if (!verdict.value_normalized || !verdict.first_order_flat) {
    throw DomainError("orthonormal frame needs a metric in first-order normal form");
  }
  const int m = metric.dim();
  const int cap = metric.degree_cap();
  const std::vector<int> eps =
      signature_epsilons(metric.signature().first, metric.signature().second);

  // g(u, v) for vector fields given by component rows.
  auto pairing = [&](const std::vector<Jet>& u, const std::vector<Jet>& v) {
    Jet out(m, cap);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        out += u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)] * metric(a, b);
      }
    return out;
  };

  std::vector<std::vector<Jet>> frame;
  frame.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    // Start from the coordinate field d/dx^i ...
    std::vector<Jet> u(static_cast<std::size_t>(m), Jet(m, cap));
    u[static_cast<std::size_t>(i)] = Jet::constant(m, cap, Rational(1));
    // ... subtract signed projections onto the fields already built ...
    for (int j = 0; j < i; ++j) {
      Jet proj = pairing(u, frame[static_cast<std::size_t>(j)]);
      proj *= Rational(eps[static_cast<std::size_t>(j)]);
      for (int a = 0; a < m; ++a) {
        u[static_cast<std::size_t>(a)] -=
            proj * frame[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
      }
    }
    // ... and normalize by the unit square root of epsilon_i g(u, u), whose
    // constant term is 1 because the metric is flat to first order.
    Jet radicand = pairing(u, u);
    radicand *= Rational(eps[static_cast<std::size_t>(i)]);
    if (!(radicand.constant_term() == 1)) {
      throw InternalError("orthonormalization radicand lost its unit constant term");
    }
    const Jet scale = inverse_unit(sqrt_unit(radicand));
    for (int a = 0; a < m; ++a) {
      u[static_cast<std::size_t>(a)] = u[static_cast<std::size_t>(a)] * scale;
    }
    frame.push_back(std::move(u));
  }

  SquareMatrix<Jet> comps(m, Jet(m, cap));
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < m; ++a) {
      comps(i, a) = std::move(frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]);
    }
  FrameField out(m, std::move(comps));

  // The defining identity must hold exactly at the cap.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet value(m, cap);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) value += out(i, a) * out(j, b) * metric(a, b);
      const Rational expected(i == j ? eps[static_cast<std::size_t>(i)] : 0);
      if (!(value == Jet::constant(m, cap, expected))) {
        throw InternalError("frame is not orthonormal as a jet identity");
      }
    }
  return out;
}

SquareMatrix<Jet> frame_contract(const SquareMatrix<Jet>& form, const FrameField& frame) {
  check_jet_matrix(form, "bilinear form");
  if (form.dim() != frame.dim()) throw ShapeError("form and frame dimension mismatch");
  const int m = form.dim();
  const int cap = form(0, 0).degree_cap();
  const FrameField frame_cut = frame.degree_cap() == cap ? frame : frame.truncated(cap);
  SquareMatrix<Jet> out(m, Jet(m, cap));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet acc(m, cap);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) acc += frame_cut(i, a) * frame_cut(j, b) * form(a, b);
      out(i, j) = std::move(acc);
    }
  return out;
}

SquareMatrix<Jet> inverse_metric_jets(const MetricField& metric) {
  const int m = metric.dim();
  const int cap = metric.degree_cap();
  const SquareMatrix<Rational> g0 = metric.value_at_origin();
  const SquareMatrix<Rational> g0_inv = inverse(g0);

  // g = g0 (I + H) with H = g0^{-1}(g - g0) of valuation >= 1, so
  // g^{-1} = (sum_k (-H)^k) g0^{-1}, and the series stops at the cap.
  SquareMatrix<Jet> h(m, Jet(m, cap));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet acc(m, cap);
      for (int k = 0; k < m; ++k) {
        Jet dev = metric(k, j) - Jet::constant(m, cap, g0(k, j));
        acc += dev * g0_inv(i, k);
      }
      h(i, j) = std::move(acc);
    }

  SquareMatrix<Jet> series(m, Jet(m, cap));
  for (int i = 0; i < m; ++i) series(i, i) = Jet::constant(m, cap, Rational(1));
  SquareMatrix<Jet> power = series;
  for (int k = 1; k <= cap; ++k) {
    // Negating after each multiply keeps power = (-H)^k.
    power = matmul(power, h);
    bool all_zero = true;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Jet negated = power(i, j) * Rational(-1);
        power(i, j) = std::move(negated);
        if (!power(i, j).is_zero()) all_zero = false;
      }
    if (all_zero) break;
    series = series + power;
  }

  SquareMatrix<Jet> out(m, Jet(m, cap));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet acc(m, cap);
      for (int k = 0; k < m; ++k) acc += series(i, k) * g0_inv(k, j);
      out(i, j) = std::move(acc);
    }

  // Check the defining identity exactly.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet acc(m, cap);
      for (int k = 0; k < m; ++k) acc += out(i, k) * metric(k, j);
      const Jet expected = i == j ? Jet::constant(m, cap, Rational(1)) : Jet(m, cap);
      if (!(acc == expected)) throw InternalError("inverse metric identity failed");
    }
  return out;
}

}  // namespace curvreal
