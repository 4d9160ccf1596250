// Deterministic random generators shared by the test binaries.
//
// Everything is seeded mt19937_64 with explicit modulo reduction, so the
// streams are identical on every platform and the fixtures frozen from them
// stay valid.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "curvreal/algebra.hpp"
#include "curvreal/jet.hpp"
#include "curvreal/metric.hpp"
#include "curvreal/realize.hpp"
#include "curvreal/tensor.hpp"

namespace testutil {

using curvreal::Jet;
using curvreal::Monomial;
using curvreal::Rational;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform-ish integer in [lo, hi]; modulo bias is irrelevant for tests.
  int int_in(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Rational k/den with k in [-bound*den, bound*den].
  Rational rat(int bound, int den) {
    const int k = int_in(-bound * den, bound * den);
    Rational value(k, den);
    value.canonicalize();
    return value;
  }

 private:
  std::mt19937_64 engine_;
};

// Random jet with terms of total degree in [min_deg, max_deg], degree cap
// `cap`. Roughly `tries` candidate terms; duplicates merge.
inline Jet random_jet(Rng& rng, int dim, int cap, int min_deg, int max_deg, int tries = 6) {
  std::vector<Jet::Term> terms;
  for (int t = 0; t < tries; ++t) {
    std::vector<int> exponents(dim, 0);
    int total = 0;
    for (int axis = 0; axis < dim; ++axis) {
      const int e = rng.int_in(0, max_deg);
      exponents[axis] = e;
      total += e;
    }
    if (total < min_deg || total > max_deg || total > cap) continue;
    const Rational coefficient = rng.rat(4, 4);
    if (curvreal::is_zero(coefficient)) continue;
    terms.push_back({Monomial::from_exponents(exponents), coefficient});
  }
  return Jet::from_terms(dim, cap, std::move(terms));
}

inline curvreal::SquareMatrix<Jet> random_symmetric_jet_matrix(Rng& rng, int dim, int cap,
                                                               int min_deg, int max_deg) {
  curvreal::SquareMatrix<Jet> out(dim, Jet(dim, cap));
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      Jet entry = random_jet(rng, dim, cap, min_deg, max_deg);
      out(i, j) = entry;
      out(j, i) = std::move(entry);
    }
  }
  return out;
}

// Random torsion-free connection coefficients; entries need not vanish at 0.
inline curvreal::ChristoffelField random_christoffel(Rng& rng, int dim, int cap,
                                                     int max_deg) {
  curvreal::ChristoffelField gamma(dim, cap);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      for (int l = 0; l < dim; ++l) {
        gamma.set_symmetric_pair(i, j, l, random_jet(rng, dim, cap, 0, max_deg, 3));
      }
    }
  }
  return gamma;
}

inline curvreal::SquareMatrix<Rational> random_symmetric_form(Rng& rng, int dim, int bound) {
  curvreal::SquareMatrix<Rational> out(dim, Rational(0));
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      Rational value = rng.rat(bound, 2);
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

inline curvreal::SquareMatrix<Rational> random_antisymmetric_form(Rng& rng, int dim,
                                                                  int bound) {
  curvreal::SquareMatrix<Rational> out(dim, Rational(0));
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      Rational value = rng.rat(bound, 2);
      out(i, j) = value;
      Rational negated = -value;
      out(j, i) = negated;
    }
  }
  return out;
}

// Value-normalized metric: diag(epsilon) plus a symmetric perturbation whose
// entries start at degree `min_deg` (>= 1 keeps it value-normalized) with
// coefficients in [-1, 1] of the form k/8.
inline curvreal::MetricField random_perturbed_metric(Rng& rng, int p, int q, int cap,
                                                     int min_deg, int max_deg) {
  const int dim = p + q;
  const std::vector<int> eps = curvreal::signature_epsilons(p, q);
  curvreal::SquareMatrix<Jet> entries(dim, Jet(dim, cap));
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      std::vector<Jet::Term> terms;
      for (int t = 0; t < 4; ++t) {
        std::vector<int> exponents(dim, 0);
        int total = 0;
        for (int axis = 0; axis < dim; ++axis) {
          const int e = rng.int_in(0, max_deg);
          exponents[axis] = e;
          total += e;
        }
        if (total < min_deg || total > max_deg || total > cap) continue;
        const int k = rng.int_in(-8, 8);
        if (k == 0) continue;
        Rational coefficient(k, 8);
        coefficient.canonicalize();
        terms.push_back({Monomial::from_exponents(exponents), coefficient});
      }
      Jet entry = Jet::from_terms(dim, cap, std::move(terms));
      if (i == j) entry += Jet::constant(dim, cap, Rational(eps[i]));
      entries(j, i) = entry;
      entries(i, j) = std::move(entry);
    }
  }
  return curvreal::MetricField::checked(p, q, std::move(entries));
}

}  // namespace testutil
