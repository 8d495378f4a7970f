// Copyright 2026 The nomoqpe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "nomoqpe/error.hpp"
#include "nomoqpe/linalg.hpp"

namespace nomoqpe {

/// Where a propagator came from: exact exponential or N Trotter steps.
struct PropagatorProvenance {
  enum class Kind { Exact, Trotter } kind = Kind::Exact;
  int steps = 1;
};

/// U = exp(i tau H), unitary to 1e-9.
struct Propagator {
  ComplexMatrix unitary;
  double tau = 0.0;
  PropagatorProvenance provenance;
};

/// Q exp(i tau L) Q^H for a precomputed spectrum.
template <typename Scalar>
ComplexMatrix exponentiate(const Spectrum<Scalar>& spectrum, double tau) {
  const auto n = spectrum.size();
  if (tau == 0.0) return ComplexMatrix::Identity(n, n);
  ComplexVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phases(i) = std::polar(1.0, tau * spectrum.values(i));
  }
  ComplexMatrix q = spectrum.vectors.template cast<Complex>();
  return q * phases.asDiagonal() * q.adjoint();
}

template <typename Derived>
Propagator exact_propagator(const Eigen::MatrixBase<Derived>& m, double tau) {
  auto spectrum = exact_spectrum(m);
  Propagator out{exponentiate(spectrum, tau), tau, {}};
  const double defect = unitarity_defect(out.unitary);
  if (!(defect <= kUnitarityTol)) {
    throw NumericalError("propagator unitarity defect " + std::to_string(defect));
  }
  return out;
}

/// (prod_X exp(i h_X tau / N))^N, the product taken left to right in list
/// order (the first term is the leftmost factor).
inline Propagator trotter_propagator(const std::vector<ComplexMatrix>& terms,
                                     double tau, int steps) {
  if (steps <= 0) throw UsageError("Trotter step count must be positive");
  if (terms.empty()) throw UsageError("Trotter product needs at least one term");
  const auto n = terms.front().rows();
  for (const auto& t : terms) {
    if (t.rows() != n || t.cols() != n) {
      throw UsageError("Trotter terms must share one dimension");
    }
  }
  ComplexMatrix step = ComplexMatrix::Identity(n, n);
  for (const auto& t : terms) {
    step = step * exact_propagator(t, tau / steps).unitary;
  }
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  for (int i = 0; i < steps; ++i) u = u * step;
  Propagator out{std::move(u), tau, {PropagatorProvenance::Kind::Trotter, steps}};
  const double defect = unitarity_defect(out.unitary);
  if (!(defect <= kUnitarityTol)) {
    throw NumericalError("Trotter propagator unitarity defect " +
                         std::to_string(defect));
  }
  return out;
}

/// ||U_trotter - U_exact||_2
inline double trotter_error(const std::vector<ComplexMatrix>& terms, double tau,
                            int steps) {
  auto approx = trotter_propagator(terms, tau, steps);
  ComplexMatrix sum = ComplexMatrix::Zero(terms.front().rows(), terms.front().cols());
  for (const auto& t : terms) sum += t;
  auto exact = exact_propagator(sum, tau);
  return spectral_norm(approx.unitary - exact.unitary);
}

}  // namespace nomoqpe
