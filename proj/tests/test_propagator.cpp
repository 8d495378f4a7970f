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

#include "nomoqpe/propagator.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace nomoqpe;

namespace {

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// Least-squares slope of log(err) against log(N).
double loglog_slope(const std::vector<int>& ns, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = double(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(double(ns[i])), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

TEST(exact_propagator, zero_generator_is_identity) {
  auto p = exact_propagator(RealMatrix::Zero(3, 3), 0.7);
  EXPECT_LE(max_abs(p.unitary - ComplexMatrix::Identity(3, 3)), 1e-15);
  EXPECT_EQ(p.provenance.kind, PropagatorProvenance::Kind::Exact);
}

TEST(exact_propagator, diagonal_generator) {
  RealVector e(3);
  e << -1.0, 0.25, 2.0;
  const double tau = 0.9;
  auto p = exact_propagator(RealMatrix(e.asDiagonal()), tau);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(p.unitary(i, i) - std::polar(1.0, tau * e(i))), 1e-15);
  }
  EXPECT_LE(max_abs(p.unitary - ComplexMatrix(p.unitary.diagonal().asDiagonal())), 1e-15);
}

TEST(exact_propagator, commutes_with_generator) {
  std::mt19937_64 rng(3);
  auto m = random_hermitian(4, rng);
  auto p = exact_propagator(m, 1.3);
  EXPECT_LE(unitarity_defect(p.unitary), 1e-12);
  EXPECT_LE(max_abs(p.unitary.adjoint() * m * p.unitary - m), 1e-9);
}

TEST(exact_propagator, matches_taylor_series) {
  std::mt19937_64 rng(5);
  auto m = random_hermitian(5, rng);
  const double tau = 0.4;
  ComplexMatrix term = ComplexMatrix::Identity(5, 5), sum = term;
  for (int k = 1; k < 60; ++k) {
    term = term * (Complex(0, tau) * m) / double(k);
    sum += term;
  }
  EXPECT_LE(max_abs(exact_propagator(m, tau).unitary - sum), 1e-12);
}

TEST(trotter_propagator, commuting_terms_are_exact) {
  RealVector a(3), b(3);
  a << 1.0, -0.5, 0.2;
  b << 0.3, 0.7, -1.1;
  std::vector<ComplexMatrix> terms{ComplexMatrix(a.cast<Complex>().asDiagonal()),
                                   ComplexMatrix(b.cast<Complex>().asDiagonal())};
  auto t = trotter_propagator(terms, 0.8, 1);
  auto e = exact_propagator(ComplexMatrix(terms[0] + terms[1]), 0.8);
  EXPECT_LE(max_abs(t.unitary - e.unitary), 1e-10);
  EXPECT_LE(trotter_error(terms, 0.8, 1), 1e-10);
  EXPECT_EQ(t.provenance.steps, 1);
}

TEST(trotter_propagator, single_term_is_exact) {
  std::mt19937_64 rng(9);
  std::vector<ComplexMatrix> terms{random_hermitian(4, rng)};
  for (int n : {1, 3, 10}) {
    EXPECT_LE(max_abs(trotter_propagator(terms, 1.1, n).unitary -
                      exact_propagator(terms[0], 1.1).unitary),
              1e-10);
  }
}

TEST(trotter_propagator, product_order_is_list_order) {
  std::vector<ComplexMatrix> terms{pauli_x(), pauli_z()};
  auto t = trotter_propagator(terms, 0.5, 1);
  ComplexMatrix expected = exact_propagator(pauli_x(), 0.5).unitary *
                           exact_propagator(pauli_z(), 0.5).unitary;
  EXPECT_LE(max_abs(t.unitary - expected), 1e-14);
}

TEST(trotter_propagator, halving_step_reduces_error) {
  std::vector<ComplexMatrix> terms{pauli_x(), pauli_z()};
  for (int n : {1, 2, 4, 8}) {
    EXPECT_LE(trotter_error(terms, 0.5, 2 * n), 0.6 * trotter_error(terms, 0.5, n)) << n;
  }
}

TEST(trotter_error, first_order_ratio) {
  std::vector<ComplexMatrix> terms{pauli_x(), pauli_z()};
  for (int n : {16, 32, 64}) {
    EXPECT_GE(trotter_error(terms, 0.5, n) / trotter_error(terms, 0.5, 2 * n), 1.6) << n;
  }
}

TEST(trotter_error, tau_squared_prefactor) {
  std::vector<ComplexMatrix> terms{pauli_x(), pauli_z()};
  for (int n : {4, 16, 64}) {
    EXPECT_LE(trotter_error(terms, 0.25, n), 0.35 * trotter_error(terms, 0.5, n)) << n;
  }
}

TEST(trotter_error, slope_for_random_three_term_sets) {
  std::mt19937_64 rng(2024);
  const std::vector<int> ns{4, 8, 16, 32, 64};
  for (int set = 0; set < 5; ++set) {
    std::vector<ComplexMatrix> terms;
    for (int i = 0; i < 3; ++i) terms.push_back(random_hermitian(8, rng) * 0.3);
    std::vector<double> errs;
    for (int n : ns) errs.push_back(trotter_error(terms, 1.0, n));
    const double slope = loglog_slope(ns, errs);
    EXPECT_GE(slope, -1.2) << set;
    EXPECT_LE(slope, -0.8) << set;
  }
}

TEST(trotter_propagator, rejects_bad_arguments) {
  std::vector<ComplexMatrix> terms{pauli_x()};
  EXPECT_THROW(trotter_propagator(terms, 1.0, 0), UsageError);
  EXPECT_THROW(trotter_propagator({}, 1.0, 1), UsageError);
  terms.push_back(ComplexMatrix::Identity(3, 3));
  EXPECT_THROW(trotter_propagator(terms, 1.0, 1), UsageError);
  ComplexMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  EXPECT_THROW(exact_propagator(bad, 1.0), NumericalError);
}
