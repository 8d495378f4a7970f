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

#include "nomoqpe/trotter_cost.hpp"

#include <random>
#include <set>

#include "gtest/gtest.h"

#include "oracles.hpp"

using namespace nomoqpe;

namespace {

// Connected components of V = a+_p a+_q a_s a_r + h.c. assembled by the
// configuration-basis matrix builder over two boson classes (p, r) and (q, s).
std::map<int, long> hamiltonian_blocks(int n1, int n2) {
  auto indexing = build_indexing({{ParticleKind::Boson, n1, 2, "pr"},
                                  {ParticleKind::Boson, n2, 2, "qs"}});
  using enum LadderKind;
  const int p = 1, r = 2, q = 3, s = 4;
  std::vector<HamiltonianTerm> terms{
      {1.0, {{Create, p}, {Create, q}, {Annihilate, s}, {Annihilate, r}}},
      {1.0, {{Create, r}, {Create, s}, {Annihilate, q}, {Annihilate, p}}}};
  SecondQuantizedHamiltonian h(indexing, terms);
  auto basis = enumerate_configurations(indexing, BasisConstraint::unconstrained(indexing));
  auto m = build_matrix(h, basis, MatrixOptions{1u << 20});
  return oracle::component_histogram(m.to_dense());
}

// Same components from explicit Fock-space Kronecker products.
std::map<int, long> kronecker_blocks(int n1, int n2) {
  std::vector<oracle::Site> sites{{'b', n1, 0}, {'b', n1, 0}, {'b', n2, 1}, {'b', n2, 1}};
  // sites: p = 1, r = 2, q = 3, s = 4; V_pqrs = V_rspq = 1 carries the 1/2.
  auto v = oracle::hamiltonian(sites, {}, {{{1, 3, 2, 4}, 1.0}, {{2, 4, 1, 3}, 1.0}});
  return oracle::component_histogram(v.real());
}

std::map<int, long> as_long(const std::map<int, std::int64_t>& h) {
  return {h.begin(), h.end()};
}

}  // namespace

TEST(enumerate_blocks, single_state_box) {
  auto b = enumerate_blocks(0, 0);
  EXPECT_EQ(b.blocks.size(), 1u);
  EXPECT_EQ(b.count(1), 1);
  EXPECT_EQ(block_count_formula(0, 0, 1), 1);
}

TEST(enumerate_blocks, worked_histograms) {
  auto b11 = enumerate_blocks(1, 1);
  EXPECT_EQ(as_long(b11.histogram), (std::map<int, long>{{1, 14}, {2, 1}}));
  auto b12 = enumerate_blocks(1, 2);
  EXPECT_EQ(as_long(b12.histogram), (std::map<int, long>{{1, 28}, {2, 4}}));
  EXPECT_EQ(block_count_formula(1, 1, 1), 14);
  EXPECT_EQ(block_count_formula(1, 1, 2), 1);
  EXPECT_EQ(block_count_formula(1, 2, 1), 28);
  EXPECT_EQ(block_count_formula(2, 1, 2), 4);
}

TEST(enumerate_blocks, matches_configuration_matrix_components) {
  for (int n1 = 0; n1 <= 4; ++n1) {
    for (int n2 = 0; n2 <= 4; ++n2) {
      EXPECT_EQ(as_long(enumerate_blocks(n1, n2).histogram), hamiltonian_blocks(n1, n2))
          << n1 << "," << n2;
    }
  }
}

TEST(enumerate_blocks, matches_kronecker_components) {
  for (auto [n1, n2] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
    EXPECT_EQ(as_long(enumerate_blocks(n1, n2).histogram), kronecker_blocks(n1, n2))
        << n1 << "," << n2;
  }
}

TEST(enumerate_blocks, labels_and_chain_steps) {
  auto b = enumerate_blocks(3, 2);
  std::set<Occupation4> seen;
  for (const auto& block : b.blocks) {
    for (std::size_t i = 0; i < block.members.size(); ++i) {
      EXPECT_EQ(label_of(block.members[i]), block.label);
      EXPECT_TRUE(seen.insert(block.members[i]).second);
      if (i > 0) EXPECT_EQ(block.members[i].delta() - block.members[i - 1].delta(), 4);
    }
  }
  EXPECT_EQ(std::int64_t(seen.size()), box_size(3, 2));
}

TEST(block_count_formula, agrees_with_enumeration) {
  for (int n1 = 0; n1 <= 6; ++n1) {
    for (int n2 = 0; n2 <= 6; ++n2) {
      auto b = enumerate_blocks(n1, n2);
      EXPECT_EQ(b.max_dimension(), std::min(n1, n2) + 1);
      for (int d = 1; d <= std::min(n1, n2) + 1; ++d) {
        EXPECT_EQ(block_count_formula(n1, n2, d), b.count(d)) << n1 << "," << n2 << " d=" << d;
      }
    }
  }
}

TEST(block_count_formula, top_dimension_closed_form) {
  for (int n1 = 0; n1 <= 8; ++n1) {
    for (int n2 = 0; n2 <= 8; ++n2) {
      const int a = std::abs(n1 - n2);
      EXPECT_EQ(block_count_formula(n1, n2, std::min(n1, n2) + 1), (a + 1) * (a + 1));
    }
  }
}

TEST(block_count_formula, rejects_out_of_range) {
  EXPECT_THROW(block_count_formula(1, 1, 0), UsageError);
  EXPECT_THROW(block_count_formula(1, 1, 3), UsageError);
  EXPECT_THROW(block_count_formula(-1, 1, 1), UsageError);
}

TEST(printed_forms, documented_discrepancies) {
  EXPECT_EQ(block_count_formula(2, 2, 1), 50);
  EXPECT_EQ(enumerate_blocks(2, 2).count(1), 50);
  EXPECT_EQ(printed_equal_bound_count(2, 1), 26);
  EXPECT_EQ(printed_equal_bound_count(1, 1), 14);
  EXPECT_EQ(printed_equal_bound_count(1, 2), 1);
  EXPECT_EQ(moment_sums(1, 1, 0), BigInt(15));
  EXPECT_EQ(printed_subspace_count(1, 1), 3);
}

TEST(moment_sums, worked_values) {
  EXPECT_EQ(moment_sums(1, 1, 1), BigInt(16));
  EXPECT_EQ(moment_sums(1, 1, 2), BigInt(18));
  EXPECT_EQ(moment_sums(1, 2, 2), BigInt(44));
  EXPECT_EQ(moment_sums(0, 0, 3), BigInt(1));
  EXPECT_EQ(moment_sums(1, 1, 3), BigInt(22));
  EXPECT_THROW(moment_sums(1, 1, 4), UsageError);
}

TEST(moment_sums, identities_up_to_six) {
  for (int n1 = 0; n1 <= 6; ++n1) {
    for (int n2 = 0; n2 <= 6; ++n2) {
      auto b = enumerate_blocks(n1, n2);
      BigInt m1 = 0, m2 = 0;
      for (const auto& block : b.blocks) {
        m1 += block.dimension();
        m2 += block.dimension() * block.dimension();
      }
      EXPECT_EQ(m1, BigInt((n1 + 1) * (n1 + 1) * (n2 + 1) * (n2 + 1)));
      EXPECT_EQ(m2, gate_count_ng(n1, n2));
      EXPECT_NO_THROW(moment_sums(b, 2));
    }
  }
}

TEST(gate_count_ng, values_and_integrality) {
  EXPECT_EQ(gate_count_ng(0, 0), BigInt(1));
  EXPECT_EQ(gate_count_ng(1, 1), BigInt(18));
  EXPECT_EQ(gate_count_ng(1, 2), BigInt(44));
  EXPECT_EQ(gate_count_ng(2, 1), BigInt(44));
  for (int n = 0; n <= 50; ++n) {
    for (int m = 0; m <= 50; ++m) EXPECT_NO_THROW(gate_count_ng(n, m));
  }
  EXPECT_THROW(gate_count_ng(-1, 0), UsageError);
}

TEST(register_transform, worked_example) {
  auto t = register_transform({0, 0, 1, 1}, 1, 1);
  EXPECT_EQ(t.sigma1, 0);
  EXPECT_EQ(t.delta1, 0);
  EXPECT_EQ(t.sigma2, 2);
  EXPECT_EQ(t.delta2, 0);
  EXPECT_EQ(t.sigma, 2);
  EXPECT_EQ(t.delta, 2);
}

TEST(register_transform, bijective_and_consistent) {
  for (int n1 = 0; n1 <= 7; ++n1) {
    for (int n2 = 0; n2 <= 5; ++n2) {
      std::set<TransformedRegisters> images;
      for (int fp = 0; fp <= n1; ++fp)
        for (int fq = 0; fq <= n2; ++fq)
          for (int fr = 0; fr <= n1; ++fr)
            for (int fs = 0; fs <= n2; ++fs) {
              Occupation4 x{fp, fq, fr, fs};
              auto t = register_transform(x, n1, n2);
              EXPECT_EQ(t.delta1, x.delta1());
              EXPECT_EQ(t.delta2, x.delta2());
              EXPECT_EQ(t.sigma, x.sigma());
              EXPECT_EQ(t.delta, x.delta());
              EXPECT_EQ(inverse_register_transform(t, n1, n2), x);
              images.insert(t);
            }
      EXPECT_EQ(std::int64_t(images.size()), box_size(n1, n2));
    }
  }
}

TEST(register_transform, widths) {
  auto w = transform_widths(1, 1);
  EXPECT_EQ(w.q, 1);
  EXPECT_EQ(w.delta1_register, 2);
  EXPECT_EQ(w.delta_register, 3);
  EXPECT_EQ(w.recovery_register, 6);
  EXPECT_EQ(w.first_stage_ancilla, 4);
  auto u = transform_widths(1, 7);  // Q1 = 1, Q2 = 3
  EXPECT_EQ(u.q, 3);
  EXPECT_EQ(u.asg_ancilla_width, 4);
  EXPECT_EQ(u.first_stage_ancilla, 8);
  EXPECT_EQ(u.recovery_register, 10);
}

TEST(asg, forward_inverse_round_trip) {
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = 0; b < 4; ++b) {
      auto out = asg_forward(a, b, 3, 2);
      EXPECT_EQ(out.width, 4);
      EXPECT_EQ(to_signed(out.difference_bits, 4), std::int64_t(b) - std::int64_t(a));
      auto back = asg_inverse(out, 3, 2);
      ASSERT_TRUE(back);
      EXPECT_EQ(*back, std::make_pair(a, b));
    }
  }
  EXPECT_THROW(asg_forward(8, 0, 3, 2), UsageError);
  EXPECT_FALSE(asg_inverse({1, 0, 3}, 2, 2));  // odd sum, even difference
}

TEST(block_exponential, zero_angle_is_identity) {
  auto c = verify_block_exponential(2, 2, 0.0, 1.0);
  EXPECT_EQ(c.residual, 0.0);
}

TEST(block_exponential, two_dimensional_block_is_a_rotation) {
  std::vector<Occupation4> states;
  RealMatrix v = four_index_matrix(1, 1, states);
  ASSERT_EQ(v.rows(), 16);
  auto find = [&](Occupation4 x) {
    return Eigen::Index(std::find(states.begin(), states.end(), x) - states.begin());
  };
  const auto lo = find({0, 0, 1, 1}), hi = find({1, 1, 0, 0});
  EXPECT_EQ(v(lo, hi), 1.0);
  EXPECT_EQ(v(hi, lo), 1.0);
  const double theta = 0.7;
  ComplexMatrix u = exponentiate(exact_spectrum(v), theta);
  EXPECT_NEAR(std::abs(u(lo, lo) - std::cos(theta)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(u(lo, hi) - Complex(0, std::sin(theta))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(u(find({1, 0, 0, 1}), find({1, 0, 0, 1})) - std::polar(1.0, 0.0)), 0.0,
              1e-14);
}

TEST(block_exponential, random_angles) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (auto [n1, n2] : {std::pair{1, 1}, {2, 2}, {3, 2}}) {
    for (int i = 0; i < 20; ++i) {
      auto c = verify_block_exponential(n1, n2, angle(rng), 1.0);
      EXPECT_LE(c.residual, 1e-9);
      EXPECT_EQ(c.off_label, 0.0);
      EXPECT_TRUE(c.delta_steps);
      EXPECT_TRUE(c.labels_constant);
    }
  }
}

TEST(block_exponential, matrix_elements_match_configuration_builder) {
  std::vector<Occupation4> states;
  RealMatrix v = four_index_matrix(2, 3, states);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      EXPECT_NEAR(v(i, j), four_index_element(states[std::size_t(i)], states[std::size_t(j)]),
                  1e-13);
    }
  }
}

TEST(trotter_step_cost, fermion_class) {
  auto idx = build_indexing({{ParticleKind::Fermion, 2, 6, "e"}});
  auto c = trotter_step_cost(idx, CostMapping::Compact);
  ASSERT_EQ(c.terms.size(), 1u);
  EXPECT_NEAR(double(c.fermion_fermion), 6.0 * 6 * 6 * 6 * std::log(36.0), 1e-9);
  EXPECT_EQ(c.boson_boson, 0.0L);
  EXPECT_EQ(c.qubits_compact, 6);
}

TEST(trotter_step_cost, boson_compact_uses_ng) {
  auto idx = build_indexing({{ParticleKind::Boson, 1, 2, "ph"}});
  auto c = trotter_step_cost(idx, CostMapping::Compact);
  ASSERT_EQ(c.terms.size(), 1u);
  EXPECT_EQ(*c.terms[0].ng, BigInt(18));
  EXPECT_EQ(*c.terms[0].exact, BigInt(18 * 2 * 4));
  EXPECT_EQ(*c.terms[0].block_sum_d2, BigInt(18));
  EXPECT_EQ(*c.terms[0].classical_precompute, BigInt(22));
  EXPECT_EQ(c.qubits_direct, 4);
  EXPECT_EQ(c.qubits_compact, 2);
}

TEST(trotter_step_cost, single_occupancy_direct_equals_simplified) {
  auto idx = build_indexing({{ParticleKind::Fermion, 1, 3, "e"},
                             {ParticleKind::Boson, 1, 2, "ph"},
                             {ParticleKind::Distinguishable, 1, 2, "A"}});
  auto direct = trotter_step_cost(idx, CostMapping::Direct);
  auto simple = trotter_step_cost(idx, CostMapping::CompactSimplified);
  EXPECT_EQ(direct.boson_boson_exact, simple.boson_boson_exact);
  EXPECT_NEAR(double(direct.total()), double(simple.total()), 1e-9);
  // fermion-boson: n_l^2 ln(N_k) N_l N_k^2 for two non-fermion classes
  EXPECT_NEAR(double(direct.fermion_boson), 2 * std::log(3.0) * 2 * 9, 1e-9);
}

TEST(trotter_step_cost, simplified_rejects_unequal_occupancy) {
  auto idx = build_indexing({{ParticleKind::Boson, 1, 2, "a"}, {ParticleKind::Boson, 2, 2, "b"}});
  EXPECT_THROW(trotter_step_cost(idx, CostMapping::CompactSimplified), UsageError);
  auto c = trotter_step_cost(idx, CostMapping::Compact);
  EXPECT_EQ(c.terms.size(), 3u);
  BigInt sum = 0;
  for (const auto& t : c.terms) sum += *t.exact;
  EXPECT_EQ(sum, c.boson_boson_exact);
}
