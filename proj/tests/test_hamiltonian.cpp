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

#include "nomoqpe/hamiltonian.hpp"

#include <random>

#include "gtest/gtest.h"

#include "nomoqpe/indexing.hpp"
#include "nomoqpe/toys.hpp"
#include "oracles.hpp"

using namespace nomoqpe;

namespace {

ParticleClassSpec fermions(int n, int orbitals, std::string label = "e") {
  return {ParticleKind::Fermion, n, orbitals, std::move(label)};
}
ParticleClassSpec bosons(int n, int orbitals, std::string label = "b") {
  return {ParticleKind::Boson, n, orbitals, std::move(label)};
}
ParticleClassSpec nucleus(int orbitals, std::string label) {
  return {ParticleKind::Distinguishable, 1, orbitals, std::move(label)};
}

Configuration config(std::vector<int> occ) { return Configuration{std::move(occ)}; }

std::vector<oracle::Site> sites_of(const SpinOrbitalIndexing& indexing) {
  std::vector<oracle::Site> out;
  for (std::size_t k = 0; k < indexing.class_count(); ++k) {
    const auto& s = indexing.spec(k);
    const char kind = s.kind == ParticleKind::Fermion ? 'f'
                      : s.kind == ParticleKind::Boson ? 'b'
                                                      : 'd';
    for (int i = 0; i < s.n_spinorbitals; ++i) {
      out.push_back({kind, s.kind == ParticleKind::Boson ? s.n_particles : 1, int(k)});
    }
  }
  return out;
}

// Kronecker-product matrix restricted to the basis rows and columns.
RealMatrix oracle_matrix(const SpinOrbitalIndexing& indexing, const IntegralTable& t,
                         const ConfigurationBasis& basis) {
  auto sites = sites_of(indexing);
  auto full = oracle::hamiltonian(sites, t.one_body, t.two_body);
  const auto n = Eigen::Index(basis.size());
  RealMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      auto a = oracle::fock_index(sites, basis[std::size_t(i)].occupations);
      auto b = oracle::fock_index(sites, basis[std::size_t(j)].occupations);
      EXPECT_NEAR(full(a, b).imag(), 0.0, 1e-14);
      out(i, j) = full(a, b).real();
    }
  }
  return out;
}

IntegralTable random_table(const SpinOrbitalIndexing& indexing, std::mt19937_64& rng,
                           double density) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  IntegralTable t;
  const int n = indexing.total();
  for (int p = 1; p <= n; ++p) {
    for (int q = p; q <= n; ++q) {
      if (!keep(rng)) continue;
      const double v = u(rng);
      t.one_body[{p, q}] = v;
      t.one_body[{q, p}] = v;
    }
  }
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q)
      for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s) {
          if (!keep(rng)) continue;
          const double v = u(rng);
          t.two_body[{p, q, r, s}] = v;
          t.two_body[{r, s, p, q}] = v;
        }
  return t;
}

}  // namespace

TEST(build_indexing, electrons_and_proton) {
  auto ix = build_indexing({fermions(2, 2), nucleus(4, "proton")});
  EXPECT_EQ(ix.starts(), (std::vector<int>{1, 3}));
  EXPECT_EQ(ix.total(), 6);
}

TEST(build_indexing, single_boson_class) {
  auto ix = build_indexing({bosons(3, 2)});
  EXPECT_EQ(ix.starts(), (std::vector<int>{1}));
  EXPECT_EQ(ix.total(), 2);
}

TEST(build_indexing, fermions_moved_first) {
  auto ix = build_indexing({bosons(1, 2), fermions(1, 3)});
  // Fermion block 1..3, bosons 4..5.
  EXPECT_EQ(ix.spec(0).kind, ParticleKind::Fermion);
  EXPECT_EQ(ix.starts(), (std::vector<int>{1, 1 + 3}));
  EXPECT_EQ(ix.total(), 3 + 2);
}

TEST(build_indexing, partition_and_stability) {
  auto ix = build_indexing({nucleus(2, "A"), bosons(2, 3, "b"), fermions(1, 2, "e1"),
                            nucleus(1, "B"), fermions(2, 4, "e2")});
  std::vector<std::string> labels;
  for (const auto& c : ix.classes()) labels.push_back(c.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"e1", "e2", "A", "b", "B"}));
  int expected_start = 1;
  for (std::size_t k = 0; k < ix.class_count(); ++k) {
    EXPECT_EQ(ix.start(k), expected_start);
    for (int i = 0; i < ix.spec(k).n_spinorbitals; ++i) {
      EXPECT_EQ(ix.class_of(expected_start + i), k);
      EXPECT_EQ(ix.local_index(expected_start + i), i);
    }
    expected_start += ix.spec(k).n_spinorbitals;
  }
  EXPECT_EQ(ix.total(), expected_start - 1);
}

TEST(build_indexing, rejects_bad_classes) {
  EXPECT_THROW(build_indexing({}), UsageError);
  EXPECT_THROW(build_indexing({fermions(3, 2)}), UsageError);
  EXPECT_THROW(build_indexing({{ParticleKind::Distinguishable, 2, 2, "x"}}), UsageError);
  EXPECT_THROW(build_indexing({bosons(1, 0)}), UsageError);
  EXPECT_THROW(build_indexing({bosons(-1, 2)}), UsageError);
  EXPECT_THROW(build_indexing({bosons(1, 2, "x"), bosons(1, 2, "x")}), UsageError);
}

TEST(assemble_hamiltonian, empty_table) {
  auto ix = build_indexing({fermions(1, 2)});
  auto h = assemble_hamiltonian({}, ix);
  EXPECT_EQ(h.term_count(), 0u);
  auto m = build_matrix(h, enumerate_configurations(ix)).to_dense();
  EXPECT_EQ(max_abs(m), 0.0);
}

TEST(assemble_hamiltonian, number_operator) {
  auto ix = build_indexing({fermions(0, 1)});
  IntegralTable t;
  t.one_body[{1, 1}] = -1.0;
  auto h = assemble_hamiltonian(t, ix);
  EXPECT_EQ(h.term_count(), 1u);
  auto basis = enumerate_configurations(ix, BasisConstraint::unconstrained(ix));
  ASSERT_EQ(basis.size(), 2u);
  // Descending order: |1> first.
  EXPECT_EQ(basis[0], config({1}));
  auto m = build_matrix(h, basis).to_dense();
  EXPECT_EQ(m(0, 0), -1.0);
  EXPECT_EQ(m(1, 1), 0.0);
  EXPECT_EQ(m(0, 1), 0.0);
}

TEST(assemble_hamiltonian, h2_like_term_count_matches_file) {
  auto text = *bundled_toy("toy_h2_like");
  std::size_t nonzero_lines = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || (line[0] != 'h' && line[0] != 'V')) continue;
    if (std::stod(line.substr(line.find_last_of(' ') + 1)) != 0.0) ++nonzero_lines;
  }
  auto sys = parse_system(text);
  EXPECT_EQ(assemble_hamiltonian(sys.integrals, sys.indexing).term_count(), nonzero_lines);
}

TEST(assemble_hamiltonian, rejects_non_hermitian_and_bad_indices) {
  auto ix = build_indexing({fermions(1, 2)});
  IntegralTable t;
  t.one_body[{1, 2}] = 0.5;
  EXPECT_THROW(assemble_hamiltonian(t, ix), NumericalError);
  t.one_body[{2, 1}] = 0.5;
  EXPECT_NO_THROW(assemble_hamiltonian(t, ix));
  t.one_body[{2, 1}] = 0.5 + 1e-11;
  EXPECT_NO_THROW(assemble_hamiltonian(t, ix));
  t.one_body[{3, 3}] = 1.0;
  EXPECT_THROW(assemble_hamiltonian(t, ix), UsageError);
}

TEST(apply_ladder, annihilate_empty) {
  auto ix = build_indexing({fermions(1, 2)});
  EXPECT_TRUE(apply_ladder(ix, LadderKind::Annihilate, 1, config({0, 1})).is_zero());
  EXPECT_EQ(apply_ladder(ix, LadderKind::Annihilate, 1, config({0, 1})).coefficient, 0.0);
}

TEST(apply_ladder, boson_create_sqrt) {
  auto ix = build_indexing({bosons(3, 1)});
  auto r = apply_ladder(ix, LadderKind::Create, 1, config({1}));
  EXPECT_DOUBLE_EQ(r.coefficient, std::sqrt(2.0));
  EXPECT_EQ(*r.configuration, config({2}));
}

TEST(apply_ladder, boson_create_at_bound) {
  auto ix = build_indexing({bosons(3, 2)});
  EXPECT_TRUE(apply_ladder(ix, LadderKind::Create, 2, config({0, 3})).is_zero());
}

TEST(apply_ladder, fermion_sign_matches_jw_matrices) {
  // a+_2 on |1,0> in a two-orbital class, from explicit 4x4 matrices.
  std::vector<oracle::Site> sites{{'f'}, {'f'}};
  auto a2 = oracle::create(sites, 1);
  const auto col = oracle::fock_index(sites, {1, 0});
  const auto row = oracle::fock_index(sites, {1, 1});
  const double expected = a2(row, col).real();
  ASSERT_EQ(std::abs(expected), 1.0);

  auto ix = build_indexing({fermions(2, 2)});
  auto r = apply_ladder(ix, LadderKind::Create, 2, config({1, 0}));
  EXPECT_EQ(r.coefficient, expected);
  EXPECT_EQ(r.coefficient, -1.0);
  EXPECT_EQ(*r.configuration, config({1, 1}));
}

TEST(apply_ladder, no_sign_across_classes_or_for_nuclei) {
  auto ix = build_indexing({fermions(1, 1, "e1"), fermions(1, 1, "e2"), nucleus(2, "n")});
  EXPECT_EQ(apply_ladder(ix, LadderKind::Create, 2, config({1, 0, 0, 0})).coefficient, 1.0);
  EXPECT_EQ(apply_ladder(ix, LadderKind::Create, 4, config({1, 1, 0, 0})).coefficient, 1.0);
  EXPECT_EQ(apply_ladder(ix, LadderKind::Annihilate, 4, config({1, 1, 1, 1})).coefficient,
            1.0);
}

TEST(enumerate_configurations, one_electron_two_orbitals) {
  auto ix = build_indexing({fermions(1, 2)});
  auto basis = enumerate_configurations(ix);
  ASSERT_EQ(basis.size(), 2u);
  EXPECT_EQ(basis[0], config({1, 0}));
  EXPECT_EQ(basis[1], config({0, 1}));
}

TEST(enumerate_configurations, sz_zero_two_electrons) {
  auto ix = build_indexing({fermions(2, 4)});
  auto c = BasisConstraint::fixed(ix);
  c.sz_zero[0] = true;
  auto basis = enumerate_configurations(ix, c);
  // One alpha among 2 alpha orbitals times one beta among 2 beta orbitals.
  EXPECT_EQ(basis.size(), 2u * 2u);
  for (const auto& s : basis) {
    EXPECT_EQ(s[1] + s[3], 1);
    EXPECT_EQ(s[2] + s[4], 1);
  }
}

TEST(enumerate_configurations, stars_and_bars) {
  auto ix = build_indexing({bosons(2, 2)});
  auto basis = enumerate_configurations(ix);
  ASSERT_EQ(basis.size(), 3u);
  EXPECT_EQ(basis[0], config({2, 0}));
  EXPECT_EQ(basis[1], config({1, 1}));
  EXPECT_EQ(basis[2], config({0, 2}));
}

TEST(enumerate_configurations, sizes_match_counting_formulas) {
  auto binom = [](int n, int k) {
    double c = 1;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return static_cast<std::size_t>(std::lround(c));
  };
  for (int n_orb = 1; n_orb <= 6; ++n_orb) {
    for (int n = 0; n <= n_orb; ++n) {
      auto ix = build_indexing({fermions(n, n_orb)});
      EXPECT_EQ(enumerate_configurations(ix).size(), binom(n_orb, n));
      auto ib = build_indexing({bosons(n, n_orb)});
      EXPECT_EQ(enumerate_configurations(ib).size(), binom(n + n_orb - 1, n));
    }
  }
  auto mixed = build_indexing({fermions(2, 4), nucleus(3, "A"), bosons(2, 2)});
  EXPECT_EQ(enumerate_configurations(mixed).size(), 6u * 3u * 3u);
  auto c = BasisConstraint::unconstrained(mixed);
  EXPECT_EQ(enumerate_configurations(mixed, c).size(), 16u * 8u * 9u);
}

TEST(enumerate_configurations, errors) {
  auto ix = build_indexing({fermions(1, 4)});
  auto c = BasisConstraint::fixed(ix);
  c.sz_zero[0] = true;
  EXPECT_THROW(enumerate_configurations(ix, c), UsageError);
  auto odd = build_indexing({bosons(2, 1)});
  auto c2 = BasisConstraint::fixed(odd);
  c2.sz_zero[0] = true;
  EXPECT_THROW(enumerate_configurations(odd, c2), UsageError);
  auto c3 = BasisConstraint::fixed(ix);
  c3.particle_numbers[0] = 5;
  EXPECT_THROW(enumerate_configurations(ix, c3), UsageError);
}

TEST(build_matrix, boson_number_operator) {
  auto ix = build_indexing({bosons(2, 1)});
  IntegralTable t;
  t.one_body[{1, 1}] = 0.7;
  auto basis = enumerate_configurations(ix, BasisConstraint::unconstrained(ix));
  auto m = build_matrix(assemble_hamiltonian(t, ix), basis).to_dense();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    EXPECT_DOUBLE_EQ(m(Eigen::Index(i), Eigen::Index(i)), 0.7 * basis[i][1]);
  }
  EXPECT_DOUBLE_EQ(m.trace(), 0.7 * (0 + 1 + 2));
}

TEST(build_matrix, polaron_matches_kronecker_oracle) {
  auto sys = parse_system(*bundled_toy("toy_polaron"));
  auto h = assemble_hamiltonian(sys.integrals, sys.indexing);
  for (auto c : {BasisConstraint::fixed(sys.indexing),
                 BasisConstraint::unconstrained(sys.indexing)}) {
    auto basis = enumerate_configurations(sys.indexing, c);
    auto m = build_matrix(h, basis).to_dense();
    EXPECT_LE(max_abs(m - oracle_matrix(sys.indexing, sys.integrals, basis)), 1e-14);
  }
}

TEST(build_matrix, h2_like_matches_kronecker_oracle) {
  auto sys = parse_system(*bundled_toy("toy_h2_like"));
  auto h = assemble_hamiltonian(sys.integrals, sys.indexing);
  auto basis = enumerate_configurations(sys.indexing);
  auto m = build_matrix(h, basis).to_dense();
  EXPECT_LE(max_abs(m - oracle_matrix(sys.indexing, sys.integrals, basis)), 1e-14);
}

TEST(build_matrix, random_mixed_tables_match_oracle) {
  std::mt19937_64 rng(7);
  auto ix = build_indexing({bosons(2, 2, "b"), fermions(1, 3, "e"), nucleus(2, "n")});
  for (int trial = 0; trial < 5; ++trial) {
    auto t = random_table(ix, rng, 0.08);
    auto h = assemble_hamiltonian(t, ix);
    for (auto c : {BasisConstraint::fixed(ix), BasisConstraint::unconstrained(ix)}) {
      auto basis = enumerate_configurations(ix, c);
      auto m = build_matrix(h, basis).to_dense();
      EXPECT_LE(max_abs(m - oracle_matrix(ix, t, basis)), 1e-12) << "trial " << trial;
      EXPECT_EQ(max_abs(m - m.transpose()), 0.0);
    }
  }
}

TEST(build_matrix, sparse_storage_above_limit) {
  auto ix = build_indexing({fermions(2, 6)});
  IntegralTable t;
  for (int p = 1; p <= 6; ++p) t.one_body[{p, p}] = p;
  auto basis = enumerate_configurations(ix);
  auto m = build_matrix(assemble_hamiltonian(t, ix), basis, {4});
  EXPECT_FALSE(m.is_dense());
  EXPECT_EQ(m.dimension(), 15);
  auto d = build_matrix(assemble_hamiltonian(t, ix), basis);
  EXPECT_TRUE(d.is_dense());
  EXPECT_EQ(max_abs(m.to_dense() - d.dense()), 0.0);
}

TEST(exact_spectrum, small_examples) {
  RealMatrix a(2, 2);
  a << 0, 0, 0, -1;
  auto s = exact_spectrum(a);
  EXPECT_EQ(s.values(0), -1.0);
  EXPECT_EQ(s.values(1), 0.0);
  RealMatrix x(2, 2);
  x << 0, 1, 1, 0;
  auto sx = exact_spectrum(x);
  EXPECT_NEAR(sx.values(0), -1.0, 1e-15);
  EXPECT_NEAR(sx.values(1), 1.0, 1e-15);
  RealMatrix bad(2, 2);
  bad << 0, 1, 0, 0;
  EXPECT_THROW(exact_spectrum(bad), NumericalError);
}

TEST(exact_spectrum, toy_ground_energies_match_power_iteration) {
  for (const char* name : {"toy_polaron", "toy_h2_like", "toy_boson_pair"}) {
    auto sys = parse_system(*bundled_toy(name));
    auto m = build_matrix(assemble_hamiltonian(sys.integrals, sys.indexing),
                          enumerate_configurations(sys.indexing))
                 .to_dense();
    auto s = exact_spectrum(m);
    EXPECT_NEAR(s.values(0), oracle::ground_energy_power(m), 1e-8) << name;
    // Ascending order and orthonormal eigenvectors.
    for (Eigen::Index i = 1; i < s.size(); ++i) EXPECT_LE(s.values(i - 1), s.values(i));
    EXPECT_LE(max_abs(s.vectors.transpose() * s.vectors -
                      RealMatrix::Identity(s.size(), s.size())),
              1e-12);
  }
}
