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

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "nomoqpe/error.hpp"
#include "nomoqpe/indexing.hpp"
#include "nomoqpe/linalg.hpp"

namespace nomoqpe {

using OneBodyKey = std::array<int, 2>;
using TwoBodyKey = std::array<int, 4>;

/// Real one- and two-body integrals over global (1-based) spin-orbital
/// indices. A usable table is Hermitian: h_pq = h_qp and V_pqrs = V_rspq.
struct IntegralTable {
  std::map<OneBodyKey, double> one_body;
  std::map<TwoBodyKey, double> two_body;

  bool empty() const { return one_body.empty() && two_body.empty(); }
  std::size_t size() const { return one_body.size() + two_body.size(); }

  static OneBodyKey partner(const OneBodyKey& k) { return {k[1], k[0]}; }
  static TwoBodyKey partner(const TwoBodyKey& k) {
    return {k[2], k[3], k[0], k[1]};
  }
};

enum class LadderKind { Create, Annihilate };

struct LadderOp {
  LadderKind kind;
  int index;  // global, 1-based

  bool operator==(const LadderOp&) const = default;
};

/// coefficient * ops[0] ops[1] ... ops[n-1]; ops act right to left.
struct HamiltonianTerm {
  double coefficient = 0.0;
  std::vector<LadderOp> ops;
};

/// sum_pq h_pq a+_p a_q + 1/2 sum_pqrs V_pqrs a+_p a+_q a_s a_r, one term per
/// nonzero integral entry.
class SecondQuantizedHamiltonian {
 public:
  SecondQuantizedHamiltonian() = default;
  SecondQuantizedHamiltonian(SpinOrbitalIndexing indexing,
                             std::vector<HamiltonianTerm> terms)
      : indexing_(std::move(indexing)), terms_(std::move(terms)) {}

  const SpinOrbitalIndexing& indexing() const { return indexing_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  /// L, the number of terms a Trotter step iterates over.
  std::size_t term_count() const { return terms_.size(); }

 private:
  SpinOrbitalIndexing indexing_;
  std::vector<HamiltonianTerm> terms_;
};

namespace detail {

template <typename Key>
void check_indices(const Key& key, const SpinOrbitalIndexing& indexing) {
  for (int p : key) {
    if (!indexing.contains(p)) {
      throw UsageError("integral index " + std::to_string(p) +
                       " outside 1.." + std::to_string(indexing.total()));
    }
  }
}

template <typename Key>
std::string key_string(const Key& key) {
  std::string s;
  for (int p : key) s += (s.empty() ? "" : ",") + std::to_string(p);
  return "(" + s + ")";
}

// Symmetrized copy of a table section; throws if a partner disagrees.
template <typename Key>
std::map<Key, double> hermitian_section(const std::map<Key, double>& section,
                                        const char* name) {
  std::map<Key, double> out;
  for (const auto& [key, value] : section) {
    Key other = IntegralTable::partner(key);
    auto it = section.find(other);
    double partner_value = it == section.end() ? 0.0 : it->second;
    if (std::abs(value - partner_value) > kInputHermiticityTol) {
      throw NumericalError(std::string("non-Hermitian ") + name + " integral " +
                           key_string(key) + " = " + std::to_string(value) +
                           " vs partner " + key_string(other) + " = " +
                           std::to_string(partner_value));
    }
    out[key] = 0.5 * (value + partner_value);
  }
  return out;
}

}  // namespace detail

/// Validates the table and turns every nonzero entry into an operator string.
inline SecondQuantizedHamiltonian assemble_hamiltonian(
    const IntegralTable& integrals, const SpinOrbitalIndexing& indexing) {
  for (const auto& [key, value] : integrals.one_body) {
    detail::check_indices(key, indexing);
  }
  for (const auto& [key, value] : integrals.two_body) {
    detail::check_indices(key, indexing);
  }
  auto one = detail::hermitian_section(integrals.one_body, "one-body");
  auto two = detail::hermitian_section(integrals.two_body, "two-body");

  std::vector<HamiltonianTerm> terms;
  terms.reserve(one.size() + two.size());
  for (const auto& [key, value] : one) {
    if (value == 0.0) continue;
    terms.push_back({value,
                     {{LadderKind::Create, key[0]},
                      {LadderKind::Annihilate, key[1]}}});
  }
  for (const auto& [key, value] : two) {
    if (value == 0.0) continue;
    const auto [p, q, r, s] = key;
    terms.push_back({0.5 * value,
                     {{LadderKind::Create, p},
                      {LadderKind::Create, q},
                      {LadderKind::Annihilate, s},
                      {LadderKind::Annihilate, r}}});
  }
  return SecondQuantizedHamiltonian(indexing, std::move(terms));
}

/// Occupation numbers f(p), stored 0-based (f[p - 1]).
struct Configuration {
  std::vector<int> occupations;

  int operator[](int p) const { return occupations[static_cast<std::size_t>(p - 1)]; }
  std::size_t size() const { return occupations.size(); }
  auto operator<=>(const Configuration&) const = default;
  bool operator==(const Configuration&) const = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int f : c.occupations) {
      h ^= static_cast<std::size_t>(f) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

/// Result of a ladder operator: a configuration with a nonzero coefficient,
/// or the annihilated state (no configuration, coefficient 0).
struct WeightedConfiguration {
  double coefficient = 0.0;
  std::optional<Configuration> configuration;

  bool is_zero() const { return !configuration.has_value(); }
  static WeightedConfiguration zero() { return {}; }
};

/// Applies a+_p or a_p to a configuration.
///
/// Fermions pick up (-1)^k, k the number of occupied orbitals of the same
/// class below p. Bosons use sqrt(f+1) / sqrt(f) and vanish past n_k.
/// Distinguishable particles toggle without sign.
inline WeightedConfiguration apply_ladder(const SpinOrbitalIndexing& indexing,
                                          LadderKind op, int p,
                                          const Configuration& c) {
  const std::size_t k = indexing.class_of(p);
  const auto& spec = indexing.spec(k);
  const int f = c[p];
  Configuration out = c;
  auto& slot = out.occupations[static_cast<std::size_t>(p - 1)];

  if (spec.kind == ParticleKind::Boson) {
    if (op == LadderKind::Create) {
      if (f >= spec.n_particles) return WeightedConfiguration::zero();
      slot = f + 1;
      return {std::sqrt(static_cast<double>(f + 1)), std::move(out)};
    }
    if (f == 0) return WeightedConfiguration::zero();
    slot = f - 1;
    return {std::sqrt(static_cast<double>(f)), std::move(out)};
  }

  if (op == LadderKind::Create ? f != 0 : f != 1) {
    return WeightedConfiguration::zero();
  }
  slot = op == LadderKind::Create ? 1 : 0;
  double sign = 1.0;
  if (spec.kind == ParticleKind::Fermion) {
    for (int i = indexing.start(k); i < p; ++i) {
      if (c[i] != 0) sign = -sign;
    }
  }
  return {sign, std::move(out)};
}

/// Applies an operator string right to left.
inline WeightedConfiguration apply_ladder_string(
    const SpinOrbitalIndexing& indexing, const std::vector<LadderOp>& ops,
    const Configuration& c) {
  WeightedConfiguration state{1.0, c};
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    auto next = apply_ladder(indexing, it->kind, it->index, *state.configuration);
    if (next.is_zero()) return next;
    next.coefficient *= state.coefficient;
    state = std::move(next);
  }
  return state;
}

/// Ordered configuration basis with O(1) lookup.
class ConfigurationBasis {
 public:
  ConfigurationBasis() = default;
  explicit ConfigurationBasis(std::vector<Configuration> states)
      : states_(std::move(states)) {
    lookup_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) lookup_.emplace(states_[i], i);
  }

  std::size_t size() const { return states_.size(); }
  const Configuration& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<Configuration>& states() const { return states_; }
  auto begin() const { return states_.begin(); }
  auto end() const { return states_.end(); }

  std::optional<std::size_t> index_of(const Configuration& c) const {
    auto it = lookup_.find(c);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<Configuration> states_;
  std::unordered_map<Configuration, std::size_t, ConfigurationHash> lookup_;
};

/// Per-class selection rules for enumerate_configurations. A missing particle
/// number leaves the class unconstrained (every occupation within bounds).
/// sz_zero interprets the class orbitals as interleaved (alpha, beta) pairs,
/// odd local index alpha, and keeps equal alpha and beta totals.
struct BasisConstraint {
  std::vector<std::optional<int>> particle_numbers;
  std::vector<bool> sz_zero;

  /// Fixed particle numbers n_k, no spin filter.
  static BasisConstraint fixed(const SpinOrbitalIndexing& indexing) {
    BasisConstraint c;
    for (const auto& s : indexing.classes()) c.particle_numbers.push_back(s.n_particles);
    c.sz_zero.assign(indexing.class_count(), false);
    return c;
  }

  /// Every occupation pattern within the per-orbital bounds.
  static BasisConstraint unconstrained(const SpinOrbitalIndexing& indexing) {
    BasisConstraint c;
    c.particle_numbers.assign(indexing.class_count(), std::nullopt);
    c.sz_zero.assign(indexing.class_count(), false);
    return c;
  }
};

namespace detail {

inline void enumerate_class(int orbitals, int bound, std::optional<int> total,
                            bool sz_zero, std::vector<int>& current,
                            std::vector<std::vector<int>>& out) {
  const int pos = static_cast<int>(current.size());
  if (pos == orbitals) {
    int sum = 0, alpha = 0, beta = 0;
    for (int i = 0; i < orbitals; ++i) {
      sum += current[i];
      (i % 2 == 0 ? alpha : beta) += current[i];
    }
    if (total && sum != *total) return;
    if (sz_zero && alpha != beta) return;
    out.push_back(current);
    return;
  }
  int used = 0;
  for (int f : current) used += f;
  int upper = bound;
  if (total) upper = std::min(upper, *total - used);
  // Descending so the output is in descending lexicographic order.
  for (int f = upper; f >= 0; --f) {
    current.push_back(f);
    enumerate_class(orbitals, bound, total, sz_zero, current, out);
    current.pop_back();
  }
}

}  // namespace detail

/// Deterministic basis in descending lexicographic order of the occupation
/// vector, e.g. {(1,0), (0,1)} for one particle in two orbitals.
inline ConfigurationBasis enumerate_configurations(
    const SpinOrbitalIndexing& indexing, const BasisConstraint& constraint) {
  const std::size_t K = indexing.class_count();
  if (constraint.particle_numbers.size() != K || constraint.sz_zero.size() != K) {
    throw UsageError("basis constraint must list every particle class");
  }
  std::vector<std::vector<std::vector<int>>> per_class(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& spec = indexing.spec(k);
    const int orbitals = spec.n_spinorbitals;
    const int bound = spec.kind == ParticleKind::Boson ? spec.n_particles : 1;
    const auto total = constraint.particle_numbers[k];
    const bool sz = constraint.sz_zero[k];
    const int alpha_orbitals = (orbitals + 1) / 2;
    const int beta_orbitals = orbitals / 2;
    const std::string name = "class " + spec.label;
    if (total) {
      if (*total < 0) throw UsageError(name + ": negative particle number");
      if (*total > orbitals * bound) {
        throw UsageError(name + ": " + std::to_string(*total) +
                         " particles exceed capacity " +
                         std::to_string(orbitals * bound));
      }
      if (sz) {
        if (*total % 2 != 0) {
          throw UsageError(name + ": Sz = 0 needs an even particle number, got " +
                           std::to_string(*total));
        }
        int half = *total / 2;
        if (half > std::min(alpha_orbitals, beta_orbitals) * bound) {
          throw UsageError(name + ": Sz = 0 infeasible for " +
                           std::to_string(*total) + " particles in " +
                           std::to_string(orbitals) + " orbitals");
        }
      }
    }
    std::vector<int> current;
    detail::enumerate_class(orbitals, bound, total, sz, current, per_class[k]);
    if (per_class[k].empty()) throw UsageError(name + ": empty configuration set");
  }

  std::vector<Configuration> states;
  std::vector<std::size_t> cursor(K, 0);
  while (true) {
    Configuration c;
    c.occupations.reserve(static_cast<std::size_t>(indexing.total()));
    for (std::size_t k = 0; k < K; ++k) {
      const auto& part = per_class[k][cursor[k]];
      c.occupations.insert(c.occupations.end(), part.begin(), part.end());
    }
    states.push_back(std::move(c));
    std::size_t k = K;
    while (k > 0) {
      --k;
      if (++cursor[k] < per_class[k].size()) break;
      cursor[k] = 0;
      if (k == 0) return ConfigurationBasis(std::move(states));
    }
  }
}

inline ConfigurationBasis enumerate_configurations(
    const SpinOrbitalIndexing& indexing) {
  return enumerate_configurations(indexing, BasisConstraint::fixed(indexing));
}

struct MatrixOptions {
  /// Bases up to this size are stored dense, larger ones sparse.
  std::size_t dense_limit = 4096;
};

/// A real symmetric Hamiltonian matrix in a configuration basis, dense or
/// coordinate-sparse.
class HamiltonianMatrix {
 public:
  HamiltonianMatrix() = default;
  explicit HamiltonianMatrix(RealMatrix dense) : storage_(std::move(dense)) {}
  explicit HamiltonianMatrix(SparseReal sparse) : storage_(std::move(sparse)) {}

  bool is_dense() const { return std::holds_alternative<RealMatrix>(storage_); }
  Eigen::Index dimension() const {
    return is_dense() ? std::get<RealMatrix>(storage_).rows()
                      : std::get<SparseReal>(storage_).rows();
  }
  const RealMatrix& dense() const { return std::get<RealMatrix>(storage_); }
  const SparseReal& sparse() const { return std::get<SparseReal>(storage_); }
  RealMatrix to_dense() const {
    return is_dense() ? dense() : RealMatrix(sparse());
  }

 private:
  std::variant<RealMatrix, SparseReal> storage_;
};

/// <basis_i| H |basis_j>. Terms leading outside the basis are dropped. The
/// result is symmetrized after checking the raw asymmetry is below 1e-12.
inline HamiltonianMatrix build_matrix(const SecondQuantizedHamiltonian& h,
                                      const ConfigurationBasis& basis,
                                      const MatrixOptions& options = {}) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (const auto& term : h.terms()) {
      auto image = apply_ladder_string(h.indexing(), term.ops,
                                       basis[static_cast<std::size_t>(j)]);
      if (image.is_zero()) continue;
      auto i = basis.index_of(*image.configuration);
      if (!i) continue;
      entries.emplace_back(static_cast<Eigen::Index>(*i), j,
                           term.coefficient * image.coefficient);
    }
  }
  SparseReal m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  SparseReal mt = m.transpose();
  SparseReal diff = m - mt;
  double defect = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseReal::InnerIterator it(diff, k); it; ++it) {
      defect = std::max(defect, std::abs(it.value()));
    }
  }
  if (defect > kSymmetrizedTol) {
    throw NumericalError("Hamiltonian matrix asymmetry " +
                         std::to_string(defect) + " exceeds 1e-12");
  }
  SparseReal sym = (m + mt) * 0.5;
  sym.prune(0.0);
  if (basis.size() <= options.dense_limit) {
    return HamiltonianMatrix(RealMatrix(sym));
  }
  return HamiltonianMatrix(std::move(sym));
}

}  // namespace nomoqpe
