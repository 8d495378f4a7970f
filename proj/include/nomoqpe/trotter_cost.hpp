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

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nomoqpe/error.hpp"
#include "nomoqpe/hamiltonian.hpp"
#include "nomoqpe/indexing.hpp"
#include "nomoqpe/linalg.hpp"
#include "nomoqpe/propagator.hpp"
#include "nomoqpe/qubit_mapping.hpp"

namespace nomoqpe {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Block structure of V = a+_p a+_q a_s a_r + a+_r a+_s a_q a_p
// ---------------------------------------------------------------------------

/// (f_p, f_q, f_r, f_s) with f_p, f_r <= n1 and f_q, f_s <= n2.
struct Occupation4 {
  int fp = 0, fq = 0, fr = 0, fs = 0;

  auto operator<=>(const Occupation4&) const = default;

  int delta1() const { return fq - fp; }
  int delta2() const { return fs - fr; }
  int sigma1() const { return fq + fp; }
  int sigma2() const { return fs + fr; }
  int sigma() const { return sigma1() + sigma2(); }
  int delta() const { return sigma2() - sigma1(); }
};

/// Quantities V conserves; they label its invariant subspaces.
struct BlockLabel {
  int delta1 = 0, delta2 = 0, sigma = 0;
  auto operator<=>(const BlockLabel&) const = default;
};

inline BlockLabel label_of(const Occupation4& x) {
  return {x.delta1(), x.delta2(), x.sigma()};
}

struct Block {
  BlockLabel label;
  std::vector<Occupation4> members;  // ascending Delta

  int dimension() const { return static_cast<int>(members.size()); }
  /// Smallest Delta in the block.
  int delta0() const { return members.front().delta(); }
};

struct BlockStructure {
  int n1 = 0, n2 = 0;
  std::vector<Block> blocks;           // ordered by label
  std::map<int, std::int64_t> histogram;  // d -> number of d-dimensional blocks

  std::int64_t state_count() const {
    std::int64_t total = 0;
    for (const auto& [d, c] : histogram) total += d * c;
    return total;
  }
  int max_dimension() const { return histogram.empty() ? 0 : histogram.rbegin()->first; }
  std::int64_t count(int d) const {
    auto it = histogram.find(d);
    return it == histogram.end() ? 0 : it->second;
  }
};

inline constexpr std::int64_t kMaxBlockStates = 1000000;

inline std::int64_t box_size(int n1, int n2) {
  const std::int64_t a = n1 + 1, b = n2 + 1;
  return a * a * b * b;
}

namespace detail {

inline bool in_box(const Occupation4& x, int n1, int n2) {
  return x.fp >= 0 && x.fr >= 0 && x.fq >= 0 && x.fs >= 0 && x.fp <= n1 &&
         x.fr <= n1 && x.fq <= n2 && x.fs <= n2;
}

// The state a+_p a+_q a_s a_r moves x to.
inline Occupation4 raised(const Occupation4& x) {
  return {x.fp + 1, x.fq + 1, x.fr - 1, x.fs - 1};
}
inline Occupation4 lowered(const Occupation4& x) {
  return {x.fp - 1, x.fq - 1, x.fr + 1, x.fs + 1};
}

inline void check_box_guard(int n1, int n2, std::int64_t limit) {
  if (n1 < 0 || n2 < 0) throw UsageError("occupation bounds must be non-negative");
  if (box_size(n1, n2) > limit) {
    throw NumericalError("(n1+1)^2 (n2+1)^2 = " + std::to_string(box_size(n1, n2)) +
                         " exceeds the size guard " + std::to_string(limit));
  }
}

}  // namespace detail

/// Brute-force block decomposition: follows every chain x, x+s, x+2s, ...
/// with s = (+1,+1,-1,-1) through the occupation box. This is the reference
/// the closed forms below are checked against.
inline BlockStructure enumerate_blocks(int n1, int n2) {
  detail::check_box_guard(n1, n2, kMaxBlockStates);
  BlockStructure out;
  out.n1 = n1;
  out.n2 = n2;
  for (int fp = 0; fp <= n1; ++fp) {
    for (int fq = 0; fq <= n2; ++fq) {
      for (int fr = 0; fr <= n1; ++fr) {
        for (int fs = 0; fs <= n2; ++fs) {
          Occupation4 start{fp, fq, fr, fs};
          if (detail::in_box(detail::lowered(start), n1, n2)) continue;
          Block block;
          block.label = label_of(start);
          for (Occupation4 x = start; detail::in_box(x, n1, n2); x = detail::raised(x)) {
            if (label_of(x) != block.label) {
              throw VerificationError("chain left its conserved label");
            }
            block.members.push_back(x);
          }
          // Raising lowers Delta by 4; store ascending Delta.
          std::reverse(block.members.begin(), block.members.end());
          out.blocks.push_back(std::move(block));
        }
      }
    }
  }
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const Block& a, const Block& b) { return a.label < b.label; });
  for (std::size_t i = 1; i < out.blocks.size(); ++i) {
    if (out.blocks[i].label == out.blocks[i - 1].label) {
      throw VerificationError("two chains share one label");
    }
  }
  for (const auto& b : out.blocks) ++out.histogram[b.dimension()];
  return out;
}

/// Closed-form number of d-dimensional blocks, read as
/// p_d = -delta_{z,0} (|n1-n2| - 1)^2 + 2 [(|n1-n2|^2 + 1) + 6 z (|n1-n2| + z)]
/// with z = min(n1, n2) + 1 - d.
inline std::int64_t block_count_formula(int n1, int n2, int d) {
  if (n1 < 0 || n2 < 0) throw UsageError("occupation bounds must be non-negative");
  const int dmax = std::min(n1, n2) + 1;
  if (d < 1 || d > dmax) {
    throw UsageError("block dimension " + std::to_string(d) + " outside 1.." +
                     std::to_string(dmax));
  }
  const std::int64_t a = std::abs(n1 - n2);
  const std::int64_t z = dmax - d;
  std::int64_t p = 2 * ((a * a + 1) + 6 * z * (a + z));
  if (z == 0) p -= (a - 1) * (a - 1);
  return p;
}

/// 12(n+1-d) + 2 - delta_{n+1,d}: the equal-bound special case as printed.
/// Kept for comparison; disagrees with the enumeration for n >= 2.
inline std::int64_t printed_equal_bound_count(int n, int d) {
  return 12 * static_cast<std::int64_t>(n + 1 - d) + 2 - (d == n + 1 ? 1 : 0);
}

/// n1 n2 (n1 + n2 + 1): the printed subspace count. Kept for comparison; the
/// enumeration gives a different M_{S,0}.
inline std::int64_t printed_subspace_count(int n1, int n2) {
  return static_cast<std::int64_t>(n1) * n2 * (n1 + n2 + 1);
}

/// N_g(n, m) = -y/15 + xy(x+y)/3 + 2x^2y^3/3 - xy^4/3 + y^5/15 with
/// x = max(n,m)+1, y = min(n,m)+1, evaluated exactly.
inline BigInt gate_count_ng(int n, int m) {
  if (n < 0 || m < 0) throw UsageError("N_g needs non-negative arguments");
  const BigInt x = std::max(n, m) + 1;
  const BigInt y = std::min(n, m) + 1;
  const BigInt fifteen_ng = -y + 5 * x * y * (x + y) + 10 * x * x * y * y * y -
                            5 * x * y * y * y * y + y * y * y * y * y;
  if (fifteen_ng % 15 != 0) {
    throw VerificationError("N_g(" + std::to_string(n) + "," + std::to_string(m) +
                           ") is not an integer");
  }
  return fifteen_ng / 15;
}

/// M_{S,s} = sum_d d^s p_d from the enumeration. For s = 1 and 2 the closed
/// forms (n1+1)^2 (n2+1)^2 and N_g(n1, n2) are checked as well.
inline BigInt moment_sums(const BlockStructure& blocks, int s) {
  if (s < 0 || s > 3) throw UsageError("moment order must lie in 0..3");
  BigInt total = 0;
  for (const auto& [d, count] : blocks.histogram) {
    BigInt term = count;
    for (int i = 0; i < s; ++i) term *= d;
    total += term;
  }
  if (s == 1 && total != BigInt(box_size(blocks.n1, blocks.n2))) {
    throw VerificationError("M_S,1 differs from the register dimension");
  }
  if (s == 2 && total != gate_count_ng(blocks.n1, blocks.n2)) {
    throw VerificationError("M_S,2 differs from N_g");
  }
  return total;
}

inline BigInt moment_sums(int n1, int n2, int s) {
  return moment_sums(enumerate_blocks(n1, n2), s);
}

// ---------------------------------------------------------------------------
// Sum/difference register transform and adder-subtractor emulation
// ---------------------------------------------------------------------------

/// Classical model of the adder-subtractor gate on inputs of widths wa, wb:
/// both outputs are width max(wa, wb) + 1, the difference in two's
/// complement.
struct AsgOutput {
  std::uint64_t sum_bits = 0;
  std::uint64_t difference_bits = 0;  // (b - a) mod 2^width
  int width = 0;
};

inline std::uint64_t width_mask(int width) {
  return width >= 64 ? ~0ull : ((1ull << width) - 1);
}

inline std::int64_t to_signed(std::uint64_t bits, int width) {
  if (width == 0) return 0;
  const std::uint64_t sign = 1ull << (width - 1);
  return (bits & sign) ? static_cast<std::int64_t>(bits) - static_cast<std::int64_t>(sign << 1)
                       : static_cast<std::int64_t>(bits);
}

inline AsgOutput asg_forward(std::uint64_t a, std::uint64_t b, int wa, int wb) {
  if (a > width_mask(wa) || b > width_mask(wb)) {
    throw UsageError("adder-subtractor input exceeds its register width");
  }
  AsgOutput out;
  out.width = std::max(wa, wb) + 1;
  out.sum_bits = (a + b) & width_mask(out.width);
  out.difference_bits = (b - a) & width_mask(out.width);
  return out;
}

/// Recovers (a, b); nullopt for output pairs no input produces.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> asg_inverse(
    const AsgOutput& out, int wa, int wb) {
  const std::int64_t sum = static_cast<std::int64_t>(out.sum_bits);
  const std::int64_t diff = to_signed(out.difference_bits, out.width);
  if (((sum - diff) & 1) != 0) return std::nullopt;
  const std::int64_t a = (sum - diff) / 2, b = (sum + diff) / 2;
  if (a < 0 || b < 0) return std::nullopt;
  if (static_cast<std::uint64_t>(a) > width_mask(wa) ||
      static_cast<std::uint64_t>(b) > width_mask(wb)) {
    return std::nullopt;
  }
  return std::make_pair(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
}

/// Register and ancilla widths of the sum/difference transform circuit.
struct TransformWidths {
  int q1 = 0, q2 = 0, q = 0;
  int delta1_register = 0;   // Q + 1
  int delta2_register = 0;   // Q + 1
  int delta_register = 0;    // Q + 2
  int sigma_register = 0;    // Q + 2
  int asg_ancilla_width = 0;  // |Q1 - Q2| + 2, for each of two kets
  int asg_ancilla_kets = 2;
  int second_stage_ancilla = 2;
  int first_stage_ancilla = 0;  // 2 |Q1 - Q2| + 4
  int recovery_register = 0;    // R = 2 |Q1 - Q2| + 6
  int add_working_qubits = 1;   // extra qubit on the Delta register for ADD
};

inline TransformWidths transform_widths(int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw UsageError("occupation bounds must be non-negative");
  TransformWidths w;
  w.q1 = compact_width(n1);
  w.q2 = compact_width(n2);
  w.q = std::max(w.q1, w.q2);
  w.delta1_register = w.delta2_register = w.q + 1;
  w.delta_register = w.sigma_register = w.q + 2;
  const int gap = std::abs(w.q1 - w.q2);
  w.asg_ancilla_width = gap + 2;
  w.first_stage_ancilla = w.asg_ancilla_kets * w.asg_ancilla_width;
  w.recovery_register = 2 * gap + 6;
  return w;
}

/// |f_p, f_q, f_r, f_s> -> |Sigma1, Delta1, Delta2, Sigma2> -> |Delta, Delta1,
/// Delta2, Sigma>.
struct TransformedRegisters {
  int delta = 0, delta1 = 0, delta2 = 0, sigma = 0;
  int sigma1 = 0, sigma2 = 0;
  auto operator<=>(const TransformedRegisters&) const = default;
};

inline TransformedRegisters register_transform(const Occupation4& x, int n1, int n2) {
  if (!detail::in_box(x, n1, n2)) throw UsageError("occupations outside their bounds");
  const auto w = transform_widths(n1, n2);
  // Stage 1 pads the narrower input to Q bits.
  auto pq = asg_forward(static_cast<std::uint64_t>(x.fp), static_cast<std::uint64_t>(x.fq),
                        w.q, w.q);
  auto rs = asg_forward(static_cast<std::uint64_t>(x.fr), static_cast<std::uint64_t>(x.fs),
                        w.q, w.q);
  // Stage 2 combines the two sums.
  auto total = asg_forward(pq.sum_bits, rs.sum_bits, pq.width, rs.width);
  TransformedRegisters out;
  out.sigma1 = static_cast<int>(pq.sum_bits);
  out.delta1 = static_cast<int>(to_signed(pq.difference_bits, pq.width));
  out.sigma2 = static_cast<int>(rs.sum_bits);
  out.delta2 = static_cast<int>(to_signed(rs.difference_bits, rs.width));
  out.sigma = static_cast<int>(total.sum_bits);
  out.delta = static_cast<int>(to_signed(total.difference_bits, total.width));
  if (pq.width != w.delta1_register || total.width != w.delta_register) {
    throw VerificationError("adder-subtractor output widths disagree with the circuit");
  }
  return out;
}

inline Occupation4 inverse_register_transform(const TransformedRegisters& t, int n1,
                                              int n2) {
  const auto w = transform_widths(n1, n2);
  AsgOutput total{static_cast<std::uint64_t>(t.sigma) & width_mask(w.sigma_register),
                  static_cast<std::uint64_t>(t.delta) & width_mask(w.delta_register),
                  w.delta_register};
  auto sums = asg_inverse(total, w.q + 1, w.q + 1);
  if (!sums) throw UsageError("(Delta, Sigma) pair has no preimage");
  AsgOutput pq{sums->first, static_cast<std::uint64_t>(t.delta1) & width_mask(w.q + 1),
               w.q + 1};
  AsgOutput rs{sums->second, static_cast<std::uint64_t>(t.delta2) & width_mask(w.q + 1),
               w.q + 1};
  auto a = asg_inverse(pq, w.q, w.q);
  auto b = asg_inverse(rs, w.q, w.q);
  if (!a || !b) throw UsageError("(Delta_i, Sigma_i) pair has no preimage");
  Occupation4 x{static_cast<int>(a->first), static_cast<int>(a->second),
                static_cast<int>(b->first), static_cast<int>(b->second)};
  if (!detail::in_box(x, n1, n2)) throw UsageError("preimage outside the occupation box");
  return x;
}

// ---------------------------------------------------------------------------
// Block-diagonal exponential
// ---------------------------------------------------------------------------

/// <y| V |x> for the 4-index boson term.
inline double four_index_element(const Occupation4& y, const Occupation4& x) {
  if (y == detail::raised(x)) {
    return std::sqrt(static_cast<double>((x.fp + 1) * (x.fq + 1) * x.fr * x.fs));
  }
  if (y == detail::lowered(x)) {
    return std::sqrt(static_cast<double>(x.fp * x.fq * (x.fr + 1) * (x.fs + 1)));
  }
  return 0.0;
}

/// V on the physical states of a compact-encoded p, r (bound n1) and q, s
/// (bound n2) register, built through the qubit mapping. `states` receives
/// the occupation tuple of every row.
inline RealMatrix four_index_matrix(int n1, int n2, std::vector<Occupation4>& states) {
  auto indexing = build_indexing({{ParticleKind::Boson, n1, 2, "pr"},
                                  {ParticleKind::Boson, n2, 2, "qs"}});
  // Global orbitals: p = 1, r = 2, q = 3, s = 4.
  const int p = 1, r = 2, q = 3, s = 4;
  auto layout = layout_qubits(indexing, {Encoding::CompactBoson, Encoding::CompactBoson});
  auto a = [&](LadderKind k, int i) { return map_ladder(k, i, layout); };
  using enum LadderKind;
  QubitOperator v = a(Create, p) * a(Create, q) * a(Annihilate, s) * a(Annihilate, r);
  v += a(Create, r) * a(Create, s) * a(Annihilate, q) * a(Annihilate, p);

  auto basis = enumerate_configurations(indexing, BasisConstraint::unconstrained(indexing));
  auto encoded = layout.encode_all(basis);
  if (v.leakage(encoded) > 1e-12) {
    throw VerificationError("physical subspace not invariant under V");
  }
  ComplexMatrix m = v.restricted(encoded);
  if (max_abs(m.imag()) > 0.0) throw VerificationError("V acquired an imaginary part");
  states.clear();
  for (const auto& c : basis) states.push_back({c[p], c[q], c[r], c[s]});
  return m.real();
}

struct BlockExponentialCheck {
  /// max |dense exp(i tau Phi V) - block-wise exponential|
  double residual = 0.0;
  /// max |V_xy| over pairs with different labels
  double off_label = 0.0;
  /// every nonzero V_xy inside a block joins states whose Delta differs by 4
  bool delta_steps = true;
  /// enumerated blocks carry constant labels
  bool labels_constant = true;
  std::size_t block_count = 0;
};

inline BlockExponentialCheck verify_block_exponential(int n1, int n2, double phi,
                                                      double tau) {
  detail::check_box_guard(n1, n2, 4096);
  std::vector<Occupation4> states;
  RealMatrix v = four_index_matrix(n1, n2, states);
  std::map<Occupation4, Eigen::Index> position;
  for (std::size_t i = 0; i < states.size(); ++i) {
    position[states[i]] = static_cast<Eigen::Index>(i);
  }

  BlockExponentialCheck out;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (v(i, j) == 0.0) continue;
      const auto& x = states[static_cast<std::size_t>(j)];
      const auto& y = states[static_cast<std::size_t>(i)];
      if (label_of(x) != label_of(y)) {
        out.off_label = std::max(out.off_label, std::abs(v(i, j)));
      } else if (std::abs(x.delta() - y.delta()) != 4) {
        out.delta_steps = false;
      }
    }
  }

  ComplexMatrix dense = exponentiate(exact_spectrum(v), tau * phi);

  auto structure = enumerate_blocks(n1, n2);
  out.block_count = structure.blocks.size();
  ComplexMatrix blockwise = ComplexMatrix::Zero(v.rows(), v.cols());
  for (const auto& block : structure.blocks) {
    const int d = block.dimension();
    RealMatrix vb(d, d);
    for (int a = 0; a < d; ++a) {
      if (label_of(block.members[static_cast<std::size_t>(a)]) != block.label) {
        out.labels_constant = false;
      }
      for (int b = 0; b < d; ++b) {
        vb(a, b) = four_index_element(block.members[static_cast<std::size_t>(a)],
                                      block.members[static_cast<std::size_t>(b)]);
      }
    }
    ComplexMatrix ab = exponentiate(exact_spectrum(vb), tau * phi);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        blockwise(position.at(block.members[static_cast<std::size_t>(a)]),
                  position.at(block.members[static_cast<std::size_t>(b)])) = ab(a, b);
      }
    }
  }
  out.residual = max_abs(dense - blockwise);
  return out;
}

// ---------------------------------------------------------------------------
// Trotter-step cost
// ---------------------------------------------------------------------------

enum class CostMapping {
  Direct,             // direct boson mapping
  Compact,            // compact mapping with N_g(n_k, n_l)
  CompactSimplified,  // compact mapping, equal n: n^5 and n^2
};

inline std::string_view to_string(CostMapping m) {
  switch (m) {
    case CostMapping::Direct: return "direct";
    case CostMapping::Compact: return "compact";
    case CostMapping::CompactSimplified: return "compact-simplified";
  }
  return "?";
}

enum class InteractionCategory { FermionFermion, BosonBoson, FermionBoson };

inline std::string_view to_string(InteractionCategory c) {
  switch (c) {
    case InteractionCategory::FermionFermion: return "fermion-fermion";
    case InteractionCategory::BosonBoson: return "boson-boson";
    case InteractionCategory::FermionBoson: return "fermion-boson";
  }
  return "?";
}

/// One summand (class pair k <= l) of the Trotter-step cost, a unit-constant
/// count: the asymptotic formula evaluated with all constants set to one and
/// natural logarithms.
struct CostTerm {
  InteractionCategory category = InteractionCategory::FermionFermion;
  std::size_t k = 0, l = 0;
  std::string formula;
  long double value = 0;
  /// Exact value for logarithm-free summands.
  std::optional<BigInt> exact;
  /// Boson pairs: sum_i d_i^2 for one 4-index term from the enumeration, and
  /// the classical precomputation estimate M_{S,3}.
  std::optional<BigInt> block_sum_d2;
  std::optional<BigInt> classical_precompute;
  /// N_g(n_k, n_l), or N_g(1, n_l) for fermion-boson pairs (compact only).
  std::optional<BigInt> ng;
};

struct CostReport {
  CostMapping mapping = CostMapping::Compact;
  std::vector<CostTerm> terms;
  long double fermion_fermion = 0, boson_boson = 0, fermion_boson = 0;
  BigInt boson_boson_exact = 0;
  int qubits_direct = 0;
  int qubits_compact = 0;

  long double total() const { return fermion_fermion + boson_boson + fermion_boson; }
};

/// Evaluates the single Trotter-step cost sums over class pairs. Fermionic
/// classes use the Bravyi-Kitaev scaling; bosonic and distinguishable classes
/// (n_k = 1) form the second group.
inline CostReport trotter_step_cost(const SpinOrbitalIndexing& indexing,
                                    CostMapping mapping) {
  CostReport out;
  out.mapping = mapping;
  std::vector<std::size_t> fermions, others;
  for (std::size_t k = 0; k < indexing.class_count(); ++k) {
    const auto& s = indexing.spec(k);
    (s.kind == ParticleKind::Fermion ? fermions : others).push_back(k);
    out.qubits_direct += s.kind == ParticleKind::Boson
                             ? s.n_spinorbitals * (s.n_particles + 1)
                             : s.n_spinorbitals;
    out.qubits_compact += s.kind == ParticleKind::Boson
                              ? s.n_spinorbitals * compact_width(s.n_particles)
                              : s.n_spinorbitals;
  }
  auto occupancy = [&](std::size_t k) {
    const auto& s = indexing.spec(k);
    return s.kind == ParticleKind::Boson ? s.n_particles : 1;
  };
  auto orbitals = [&](std::size_t k) {
    return static_cast<long double>(indexing.spec(k).n_spinorbitals);
  };
  auto make_term = [](InteractionCategory c, std::size_t k, std::size_t l) {
    CostTerm t;
    t.category = c;
    t.k = k;
    t.l = l;
    return t;
  };
  if (mapping == CostMapping::CompactSimplified) {
    for (auto k : others) {
      if (occupancy(k) != occupancy(others.front())) {
        throw UsageError("compact-simplified cost needs equal n_k for all boson classes");
      }
    }
  }

  for (std::size_t a = 0; a < fermions.size(); ++a) {
    for (std::size_t b = a; b < fermions.size(); ++b) {
      const auto k = fermions[a], l = fermions[b];
      const long double nk = orbitals(k), nl = orbitals(l);
      CostTerm t = make_term(InteractionCategory::FermionFermion, k, l);
      t.formula = "N_k^2 N_l^2 ln(N_k N_l)";
      t.value = nk * nk * nl * nl * std::log(nk * nl);
      out.fermion_fermion += t.value;
      out.terms.push_back(std::move(t));
    }
  }

  for (std::size_t a = 0; a < others.size(); ++a) {
    for (std::size_t b = a; b < others.size(); ++b) {
      const auto k = others[a], l = others[b];
      const int nk = occupancy(k), nl = occupancy(l);
      const BigInt big_nk = indexing.spec(k).n_spinorbitals;
      const BigInt big_nl = indexing.spec(l).n_spinorbitals;
      CostTerm t = make_term(InteractionCategory::BosonBoson, k, l);
      BigInt factor;
      switch (mapping) {
        case CostMapping::Direct:
          t.formula = "n_k^2 n_l^2 N_k N_l^2";
          factor = BigInt(nk) * nk * nl * nl;
          break;
        case CostMapping::Compact:
          t.formula = "N_g(n_k,n_l) N_k N_l^2";
          t.ng = gate_count_ng(nk, nl);
          factor = *t.ng;
          break;
        case CostMapping::CompactSimplified:
          t.formula = "n^5 N_k N_l^2";
          factor = BigInt(nk) * nk * nk * nk * nk;
          break;
      }
      t.exact = factor * big_nk * big_nl * big_nl;
      t.value = t.exact->convert_to<long double>();
      if (box_size(nk, nl) <= kMaxBlockStates) {
        auto blocks = enumerate_blocks(nk, nl);
        t.block_sum_d2 = moment_sums(blocks, 2);
        t.classical_precompute = moment_sums(blocks, 3);
      }
      out.boson_boson += t.value;
      out.boson_boson_exact += *t.exact;
      out.terms.push_back(std::move(t));
    }
  }

  for (auto k : fermions) {
    for (auto l : others) {
      const int nl = occupancy(l);
      const long double big_nk = orbitals(k), big_nl = orbitals(l);
      CostTerm t = make_term(InteractionCategory::FermionBoson, k, l);
      long double factor = 0;
      switch (mapping) {
        case CostMapping::Direct:
          t.formula = "n_l^2 ln(N_k) N_l N_k^2";
          factor = static_cast<long double>(nl) * nl;
          break;
        case CostMapping::Compact:
          t.formula = "N_g(1,n_l) ln(N_k) N_l N_k^2";
          t.ng = gate_count_ng(1, nl);
          factor = t.ng->convert_to<long double>();
          break;
        case CostMapping::CompactSimplified:
          t.formula = "n^2 ln(N_k) N_l N_k^2";
          factor = static_cast<long double>(nl) * nl;
          break;
      }
      t.value = factor * std::log(big_nk) * big_nl * big_nk * big_nk;
      out.fermion_boson += t.value;
      out.terms.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace nomoqpe
