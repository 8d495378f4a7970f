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
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nomoqpe/error.hpp"
#include "nomoqpe/hamiltonian.hpp"
#include "nomoqpe/indexing.hpp"
#include "nomoqpe/linalg.hpp"

namespace nomoqpe {

// Qubit basis convention: |0> = unoccupied, |1> = occupied. SigmaMinus takes
// |0> to |1> and is the creation half of every mapping; SigmaPlus takes |1>
// to |0>. Basis index bit q holds qubit q.
enum class Primitive : std::uint8_t {
  I,
  X,
  Y,
  Z,
  SigmaPlus,   // |0><1|
  SigmaMinus,  // |1><0|
  Proj0,       // |0><0|
  Proj1,       // |1><1|
};

inline constexpr std::array<Primitive, 8> kAllPrimitives = {
    Primitive::I,         Primitive::X,          Primitive::Y,
    Primitive::Z,         Primitive::SigmaPlus,  Primitive::SigmaMinus,
    Primitive::Proj0,     Primitive::Proj1};

inline std::string_view to_string(Primitive p) {
  switch (p) {
    case Primitive::I: return "I";
    case Primitive::X: return "X";
    case Primitive::Y: return "Y";
    case Primitive::Z: return "Z";
    case Primitive::SigmaPlus: return "S+";
    case Primitive::SigmaMinus: return "S-";
    case Primitive::Proj0: return "P0";
    case Primitive::Proj1: return "P1";
  }
  return "?";
}

/// 2x2 matrix of a primitive, m[row][col].
inline std::array<std::array<Complex, 2>, 2> primitive_matrix(Primitive p) {
  const Complex i{0.0, 1.0};
  switch (p) {
    case Primitive::I: return {{{1, 0}, {0, 1}}};
    case Primitive::X: return {{{0, 1}, {1, 0}}};
    case Primitive::Y: return {{{0, -i}, {i, 0}}};
    case Primitive::Z: return {{{1, 0}, {0, -1}}};
    case Primitive::SigmaPlus: return {{{0, 1}, {0, 0}}};
    case Primitive::SigmaMinus: return {{{0, 0}, {1, 0}}};
    case Primitive::Proj0: return {{{1, 0}, {0, 0}}};
    case Primitive::Proj1: return {{{0, 0}, {0, 1}}};
  }
  return {};
}

/// Image of basis bit `in` under a primitive: output bit and amplitude.
/// Every primitive has at most one nonzero entry per column.
struct BitImage {
  int bit;
  Complex amplitude;
};

inline std::optional<BitImage> apply_primitive(Primitive p, int in) {
  auto m = primitive_matrix(p);
  for (int out = 0; out < 2; ++out) {
    if (m[out][in] != Complex{}) return BitImage{out, m[out][in]};
  }
  return std::nullopt;
}

/// a * b as scalar * primitive; nullopt when the product vanishes.
inline std::optional<std::pair<Complex, Primitive>> multiply(Primitive a,
                                                             Primitive b) {
  auto ma = primitive_matrix(a);
  auto mb = primitive_matrix(b);
  std::array<std::array<Complex, 2>, 2> m{};
  bool any = false;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      m[r][c] = ma[r][0] * mb[0][c] + ma[r][1] * mb[1][c];
      any = any || m[r][c] != Complex{};
    }
  }
  if (!any) return std::nullopt;
  for (Primitive p : kAllPrimitives) {
    auto mp = primitive_matrix(p);
    std::optional<Complex> scale;
    bool ok = true;
    for (int r = 0; r < 2 && ok; ++r) {
      for (int c = 0; c < 2 && ok; ++c) {
        if ((mp[r][c] == Complex{}) != (m[r][c] == Complex{})) {
          ok = false;
        } else if (mp[r][c] != Complex{}) {
          Complex s = m[r][c] / mp[r][c];
          if (scale && std::abs(*scale - s) > 1e-15) ok = false;
          scale = s;
        }
      }
    }
    if (ok && scale) return std::make_pair(*scale, p);
  }
  throw NumericalError("primitive product outside the closed set");
}

inline Primitive adjoint(Primitive p) {
  switch (p) {
    case Primitive::SigmaPlus: return Primitive::SigmaMinus;
    case Primitive::SigmaMinus: return Primitive::SigmaPlus;
    default: return p;
  }
}

/// weight * (tensor product of the listed factors); unlisted qubits carry I.
struct QubitTerm {
  Complex weight{1.0, 0.0};
  std::vector<std::pair<int, Primitive>> factors;  // sorted by qubit, no I
};

/// Weighted sum of primitive tensor products on a fixed register.
class QubitOperator {
 public:
  QubitOperator() = default;
  explicit QubitOperator(int n_qubits) : n_qubits_(n_qubits) {}

  static QubitOperator identity(int n_qubits) {
    QubitOperator op(n_qubits);
    op.terms_.push_back({});
    return op;
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<QubitTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add_term(Complex weight, std::vector<std::pair<int, Primitive>> factors) {
    std::sort(factors.begin(), factors.end());
    std::vector<std::pair<int, Primitive>> clean;
    for (auto& f : factors) {
      if (f.first < 0 || f.first >= n_qubits_) {
        throw UsageError("qubit " + std::to_string(f.first) + " outside register");
      }
      if (!clean.empty() && clean.back().first == f.first) {
        throw UsageError("repeated qubit in tensor product");
      }
      if (f.second != Primitive::I) clean.push_back(f);
    }
    terms_.push_back({weight, std::move(clean)});
  }

  QubitOperator& operator+=(const QubitOperator& other) {
    check_register(other);
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
  }

  QubitOperator& operator*=(Complex s) {
    for (auto& t : terms_) t.weight *= s;
    return *this;
  }

  friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) {
    a += b;
    return a;
  }

  friend QubitOperator operator*(Complex s, QubitOperator a) {
    a *= s;
    return a;
  }

  friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
    a.check_register(b);
    QubitOperator out(a.n_qubits_);
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        if (auto t = multiply_terms(ta, tb)) out.terms_.push_back(std::move(*t));
      }
    }
    return out.simplified();
  }

  QubitOperator adjoint() const {
    QubitOperator out(n_qubits_);
    for (const auto& t : terms_) {
      QubitTerm a{std::conj(t.weight), t.factors};
      for (auto& f : a.factors) f.second = nomoqpe::adjoint(f.second);
      out.terms_.push_back(std::move(a));
    }
    return out;
  }

  /// Merges duplicate tensor products and drops vanishing weights. Term order
  /// is the lexicographic order of the factor lists.
  QubitOperator simplified(double drop_below = 1e-15) const {
    std::map<std::vector<std::pair<int, Primitive>>, Complex> merged;
    for (const auto& t : terms_) merged[t.factors] += t.weight;
    QubitOperator out(n_qubits_);
    for (auto& [factors, w] : merged) {
      if (std::abs(w) > drop_below) out.terms_.push_back({w, factors});
    }
    return out;
  }

  /// op |basis>, as a list of (basis index, amplitude) with duplicates summed.
  std::map<std::uint64_t, Complex> apply(std::uint64_t basis) const {
    std::map<std::uint64_t, Complex> out;
    for (const auto& t : terms_) {
      if (auto img = apply_term(t, basis)) out[img->first] += img->second;
    }
    return out;
  }

  /// Full 2^n sparse matrix. Refuses registers wider than `qubit_cap`.
  SparseComplex materialize(int qubit_cap = 22) const {
    if (n_qubits_ > qubit_cap) {
      throw NumericalError("refusing to materialize " + std::to_string(n_qubits_) +
                           " qubits (cap " + std::to_string(qubit_cap) + ")");
    }
    const auto dim = static_cast<std::uint64_t>(1) << n_qubits_;
    std::vector<Eigen::Triplet<Complex>> entries;
    for (std::uint64_t col = 0; col < dim; ++col) {
      for (const auto& t : terms_) {
        if (auto img = apply_term(t, col)) {
          entries.emplace_back(static_cast<Eigen::Index>(img->first),
                               static_cast<Eigen::Index>(col), img->second);
        }
      }
    }
    SparseComplex m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
  }

  ComplexMatrix to_dense(int qubit_cap = 12) const {
    return ComplexMatrix(materialize(qubit_cap));
  }

  /// <states_i| op |states_j> on a list of computational basis states.
  ComplexMatrix restricted(const std::vector<std::uint64_t>& states) const {
    std::map<std::uint64_t, Eigen::Index> position;
    for (std::size_t i = 0; i < states.size(); ++i) {
      position.emplace(states[i], static_cast<Eigen::Index>(i));
    }
    const auto n = static_cast<Eigen::Index>(states.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (const auto& [row, amp] : apply(states[static_cast<std::size_t>(j)])) {
        auto it = position.find(row);
        if (it != position.end()) m(it->second, j) += amp;
      }
    }
    return m;
  }

  /// Total |amplitude| that op sends from `states` to basis states outside
  /// it. Zero means the span of `states` is invariant.
  double leakage(const std::vector<std::uint64_t>& states) const {
    std::map<std::uint64_t, bool> inside;
    for (auto s : states) inside.emplace(s, true);
    double out = 0.0;
    for (auto s : states) {
      for (const auto& [row, amp] : apply(s)) {
        if (!inside.count(row)) out += std::abs(amp);
      }
    }
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& t : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + std::to_string(t.weight.real()) + "," +
           std::to_string(t.weight.imag()) + ")";
      for (const auto& [q, p] : t.factors) {
        s += " " + std::string(nomoqpe::to_string(p)) + std::to_string(q);
      }
    }
    return s.empty() ? "0" : s;
  }

 private:
  void check_register(const QubitOperator& other) const {
    if (other.n_qubits_ != n_qubits_) {
      throw UsageError("qubit operators act on different registers");
    }
  }

  static std::optional<QubitTerm> multiply_terms(const QubitTerm& a,
                                                 const QubitTerm& b) {
    QubitTerm out{a.weight * b.weight, {}};
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
      if (j == b.factors.size() ||
          (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
        out.factors.push_back(a.factors[i++]);
      } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
        out.factors.push_back(b.factors[j++]);
      } else {
        auto prod = multiply(a.factors[i].second, b.factors[j].second);
        if (!prod) return std::nullopt;
        out.weight *= prod->first;
        if (prod->second != Primitive::I) {
          out.factors.emplace_back(a.factors[i].first, prod->second);
        }
        ++i;
        ++j;
      }
    }
    return out;
  }

  static std::optional<std::pair<std::uint64_t, Complex>> apply_term(
      const QubitTerm& t, std::uint64_t basis) {
    Complex amp = t.weight;
    for (const auto& [q, p] : t.factors) {
      const int in = static_cast<int>((basis >> q) & 1u);
      auto img = apply_primitive(p, in);
      if (!img) return std::nullopt;
      amp *= img->amplitude;
      if (img->bit != in) basis ^= static_cast<std::uint64_t>(1) << q;
    }
    return std::make_pair(basis, amp);
  }

  int n_qubits_ = 0;
  std::vector<QubitTerm> terms_;
};

enum class Encoding {
  JordanWigner,
  DirectBoson,
  CompactBoson,
  DistinguishableOneQubit,
  BravyiKitaev,  // reserved; rejected by layout_qubits
};

inline std::string_view to_string(Encoding e) {
  switch (e) {
    case Encoding::JordanWigner: return "jordan-wigner";
    case Encoding::DirectBoson: return "direct";
    case Encoding::CompactBoson: return "compact";
    case Encoding::DistinguishableOneQubit: return "one-qubit";
    case Encoding::BravyiKitaev: return "bravyi-kitaev";
  }
  return "?";
}

/// ceil(log2(n + 1)); 0 for n = 0.
inline int compact_width(int n) {
  int w = 0;
  while ((1 << w) < n + 1) ++w;
  return w;
}

/// Qubit assignment. Orbitals are laid out in global order, each orbital's
/// qubits contiguous, orbital 1 on the lowest qubits.
class QubitLayout {
 public:
  struct Range {
    int first;
    int width;
  };

  const SpinOrbitalIndexing& indexing() const { return indexing_; }
  Encoding encoding(std::size_t k) const { return encodings_.at(k); }
  const std::vector<Encoding>& encodings() const { return encodings_; }
  Encoding encoding_of(int p) const { return encodings_[indexing_.class_of(p)]; }
  Range range(int p) const {
    indexing_.class_of(p);
    return ranges_[static_cast<std::size_t>(p - 1)];
  }
  int total_qubits() const { return total_; }

  /// Computational basis state of a configuration.
  std::uint64_t encode(const Configuration& c) const {
    if (static_cast<int>(c.size()) != indexing_.total()) {
      throw UsageError("configuration length does not match the layout");
    }
    std::uint64_t out = 0;
    for (int p = 1; p <= indexing_.total(); ++p) {
      const int f = c[p];
      if (f < 0 || f > indexing_.max_occupation(p)) {
        throw UsageError("occupation out of bounds at orbital " + std::to_string(p));
      }
      const auto r = range(p);
      std::uint64_t bits = 0;
      switch (encoding_of(p)) {
        case Encoding::DirectBoson:
          bits = static_cast<std::uint64_t>(1) << f;
          break;
        default:
          bits = static_cast<std::uint64_t>(f);
          break;
      }
      out |= bits << r.first;
    }
    return out;
  }

  /// Inverse of encode; nullopt for unphysical basis states.
  std::optional<Configuration> decode(std::uint64_t state) const {
    Configuration c;
    c.occupations.assign(static_cast<std::size_t>(indexing_.total()), 0);
    for (int p = 1; p <= indexing_.total(); ++p) {
      const auto r = range(p);
      const std::uint64_t mask =
          r.width == 64 ? ~0ull : ((static_cast<std::uint64_t>(1) << r.width) - 1);
      const std::uint64_t bits = (state >> r.first) & mask;
      int f = 0;
      if (encoding_of(p) == Encoding::DirectBoson) {
        if (std::popcount(bits) != 1) return std::nullopt;
        f = std::countr_zero(bits);
      } else {
        f = static_cast<int>(bits);
      }
      if (f > indexing_.max_occupation(p)) return std::nullopt;
      c.occupations[static_cast<std::size_t>(p - 1)] = f;
    }
    if (total_ < 64 && (state >> total_) != 0) return std::nullopt;
    return c;
  }

  std::vector<std::uint64_t> encode_all(const ConfigurationBasis& basis) const {
    std::vector<std::uint64_t> out;
    out.reserve(basis.size());
    for (const auto& c : basis) out.push_back(encode(c));
    return out;
  }

 private:
  friend QubitLayout layout_qubits(const SpinOrbitalIndexing&, std::vector<Encoding>);

  SpinOrbitalIndexing indexing_;
  std::vector<Encoding> encodings_;
  std::vector<Range> ranges_;
  int total_ = 0;
};

inline bool encoding_admissible(ParticleKind kind, Encoding e) {
  switch (kind) {
    case ParticleKind::Fermion:
      return e == Encoding::JordanWigner || e == Encoding::BravyiKitaev;
    case ParticleKind::Boson:
      return e == Encoding::DirectBoson || e == Encoding::CompactBoson;
    case ParticleKind::Distinguishable:
      return e == Encoding::DistinguishableOneQubit;
  }
  return false;
}

inline QubitLayout layout_qubits(const SpinOrbitalIndexing& indexing,
                                 std::vector<Encoding> choices) {
  if (choices.size() != indexing.class_count()) {
    throw UsageError("one encoding per particle class required");
  }
  QubitLayout out;
  out.indexing_ = indexing;
  int next = 0;
  for (std::size_t k = 0; k < choices.size(); ++k) {
    const auto& spec = indexing.spec(k);
    if (!encoding_admissible(spec.kind, choices[k])) {
      throw UsageError("encoding " + std::string(to_string(choices[k])) +
                       " cannot represent " + std::string(to_string(spec.kind)) +
                       " class " + spec.label);
    }
    if (choices[k] == Encoding::BravyiKitaev) {
      throw NotImplementedError("Bravyi-Kitaev encoding");
    }
    int width = 1;
    if (choices[k] == Encoding::DirectBoson) width = spec.n_particles + 1;
    if (choices[k] == Encoding::CompactBoson) width = compact_width(spec.n_particles);
    for (int i = 0; i < spec.n_spinorbitals; ++i) {
      out.ranges_.push_back({next, width});
      next += width;
    }
  }
  out.encodings_ = std::move(choices);
  out.total_ = next;
  if (out.total_ > 63) throw UsageError("register wider than 63 qubits");
  return out;
}

/// Natural encoding for every class, compact for bosons.
inline std::vector<Encoding> default_encodings(const SpinOrbitalIndexing& indexing,
                                               Encoding boson = Encoding::CompactBoson) {
  std::vector<Encoding> out;
  for (const auto& s : indexing.classes()) {
    switch (s.kind) {
      case ParticleKind::Fermion: out.push_back(Encoding::JordanWigner); break;
      case ParticleKind::Boson: out.push_back(boson); break;
      case ParticleKind::Distinguishable:
        out.push_back(Encoding::DistinguishableOneQubit);
        break;
    }
  }
  return out;
}

namespace detail {

// |a><b| on `width` qubits starting at `first`, least significant bit first.
inline std::vector<std::pair<int, Primitive>> ket_bra(int first, int width,
                                                      unsigned a, unsigned b) {
  std::vector<std::pair<int, Primitive>> out;
  for (int i = 0; i < width; ++i) {
    const unsigned x = (a >> i) & 1u, y = (b >> i) & 1u;
    Primitive p = x == 0 ? (y == 0 ? Primitive::Proj0 : Primitive::SigmaPlus)
                         : (y == 0 ? Primitive::SigmaMinus : Primitive::Proj1);
    out.emplace_back(first + i, p);
  }
  return out;
}

}  // namespace detail

/// Qubit image of a+_p or a_p.
inline QubitOperator map_ladder(LadderKind op, int p, const QubitLayout& layout) {
  const auto& indexing = layout.indexing();
  const std::size_t k = indexing.class_of(p);
  const auto& spec = indexing.spec(k);
  const auto r = layout.range(p);
  const bool create = op == LadderKind::Create;
  QubitOperator out(layout.total_qubits());

  switch (layout.encoding(k)) {
    case Encoding::JordanWigner: {
      std::vector<std::pair<int, Primitive>> f;
      for (int i = indexing.start(k); i < p; ++i) {
        f.emplace_back(layout.range(i).first, Primitive::Z);
      }
      f.emplace_back(r.first, create ? Primitive::SigmaMinus : Primitive::SigmaPlus);
      out.add_term(1.0, std::move(f));
      break;
    }
    case Encoding::DistinguishableOneQubit:
      out.add_term(1.0, {{r.first, create ? Primitive::SigmaMinus : Primitive::SigmaPlus}});
      break;
    case Encoding::DirectBoson:
      for (int j = 0; j < spec.n_particles; ++j) {
        const double w = std::sqrt(static_cast<double>(j + 1));
        if (create) {
          out.add_term(w, {{r.first + j, Primitive::SigmaPlus},
                           {r.first + j + 1, Primitive::SigmaMinus}});
        } else {
          out.add_term(w, {{r.first + j, Primitive::SigmaMinus},
                           {r.first + j + 1, Primitive::SigmaPlus}});
        }
      }
      break;
    case Encoding::CompactBoson: {
      const int n = spec.n_particles;
      for (int j = 0; j < n; ++j) {
        const double w = std::sqrt(static_cast<double>(j + 1));
        const unsigned lo = static_cast<unsigned>(j), hi = lo + 1;
        out.add_term(w, create ? detail::ket_bra(r.first, r.width, hi, lo)
                               : detail::ket_bra(r.first, r.width, lo, hi));
      }
      // Unused register values are left fixed.
      for (unsigned u = static_cast<unsigned>(n) + 1; u < (1u << r.width); ++u) {
        out.add_term(1.0, detail::ket_bra(r.first, r.width, u, u));
      }
      break;
    }
    case Encoding::BravyiKitaev:
      throw NotImplementedError("Bravyi-Kitaev encoding");
  }
  return out;
}

/// Term-by-term image of a second-quantized Hamiltonian, duplicates merged.
inline QubitOperator map_hamiltonian(const SecondQuantizedHamiltonian& h,
                                     const QubitLayout& layout) {
  if (!(h.indexing() == layout.indexing())) {
    throw UsageError("Hamiltonian and layout use different indexings");
  }
  QubitOperator out(layout.total_qubits());
  for (const auto& term : h.terms()) {
    QubitOperator product = QubitOperator::identity(layout.total_qubits());
    for (const auto& op : term.ops) {
      product = product * map_ladder(op.kind, op.index, layout);
    }
    out += Complex(term.coefficient) * product;
  }
  return out.simplified();
}

/// Every implemented encoding assignment whose register fits in `qubit_cap`.
inline std::vector<std::vector<Encoding>> encoding_combinations(
    const SpinOrbitalIndexing& indexing, int qubit_cap) {
  std::vector<std::vector<Encoding>> out{{}};
  for (const auto& s : indexing.classes()) {
    std::vector<Encoding> options;
    switch (s.kind) {
      case ParticleKind::Fermion: options = {Encoding::JordanWigner}; break;
      case ParticleKind::Boson:
        options = {Encoding::DirectBoson, Encoding::CompactBoson};
        break;
      case ParticleKind::Distinguishable:
        options = {Encoding::DistinguishableOneQubit};
        break;
    }
    std::vector<std::vector<Encoding>> next;
    for (const auto& prefix : out) {
      for (auto e : options) {
        next.push_back(prefix);
        next.back().push_back(e);
      }
    }
    out = std::move(next);
  }
  std::erase_if(out, [&](const std::vector<Encoding>& c) {
    return layout_qubits(indexing, c).total_qubits() > qubit_cap;
  });
  return out;
}

struct MappingCheck {
  int qubits = 0;
  /// Norm of the part of the mapped operator that leaves the encoded basis.
  double leakage = 0.0;
  /// max |lambda_mapped - lambda_configuration| over the sorted spectra.
  double spectrum_difference = 0.0;
};

/// Compares the mapped operator on the encoded basis with the configuration
/// basis matrix.
inline MappingCheck check_mapping(const SecondQuantizedHamiltonian& h,
                                  const ConfigurationBasis& basis,
                                  const QubitLayout& layout) {
  MappingCheck out;
  out.qubits = layout.total_qubits();
  auto mapped = map_hamiltonian(h, layout);
  auto encoded = layout.encode_all(basis);
  out.leakage = mapped.leakage(encoded);
  auto reference = exact_spectrum(build_matrix(h, basis).to_dense());
  auto image = exact_spectrum(mapped.restricted(encoded));
  out.spectrum_difference = max_abs(image.values - reference.values);
  return out;
}

}  // namespace nomoqpe
