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

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nomoqpe/error.hpp"

namespace nomoqpe {

enum class ParticleKind { Fermion, Boson, Distinguishable };

inline std::string_view to_string(ParticleKind kind) {
  switch (kind) {
    case ParticleKind::Fermion:
      return "fermion";
    case ParticleKind::Boson:
      return "boson";
    case ParticleKind::Distinguishable:
      return "distinguishable";
  }
  return "?";
}

inline std::optional<ParticleKind> parse_particle_kind(std::string_view text) {
  if (text == "fermion") return ParticleKind::Fermion;
  if (text == "boson") return ParticleKind::Boson;
  if (text == "distinguishable") return ParticleKind::Distinguishable;
  return std::nullopt;
}

/// One kind of particle: how many there are and how many spin orbitals they
/// can occupy.
struct ParticleClassSpec {
  ParticleKind kind = ParticleKind::Fermion;
  int n_particles = 0;
  int n_spinorbitals = 1;
  std::string label;

  bool operator==(const ParticleClassSpec&) const = default;
};

/// Global spin-orbital numbering. Orbitals are numbered 1..N_T; class k owns
/// the contiguous block start(k) .. start(k) + N_k - 1, fermionic classes
/// first.
class SpinOrbitalIndexing {
 public:
  SpinOrbitalIndexing() = default;

  const std::vector<ParticleClassSpec>& classes() const { return classes_; }
  std::size_t class_count() const { return classes_.size(); }
  const ParticleClassSpec& spec(std::size_t k) const { return classes_.at(k); }

  /// 1-based first orbital of class k.
  int start(std::size_t k) const { return starts_.at(k); }
  const std::vector<int>& starts() const { return starts_; }

  /// N_T
  int total() const { return total_; }

  bool contains(int p) const { return p >= 1 && p <= total_; }

  std::size_t class_of(int p) const {
    if (!contains(p)) {
      throw UsageError("spin-orbital index " + std::to_string(p) +
                       " outside 1.." + std::to_string(total_));
    }
    return owner_[static_cast<std::size_t>(p - 1)];
  }

  const ParticleClassSpec& spec_of(int p) const { return classes_[class_of(p)]; }

  /// 0-based position of p inside its class.
  int local_index(int p) const { return p - starts_[class_of(p)]; }

  /// Largest occupation number orbital p may hold.
  int max_occupation(int p) const {
    const auto& s = spec_of(p);
    return s.kind == ParticleKind::Boson ? s.n_particles : 1;
  }

  std::optional<std::size_t> find_class(std::string_view label) const {
    for (std::size_t k = 0; k < classes_.size(); ++k) {
      if (classes_[k].label == label) return k;
    }
    return std::nullopt;
  }

  bool operator==(const SpinOrbitalIndexing&) const = default;

 private:
  friend SpinOrbitalIndexing build_indexing(std::vector<ParticleClassSpec>);

  std::vector<ParticleClassSpec> classes_;
  std::vector<int> starts_;
  std::vector<std::size_t> owner_;
  int total_ = 0;
};

/// Orders the classes fermions-first (stable within each group) and lays out
/// their orbital index blocks.
inline SpinOrbitalIndexing build_indexing(std::vector<ParticleClassSpec> classes) {
  if (classes.empty()) throw UsageError("at least one particle class required");
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto& c = classes[k];
    std::string name = c.label.empty() ? "#" + std::to_string(k + 1) : c.label;
    if (c.n_spinorbitals < 1) {
      throw UsageError("class " + name + ": n_spinorbitals must be positive");
    }
    if (c.n_particles < 0) {
      throw UsageError("class " + name + ": n_particles must be non-negative");
    }
    if (c.kind == ParticleKind::Distinguishable && c.n_particles != 1) {
      throw UsageError("class " + name +
                       ": distinguishable classes hold exactly one particle");
    }
    if (c.kind == ParticleKind::Fermion && c.n_particles > c.n_spinorbitals) {
      throw UsageError("class " + name + ": " + std::to_string(c.n_particles) +
                       " fermions do not fit in " +
                       std::to_string(c.n_spinorbitals) + " spin orbitals");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (!c.label.empty() && classes[j].label == c.label) {
        throw UsageError("duplicate class label " + c.label);
      }
    }
  }
  std::stable_partition(classes.begin(), classes.end(), [](const auto& c) {
    return c.kind == ParticleKind::Fermion;
  });

  SpinOrbitalIndexing out;
  out.classes_ = std::move(classes);
  int next = 1;
  for (std::size_t k = 0; k < out.classes_.size(); ++k) {
    out.starts_.push_back(next);
    for (int i = 0; i < out.classes_[k].n_spinorbitals; ++i) {
      out.owner_.push_back(k);
    }
    next += out.classes_[k].n_spinorbitals;
  }
  out.total_ = next - 1;
  return out;
}

}  // namespace nomoqpe
