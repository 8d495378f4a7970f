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

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nomoqpe/error.hpp"
#include "nomoqpe/hamiltonian.hpp"
#include "nomoqpe/indexing.hpp"
#include "nomoqpe/linalg.hpp"

// Text format, one record per line, `#` starts a comment:
//
//   format nomoqpe-system 1
//   class LABEL KIND n N        KIND: fermion | boson | distinguishable
//   emin X                      optional phase window
//   emax Y
//   h p q value                 one-body integral h_pq
//   V p q r s value             two-body integral V_pqrs
//
// Class lines come before integral records; fermion classes are declared
// first so that file indices are the global spin-orbital indices.
// Storing h_pq implies h_qp and V_pqrs implies V_rspq.

namespace nomoqpe {

inline constexpr int kSystemFormatVersion = 1;

struct SystemFile {
  int format_version = kSystemFormatVersion;
  SpinOrbitalIndexing indexing;
  IntegralTable integrals;
  std::optional<double> e_min, e_max;
  /// h and V lines in the file, before Hermitian completion.
  std::size_t record_count = 0;
  std::string source;
};

namespace detail {

struct Token {
  std::string_view text;
  int column = 0;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' &&
           line[j] != '#') {
      ++j;
    }
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

inline int parse_int_token(const Token& t, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    throw ParseError("expected an integer, got '" + std::string(t.text) + "'", line,
                     t.column);
  }
  return v;
}

inline double parse_real_token(const Token& t, int line) {
  std::string_view s = t.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("expected a finite real number, got '" + std::string(t.text) + "'",
                     line, t.column);
  }
  return v;
}

template <typename Key>
struct StoredEntry {
  double value = 0.0;
  int line = 0;
  bool explicit_entry = false;
};

template <typename Key>
void store_hermitian(std::map<Key, StoredEntry<Key>>& entries, const Key& key,
                     double value, int line, int column) {
  auto put = [&](const Key& k, bool is_explicit) {
    auto [it, inserted] = entries.try_emplace(k, StoredEntry<Key>{value, line, is_explicit});
    if (inserted) return;
    auto& e = it->second;
    if (is_explicit && e.explicit_entry) {
      throw ParseError("duplicate record " + key_string(k) + " (first on line " +
                           std::to_string(e.line) + ")",
                       line, column);
    }
    if (std::abs(e.value - value) > 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "record " << key_string(key) << " = " << value
          << " conflicts with the Hermitian partner on line " << e.line << " ("
          << e.value << ")";
      throw ParseError(msg.str(), line, column);
    }
    if (is_explicit) {
      e.explicit_entry = true;
      e.line = line;
    }
  };
  put(key, true);
  const Key other = IntegralTable::partner(key);
  if (other != key) put(other, false);
}

}  // namespace detail

inline SystemFile parse_system(std::string_view text, std::string source = "<text>") {
  SystemFile out;
  out.source = std::move(source);
  std::vector<ParticleClassSpec> classes;
  std::map<OneBodyKey, detail::StoredEntry<OneBodyKey>> one;
  std::map<TwoBodyKey, detail::StoredEntry<TwoBodyKey>> two;
  std::vector<std::pair<int, int>> pending_checks;  // (line, column) of index tokens
  bool have_format = false;
  bool seen_records = false;
  int total_orbitals = 0;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto tokens = detail::tokenize(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto& head = tokens[0];
    auto expect_count = [&](std::size_t n) {
      if (tokens.size() != n) {
        const int col = tokens.size() > n ? tokens[n].column : static_cast<int>(line.size()) + 1;
        throw ParseError("'" + std::string(head.text) + "' takes " + std::to_string(n - 1) +
                             " fields, found " + std::to_string(tokens.size() - 1),
                         line_no, col);
      }
    };
    auto index_token = [&](const detail::Token& t) {
      const int p = detail::parse_int_token(t, line_no);
      if (p < 1 || p > total_orbitals) {
        throw ParseError("index " + std::to_string(p) + " outside 1.." +
                             std::to_string(total_orbitals),
                         line_no, t.column);
      }
      return p;
    };

    if (head.text == "format") {
      expect_count(3);
      if (tokens[1].text != "nomoqpe-system") {
        throw ParseError("unknown format '" + std::string(tokens[1].text) + "'", line_no,
                         tokens[1].column);
      }
      out.format_version = detail::parse_int_token(tokens[2], line_no);
      if (out.format_version != kSystemFormatVersion) {
        throw ParseError("unsupported format version " + std::to_string(out.format_version),
                         line_no, tokens[2].column);
      }
      have_format = true;
    } else if (head.text == "class") {
      expect_count(5);
      if (seen_records) {
        throw ParseError("class declared after integral records", line_no, head.column);
      }
      ParticleClassSpec spec;
      spec.label = std::string(tokens[1].text);
      auto kind = parse_particle_kind(tokens[2].text);
      if (!kind) {
        throw ParseError("unknown particle kind '" + std::string(tokens[2].text) + "'",
                         line_no, tokens[2].column);
      }
      spec.kind = *kind;
      if (spec.kind == ParticleKind::Fermion && !classes.empty() &&
          classes.back().kind != ParticleKind::Fermion) {
        throw ParseError("fermion classes must be declared before other classes", line_no,
                         tokens[2].column);
      }
      spec.n_particles = detail::parse_int_token(tokens[3], line_no);
      spec.n_spinorbitals = detail::parse_int_token(tokens[4], line_no);
      if (spec.n_spinorbitals < 1) {
        throw ParseError("class needs at least one spin orbital", line_no, tokens[4].column);
      }
      total_orbitals += spec.n_spinorbitals;
      classes.push_back(std::move(spec));
    } else if (head.text == "emin" || head.text == "emax") {
      expect_count(2);
      const double v = detail::parse_real_token(tokens[1], line_no);
      (head.text == "emin" ? out.e_min : out.e_max) = v;
    } else if (head.text == "h") {
      expect_count(4);
      seen_records = true;
      OneBodyKey key{index_token(tokens[1]), index_token(tokens[2])};
      detail::store_hermitian(one, key, detail::parse_real_token(tokens[3], line_no), line_no,
                              head.column);
      ++out.record_count;
    } else if (head.text == "V") {
      expect_count(6);
      seen_records = true;
      TwoBodyKey key{index_token(tokens[1]), index_token(tokens[2]), index_token(tokens[3]),
                     index_token(tokens[4])};
      detail::store_hermitian(two, key, detail::parse_real_token(tokens[5], line_no), line_no,
                              head.column);
      ++out.record_count;
    } else {
      throw ParseError("unknown record '" + std::string(head.text) + "'", line_no,
                       head.column);
    }
    if (end == text.size()) break;
  }

  if (!have_format) throw ParseError("missing 'format nomoqpe-system 1' line");
  if (classes.empty()) throw ParseError("no particle classes declared");
  if (out.e_min && out.e_max && !(*out.e_min < *out.e_max)) {
    throw ParseError("emin must be smaller than emax");
  }
  try {
    out.indexing = build_indexing(classes);
  } catch (const UsageError& e) {
    throw ParseError(std::string("class declarations: ") + e.what());
  }
  for (const auto& [k, e] : one) out.integrals.one_body[k] = e.value;
  for (const auto& [k, e] : two) out.integrals.two_body[k] = e.value;
  return out;
}

inline SystemFile read_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open system file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_system(buffer.str(), path);
}

/// Configuration basis for a system: fixed particle numbers, optional Sz = 0
/// rule on the named classes.
inline ConfigurationBasis system_basis(const SpinOrbitalIndexing& indexing,
                                       const std::vector<std::string>& sz_zero_labels) {
  auto constraint = BasisConstraint::fixed(indexing);
  for (const auto& label : sz_zero_labels) {
    auto k = indexing.find_class(label);
    if (!k) throw UsageError("no class labelled '" + label + "'");
    constraint.sz_zero[*k] = true;
  }
  return enumerate_configurations(indexing, constraint);
}

// ---------------------------------------------------------------------------
// Initial guesses
// ---------------------------------------------------------------------------

/// ground | excited:K | det:OCCSTRING | file:PATH
struct GuessSpec {
  enum class Kind { Ground, Excited, Determinant, File };
  Kind kind = Kind::Ground;
  std::size_t excited = 0;
  std::string occupations;
  std::string path;
};

inline GuessSpec parse_guess_spec(std::string_view text) {
  GuessSpec g;
  if (text == "ground") return g;
  auto rest = [&](std::string_view prefix) -> std::optional<std::string_view> {
    if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
    return text.substr(prefix.size());
  };
  if (auto k = rest("excited:")) {
    g.kind = GuessSpec::Kind::Excited;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(k->data(), k->data() + k->size(), v);
    if (k->empty() || ec != std::errc() || ptr != k->data() + k->size()) {
      throw UsageError("guess 'excited:K' needs a non-negative integer K");
    }
    g.excited = v;
  } else if (auto d = rest("det:")) {
    g.kind = GuessSpec::Kind::Determinant;
    g.occupations = std::string(*d);
  } else if (auto f = rest("file:")) {
    g.kind = GuessSpec::Kind::File;
    g.path = std::string(*f);
    if (g.path.empty()) throw UsageError("guess 'file:PATH' needs a path");
  } else {
    throw UsageError("unknown guess '" + std::string(text) +
                     "' (ground | excited:K | det:OCCSTRING | file:PATH)");
  }
  return g;
}

/// Occupation string: one digit per spin orbital in global order.
inline Configuration parse_occupation_string(std::string_view s,
                                             const SpinOrbitalIndexing& indexing) {
  if (static_cast<int>(s.size()) != indexing.total()) {
    throw UsageError("occupation string needs " + std::to_string(indexing.total()) +
                     " digits, got " + std::to_string(s.size()));
  }
  Configuration c;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw UsageError("occupation string must be digits");
    c.occupations.push_back(ch - '0');
  }
  return c;
}

/// Normalized guess vector in the given basis.
template <typename Derived>
ComplexVector build_guess(const GuessSpec& spec, const ConfigurationBasis& basis,
                          const Eigen::MatrixBase<Derived>& hamiltonian,
                          const SpinOrbitalIndexing& indexing) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  ComplexVector v = ComplexVector::Zero(n);
  switch (spec.kind) {
    case GuessSpec::Kind::Ground:
    case GuessSpec::Kind::Excited: {
      auto s = exact_spectrum(hamiltonian);
      const auto k = static_cast<Eigen::Index>(spec.excited);
      if (k >= s.size()) {
        throw UsageError("excited:" + std::to_string(spec.excited) + " beyond the " +
                         std::to_string(s.size()) + " basis states");
      }
      v = s.vectors.col(k).template cast<Complex>();
      break;
    }
    case GuessSpec::Kind::Determinant: {
      auto c = parse_occupation_string(spec.occupations, indexing);
      auto i = basis.index_of(c);
      if (!i) throw UsageError("configuration " + spec.occupations + " is not in the basis");
      v(static_cast<Eigen::Index>(*i)) = 1.0;
      break;
    }
    case GuessSpec::Kind::File: {
      std::ifstream in(spec.path);
      if (!in) throw UsageError("cannot open guess file '" + spec.path + "'");
      std::string line;
      Eigen::Index i = 0;
      int line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        auto tokens = detail::tokenize(line);
        if (tokens.empty()) continue;
        if (tokens.size() > 2) {
          throw ParseError("amplitude line takes 're' or 're im'", line_no, tokens[2].column);
        }
        if (i >= n) throw ParseError("more amplitudes than basis states", line_no, 1);
        const double re = detail::parse_real_token(tokens[0], line_no);
        const double im = tokens.size() == 2 ? detail::parse_real_token(tokens[1], line_no) : 0.0;
        v(i++) = Complex(re, im);
      }
      if (i != n) {
        throw ParseError("guess file has " + std::to_string(i) + " amplitudes, basis has " +
                         std::to_string(n));
      }
      break;
    }
  }
  const double norm = v.norm();
  if (!(norm > 0.0)) throw NumericalError("guess vector is zero");
  return v / norm;
}

}  // namespace nomoqpe
