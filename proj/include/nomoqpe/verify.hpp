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

#include <cstdint>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nomoqpe/hamiltonian.hpp"
#include "nomoqpe/qubit_mapping.hpp"
#include "nomoqpe/random.hpp"
#include "nomoqpe/toys.hpp"
#include "nomoqpe/trotter_cost.hpp"

namespace nomoqpe {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

template <typename Fn>
CheckResult run_check(std::string name, Fn&& fn) {
  CheckResult out{std::move(name), false, ""};
  try {
    std::ostringstream detail;
    out.passed = fn(detail);
    out.detail = detail.str();
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("exception: ") + e.what();
  }
  return out;
}

}  // namespace detail

/// Enumeration against p_d, the register dimension and N_g for all
/// 0 <= n1, n2 <= max_n.
inline CheckResult check_block_identities(int max_n = 6) {
  return detail::run_check("block identities", [&](std::ostream& os) {
    int pairs = 0;
    for (int n1 = 0; n1 <= max_n; ++n1) {
      for (int n2 = 0; n2 <= max_n; ++n2) {
        auto blocks = enumerate_blocks(n1, n2);
        for (int d = 1; d <= std::min(n1, n2) + 1; ++d) {
          if (blocks.count(d) != block_count_formula(n1, n2, d)) {
            os << "p_" << d << "(" << n1 << "," << n2 << "): enumerated " << blocks.count(d)
               << ", formula " << block_count_formula(n1, n2, d);
            return false;
          }
        }
        if (blocks.max_dimension() != std::min(n1, n2) + 1) {
          os << "largest block at (" << n1 << "," << n2 << ") has dimension "
             << blocks.max_dimension();
          return false;
        }
        moment_sums(blocks, 1);
        moment_sums(blocks, 2);
        ++pairs;
      }
    }
    os << pairs << " (n1,n2) pairs, p_d, M_S,1 and M_S,2 = N_g exact";
    return true;
  });
}

/// The printed equal-bound special case, n = 2, d = 1.
inline CheckResult check_printed_special_case() {
  return detail::run_check("printed special case n1=n2=2 d=1", [](std::ostream& os) {
    const auto oracle = enumerate_blocks(2, 2).count(1);
    const auto printed = printed_equal_bound_count(2, 1);
    os << "oracle " << oracle << ", printed 12(n+1-d)+2-delta gives " << printed
       << " (known discrepancy)";
    return oracle == 50 && block_count_formula(2, 2, 1) == 50 && printed == 26;
  });
}

/// The printed block count K against M_S,0 at n1 = n2 = 1.
inline CheckResult check_printed_subspace_count() {
  return detail::run_check("printed K n1=n2=1", [](std::ostream& os) {
    const auto oracle = moment_sums(1, 1, 0);
    const auto printed = printed_subspace_count(1, 1);
    os << "oracle M_S,0 " << oracle << ", printed n1 n2 (n1+n2+1) gives " << printed
       << " (known discrepancy)";
    return oracle == 15 && printed == 3;
  });
}

inline CheckResult check_ng_integrality(int max_n = 50) {
  return detail::run_check("N_g integrality", [&](std::ostream& os) {
    for (int n = 0; n <= max_n; ++n) {
      for (int m = 0; m <= max_n; ++m) {
        if (gate_count_ng(n, m) != gate_count_ng(m, n)) {
          os << "N_g not symmetric at (" << n << "," << m << ")";
          return false;
        }
      }
    }
    os << "0 <= n, m <= " << max_n;
    return true;
  });
}

/// Bijectivity of the sum/difference transform on the occupation box and the
/// ancilla widths.
inline CheckResult check_register_transform(int max_n = 7, int max_q = 5) {
  return detail::run_check("register transform", [&](std::ostream& os) {
    std::size_t states = 0;
    for (int n1 = 0; n1 <= max_n; ++n1) {
      for (int n2 = 0; n2 <= max_n; ++n2) {
        std::set<TransformedRegisters> images;
        for (int fp = 0; fp <= n1; ++fp) {
          for (int fq = 0; fq <= n2; ++fq) {
            for (int fr = 0; fr <= n1; ++fr) {
              for (int fs = 0; fs <= n2; ++fs) {
                Occupation4 x{fp, fq, fr, fs};
                auto t = register_transform(x, n1, n2);
                if (t.sigma != x.sigma() || t.delta != x.delta() ||
                    t.delta1 != x.delta1() || t.delta2 != x.delta2()) {
                  os << "wrong image at n1=" << n1 << " n2=" << n2;
                  return false;
                }
                if (inverse_register_transform(t, n1, n2) != x) {
                  os << "inverse fails at n1=" << n1 << " n2=" << n2;
                  return false;
                }
                images.insert(t);
                ++states;
              }
            }
          }
        }
        if (static_cast<std::int64_t>(images.size()) != box_size(n1, n2)) {
          os << "transform not injective at n1=" << n1 << " n2=" << n2;
          return false;
        }
      }
    }
    for (int q1 = 0; q1 <= max_q; ++q1) {
      for (int q2 = 0; q2 <= max_q; ++q2) {
        // Largest occupation bound with the given width.
        const int n1 = (1 << q1) - 1, n2 = (1 << q2) - 1;
        auto w = transform_widths(n1, n2);
        const int gap = std::abs(q1 - q2);
        if (w.q1 != q1 || w.q2 != q2 || w.asg_ancilla_width != gap + 2 ||
            w.first_stage_ancilla != 2 * gap + 4 || w.recovery_register != 2 * gap + 6 ||
            w.delta_register != std::max(q1, q2) + 2 || w.delta1_register < 0) {
          os << "ancilla widths wrong at Q1=" << q1 << " Q2=" << q2;
          return false;
        }
      }
    }
    os << states << " tuples round-tripped, widths for Q1, Q2 <= " << max_q;
    return true;
  });
}

/// Dense exponential of the 4-index term against the block-wise one for
/// `draws` seeded (Phi, tau) pairs, Phi in [-1, 1], tau in [0, 2 pi).
inline CheckResult check_block_exponential(int n1, int n2, int draws, std::uint64_t seed,
                                           double tolerance = 1e-9) {
  std::ostringstream name;
  name << "block exponential n1=" << n1 << " n2=" << n2;
  return detail::run_check(name.str(), [&](std::ostream& os) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(n1 * 64 + n2));
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double phi = 2.0 * rng.uniform() - 1.0;
      const double tau = 2.0 * std::numbers::pi * rng.uniform();
      auto r = verify_block_exponential(n1, n2, phi, tau);
      if (r.off_label != 0.0 || !r.delta_steps || !r.labels_constant) {
        os << "block structure violated";
        return false;
      }
      worst = std::max(worst, r.residual);
    }
    os << draws << " draws, max residual " << worst;
    return worst <= tolerance;
  });
}

/// Spectrum of every admissible layout of a toy on its encoded basis against
/// the configuration-basis matrix.
inline std::vector<CheckResult> check_toy_mappings(int qubit_cap = 10,
                                                   double tolerance = 1e-9) {
  std::vector<CheckResult> out;
  for (const auto& toy : kBundledToys) {
    auto system = parse_system(toy.text, std::string(toy.name));
    auto h = assemble_hamiltonian(system.integrals, system.indexing);
    auto basis = system_basis(system.indexing, {});
    for (const auto& combo : encoding_combinations(system.indexing, qubit_cap)) {
      std::string name = "mapping " + std::string(toy.name) + " [";
      for (std::size_t k = 0; k < combo.size(); ++k) {
        name += (k ? "," : "") + std::string(to_string(combo[k]));
      }
      name += "]";
      out.push_back(detail::run_check(name, [&](std::ostream& os) {
        auto r = check_mapping(h, basis, layout_qubits(system.indexing, combo));
        os << r.qubits << " qubits, spectrum difference " << r.spectrum_difference
           << ", leakage " << r.leakage;
        return r.spectrum_difference <= tolerance && r.leakage <= 1e-12;
      }));
    }
  }
  return out;
}

/// Everything `nomoqpe verify` runs.
inline std::vector<CheckResult> verify_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check_block_identities());
  out.push_back(check_printed_special_case());
  out.push_back(check_printed_subspace_count());
  out.push_back(check_ng_integrality());
  out.push_back(check_register_transform());
  for (auto [n1, n2] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 2}}) {
    out.push_back(check_block_exponential(n1, n2, 20, seed));
  }
  for (auto& r : check_toy_mappings()) out.push_back(std::move(r));
  return out;
}

}  // namespace nomoqpe
