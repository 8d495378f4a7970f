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


// Small end-to-end run on the bundled electron-phonon toy: configuration
// matrix, compact qubit image, IPEA from a single determinant.

#include <iostream>

#include "nomoqpe/ipea.hpp"
#include "nomoqpe/qubit_mapping.hpp"
#include "nomoqpe/toys.hpp"

int main() {
  using namespace nomoqpe;
  auto sys = load_system("toy_polaron");
  auto h = assemble_hamiltonian(sys.integrals, sys.indexing);
  auto basis = system_basis(sys.indexing, {});
  RealMatrix m = build_matrix(h, basis).to_dense();
  auto spectrum = exact_spectrum(m);
  std::cout << "basis " << basis.size() << ", E0 " << spectrum.values(0) << "\n";

  auto layout = layout_qubits(sys.indexing, default_encodings(sys.indexing));
  auto check = check_mapping(h, basis, layout);
  std::cout << "compact layout " << check.qubits << " qubits, spectrum difference "
            << check.spectrum_difference << "\n";

  IpeaConfig config;
  config.version = IpeaVersion::A;
  config.bits = 10;
  config.window = {*sys.e_min, *sys.e_max};
  config.mode = IpeaMode::ExactBranching;
  auto guess = build_guess(parse_guess_spec("det:102"), basis, m, sys.indexing);
  auto report = run_ipea(config, guess, m);
  std::cout << "IPEA bits " << bit_string(report.bits) << " -> E " << report.energy
            << ", overlap " << report.overlap_squared << ", p_success "
            << report.success_probability.value_or(0.0) << "\n";
  std::cout << "r for p >= 0.99: " << min_repetitions(*report.success_probability, 0.99)
            << "\n";
}
