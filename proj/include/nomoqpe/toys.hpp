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

#include <optional>
#include <string>
#include <string_view>

#include "nomoqpe/system_file.hpp"

// Copies of data/*.nomo so the tool runs without the data directory.

namespace nomoqpe {

struct BundledToy {
  std::string_view name;
  std::string_view text;
};

inline constexpr BundledToy kBundledToys[] = {
    {"toy_boson_pair", R"nomo(# Copyright 2026 The nomoqpe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Two bosons in two modes with a pair-hopping term.
format nomoqpe-system 1
class b boson 2 2
emin -1
emax 2
h 1 1 0.5
h 2 2 0.75
V 1 1 2 2 0.2
)nomo"},
    {"toy_h2_like", R"nomo(# Copyright 2026 The nomoqpe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Synthetic H2-like system: two electrons in four spin orbitals
# (1a 1b 2a 2b) and two distinguishable nuclei with two orbitals each.
# Every Hermitian partner is written out.
format nomoqpe-system 1
class e fermion 2 4
class A distinguishable 1 2
class B distinguishable 1 2
emin -4
emax 1
# electrons, one-body
h 1 1 -1.25
h 2 2 -1.25
h 3 3 -0.47
h 4 4 -0.47
h 1 3 0.08
h 3 1 0.08
h 2 4 0.08
h 4 2 0.08
# electrons, Coulomb and pair hopping
V 1 2 1 2 0.67
V 2 1 2 1 0.67
V 3 4 3 4 0.70
V 4 3 4 3 0.70
V 1 4 1 4 0.66
V 4 1 4 1 0.66
V 2 3 2 3 0.66
V 3 2 3 2 0.66
V 1 2 3 4 0.18
V 3 4 1 2 0.18
V 2 1 4 3 0.18
V 4 3 2 1 0.18
# nuclei, one-body
h 5 5 0.02
h 6 6 0.09
h 5 6 0.015
h 6 5 0.015
h 7 7 0.03
h 8 8 0.10
h 7 8 0.012
h 8 7 0.012
# electron-nucleus attraction
V 1 5 1 5 -0.05
V 5 1 5 1 -0.05
V 2 5 2 5 -0.05
V 5 2 5 2 -0.05
V 3 6 3 6 -0.04
V 6 3 6 3 -0.04
V 4 8 4 8 -0.04
V 8 4 8 4 -0.04
# nucleus-nucleus repulsion
V 5 7 5 7 0.03
V 7 5 7 5 0.03
)nomo"},
    {"toy_polaron", R"nomo(# Copyright 2026 The nomoqpe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# One electron hopping between two sites, coupled to a single boson mode
# holding two quanta.
format nomoqpe-system 1
class e fermion 1 2
class ph boson 2 1
emin -1
emax 2
h 1 1 -0.05
h 2 2 0.3
h 1 2 -0.2
h 2 1 -0.2
h 3 3 0.25
V 3 3 3 3 0.05
V 1 3 1 3 0.1
V 3 1 3 1 0.1
V 2 3 2 3 -0.04
V 3 2 3 2 -0.04
)nomo"},
    {"toy_two_level", R"nomo(# Copyright 2026 The nomoqpe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Two spin orbitals, one electron, diagonal one-body part.
# Exact energies 0.625 = 0.101b and 0.875 = 0.111b.
format nomoqpe-system 1
class e fermion 1 2
emin 0
emax 1
h 1 1 0.625
h 2 2 0.875
)nomo"},
};

/// Text of a bundled toy, accepting NAME or NAME.nomo.
inline std::optional<std::string_view> bundled_toy(std::string_view name) {
  if (name.size() > 5 && name.substr(name.size() - 5) == ".nomo") {
    name.remove_suffix(5);
  }
  for (const auto& toy : kBundledToys) {
    if (toy.name == name) return toy.text;
  }
  return std::nullopt;
}

/// Reads PATH if it exists, otherwise falls back to a bundled toy of that name.
inline SystemFile load_system(const std::string& path_or_name) {
  std::ifstream probe(path_or_name);
  if (probe) return read_system_file(path_or_name);
  std::string base = path_or_name;
  if (auto slash = base.find_last_of('/'); slash != std::string::npos) {
    base = base.substr(slash + 1);
  }
  if (auto text = bundled_toy(base)) return parse_system(*text, std::string(base));
  throw UsageError("no system file or bundled toy named '" + path_or_name + "'");
}

}  // namespace nomoqpe
