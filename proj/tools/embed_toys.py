# Copyright 2026 The nomoqpe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Rewrites the kBundledToys table in include/nomoqpe/toys.hpp from data/."""

import pathlib
import re

root = pathlib.Path(__file__).resolve().parent.parent
header = root / "include" / "nomoqpe" / "toys.hpp"
text = header.read_text()

entries = []
for path in sorted((root / "data").glob("*.nomo")):
    entries.append('    {"%s", R"nomo(%s)nomo"},\n' % (path.stem, path.read_text()))
table = "inline constexpr BundledToy kBundledToys[] = {\n" + "".join(entries) + "};\n"

pattern = re.compile(r"inline constexpr BundledToy kBundledToys\[\] = \{\n.*?\)nomo\"\},\n\};\n",
                     re.S)
new, n = pattern.subn(lambda _: table, text)
if n != 1:
    raise SystemExit("toys table not found")
header.write_text(new)
