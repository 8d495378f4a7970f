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

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nomoqpe/error.hpp"
#include "nomoqpe/hamiltonian.hpp"
#include "nomoqpe/ipea.hpp"
#include "nomoqpe/system_file.hpp"
#include "nomoqpe/toys.hpp"
#include "nomoqpe/trotter_cost.hpp"
#include "nomoqpe/verify.hpp"

namespace nomoqpe {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

/// Shortest round-tripping decimal of a double ("%.17g" trimmed), so CSV
/// bytes only depend on the value.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string format_real(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}

inline std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// CSV artifact: a header comment identifying the producer, a header row and
/// data rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> row) {
    if (row.size() != columns_.size()) throw std::logic_error("CSV row width mismatch");
    rows_.push_back(std::move(row));
  }

  void write(std::ostream& os, std::uint64_t seed, std::uint64_t config_hash) const {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016" PRIx64, config_hash);
    os << "# nomoqpe " << kVersion << " seed=" << seed << " config=" << hash << "\n";
    write_row(os, columns_);
    for (const auto& r : rows_) write_row(os, r);
  }

  void write_file(const std::string& path, std::uint64_t seed,
                  std::uint64_t config_hash) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    write(out, seed, config_hash);
  }

 private:
  static void write_row(std::ostream& os, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

namespace detail {

// Hash of the command line minus output paths, plus the system text.
inline std::uint64_t config_hash(const std::vector<std::string>& args,
                                 std::string_view system_text = {}) {
  std::uint64_t h = fnv1a("nomoqpe");
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--csv" || a == "--curve-csv") {
      ++i;
      continue;
    }
    if (a.rfind("--csv=", 0) == 0 || a.rfind("--curve-csv=", 0) == 0) continue;
    h = fnv1a(a, h);
    h = fnv1a(std::string_view("\x1f", 1), h);
  }
  return fnv1a(system_text, h);
}

struct LoadedSystem {
  SystemFile file;
  std::string text;
  SecondQuantizedHamiltonian hamiltonian;
  ConfigurationBasis basis;
  RealMatrix matrix;
};

inline LoadedSystem load(const std::string& path, const std::vector<std::string>& sz_zero) {
  LoadedSystem out;
  std::ifstream probe(path, std::ios::binary);
  if (probe) {
    std::ostringstream buffer;
    buffer << probe.rdbuf();
    out.text = buffer.str();
  } else {
    std::string base = path.substr(path.find_last_of('/') == std::string::npos
                                       ? 0
                                       : path.find_last_of('/') + 1);
    auto toy = bundled_toy(base);
    if (!toy) throw UsageError("no system file or bundled toy named '" + path + "'");
    out.text = std::string(*toy);
  }
  out.file = parse_system(out.text, path);
  out.hamiltonian = assemble_hamiltonian(out.file.integrals, out.file.indexing);
  out.basis = system_basis(out.file.indexing, sz_zero);
  if (out.basis.size() == 0) throw UsageError("configuration basis is empty");
  out.matrix = build_matrix(out.hamiltonian, out.basis).to_dense();
  return out;
}

inline std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    Token t{item, 1};
    try {
      out.push_back(parse_real_token(t, 0));
    } catch (const ParseError&) {
      throw UsageError("bad number '" + item + "' in list");
    }
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

inline PhaseWindow resolve_window(const SystemFile& file, std::optional<double> e_min,
                                  std::optional<double> e_max) {
  PhaseWindow w;
  auto lo = e_min ? e_min : file.e_min;
  auto hi = e_max ? e_max : file.e_max;
  if (!lo || !hi) throw UsageError("phase window needs --emin and --emax (or file values)");
  w.e_min = *lo;
  w.e_max = *hi;
  w.validate();
  return w;
}

inline IpeaVersion parse_version(const std::string& v) {
  if (v == "A" || v == "a") return IpeaVersion::A;
  if (v == "B" || v == "b") return IpeaVersion::B;
  throw UsageError("--version must be A or B");
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

struct IpeaOptions {
  std::string file;
  std::vector<std::string> sz_zero;
  std::string version = "A";
  int bits = 17;
  std::optional<double> e_min, e_max;
  std::string guess = "ground";
  std::uint64_t seed = 0;
  bool exact = false;
  int reps = 1;
  std::size_t runs = 0;
  std::optional<std::size_t> target;
  std::string csv;
  std::string targets = "0.99,0.999999";
  int max_r = 201;
  std::string curve_csv;
};

inline void add_ipea_options(CLI::App* cmd, IpeaOptions& o, bool sweep) {
  cmd->add_option("file", o.file, "system file or bundled toy name")->required();
  cmd->add_option("--sz-zero", o.sz_zero, "classes restricted to Sz = 0");
  cmd->add_option("--version", o.version, "IPEA version A or B");
  cmd->add_option("--bits", o.bits, "number of iterations m");
  cmd->add_option("--emin", o.e_min, "lower end of the phase window");
  cmd->add_option("--emax", o.e_max, "upper end of the phase window");
  cmd->add_option("--guess", o.guess, "ground | excited:K | det:OCC | file:PATH");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--target", o.target, "target eigenvector (default: largest overlap)");
  cmd->add_option("--csv", o.csv, "write the report as CSV");
  if (sweep) {
    cmd->add_option("--targets", o.targets, "comma-separated target probabilities");
    cmd->add_option("--max-r", o.max_r, "largest repetition count in the curve");
    cmd->add_option("--curve-csv", o.curve_csv, "write f(r) = -log(1-p) as CSV");
  } else {
    cmd->add_flag("--exact", o.exact, "exact branching instead of sampling");
    cmd->add_option("--reps", o.reps, "odd repetition count for majority voting");
    cmd->add_option("--runs", o.runs, "sampled runs used to estimate p_success");
  }
}

inline IpeaConfig make_config(const IpeaOptions& o, const SystemFile& file) {
  IpeaConfig c;
  c.version = parse_version(o.version);
  c.bits = o.bits;
  c.window = resolve_window(file, o.e_min, o.e_max);
  c.repetitions = o.reps;
  c.seed = o.seed;
  c.mode = o.exact ? IpeaMode::ExactBranching : IpeaMode::Sampled;
  c.target = o.target;
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_spectrum(const std::string& file, const std::vector<std::string>& sz_zero,
                        const std::string& csv, const std::vector<std::string>& args,
                        std::ostream& out) {
  auto sys = load(file, sz_zero);
  const auto hash = config_hash(args, sys.text);
  auto s = exact_spectrum(sys.matrix);
  out << "basis dimension " << sys.basis.size() << "\n";
  out << "index  energy\n";
  CsvTable table({"index", "energy"});
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out << pad(std::to_string(i), 7) << format_real(s.values(i)) << "\n";
    table.add_row({std::to_string(i), format_real(s.values(i))});
  }
  if (!csv.empty()) table.write_file(csv, 0, hash);
  return 0;
}

inline int cmd_ipea(const IpeaOptions& o, const std::vector<std::string>& args,
                     std::ostream& out) {
  auto sys = load(o.file, o.sz_zero);
  const auto hash = config_hash(args, sys.text);
  auto config = make_config(o, sys.file);
  auto guess = build_guess(parse_guess_spec(o.guess), sys.basis, sys.matrix, sys.file.indexing);
  auto report = run_ipea(config, guess, sys.matrix);

  std::optional<double> p = report.success_probability;
  std::optional<double> stderr_p;
  if (!p && o.runs > 0) {
    PhaseProblem problem(sys.matrix, guess, config.window);
    const auto hits = sample_successes(config, problem, report.target, o.runs);
    const double n = static_cast<double>(o.runs);
    p = static_cast<double>(hits) / n;
    stderr_p = std::sqrt(*p * (1.0 - *p) / n);
  }

  const char* version = config.version == IpeaVersion::A ? "A" : "B";
  const char* mode = config.mode == IpeaMode::ExactBranching ? "exact" : "sampled";
  out << "version " << version << ", m = " << config.bits << ", r = " << config.repetitions
      << ", mode " << mode << "\n";
  out << "target " << report.target << (report.target_degenerate ? " (degenerate)" : "")
      << "\n";
  out << "bits " << bit_string(report.bits) << "\n";
  out << "phase " << format_real(report.phase) << "\n";
  out << "E_measured " << format_real(report.energy) << "\n";
  out << "E " << format_real(report.target_energy) << "\n";
  out << "S_overlap " << format_real(report.overlap_squared) << "\n";
  if (p) {
    out << "p_success " << format_real(*p);
    if (stderr_p) out << " +- " << format_real(*stderr_p) << " (" << o.runs << " runs)";
    out << "\n";
  } else {
    out << "succeeded " << (report.succeeded ? "yes" : "no") << "\n";
  }
  if (config.mode == IpeaMode::ExactBranching) {
    // Versions side by side; p_A >= p_B is usual but not guaranteed.
    IpeaConfig other = config;
    other.version = config.version == IpeaVersion::A ? IpeaVersion::B : IpeaVersion::A;
    PhaseProblem problem(sys.matrix, guess, config.window);
    const double q = success_probability(other, problem, report.target).probability;
    const double p_a = config.version == IpeaVersion::A ? *p : q;
    const double p_b = config.version == IpeaVersion::A ? q : *p;
    out << "p_A " << format_real(p_a) << " p_B " << format_real(p_b)
        << (p_a < p_b ? " (p_A < p_B)" : "") << "\n";
  }

  if (!o.csv.empty()) {
    CsvTable table({"E", "S_overlap", "p_success", "p_stderr", "bits", "E_measured",
                    "succeeded", "version", "mode", "m", "r", "runs", "target",
                    "target_degenerate"});
    table.add_row({format_real(report.target_energy), format_real(report.overlap_squared),
                   p ? format_real(*p) : "", stderr_p ? format_real(*stderr_p) : "",
                   bit_string(report.bits), format_real(report.energy),
                   report.succeeded ? "1" : "0", version, mode, std::to_string(config.bits),
                   std::to_string(config.repetitions), std::to_string(o.runs),
                   std::to_string(report.target), report.target_degenerate ? "1" : "0"});
    table.write_file(o.csv, config.seed, hash);
  }
  return 0;
}

inline int cmd_sweep(const IpeaOptions& o, const std::vector<std::string>& args,
                     std::ostream& out) {
  auto sys = load(o.file, o.sz_zero);
  const auto hash = config_hash(args, sys.text);
  IpeaOptions exact = o;
  exact.exact = true;
  exact.reps = 1;
  auto config = make_config(exact, sys.file);
  if (o.max_r < 1) throw UsageError("--max-r must be positive");
  auto targets = parse_real_list(o.targets);
  auto guess = build_guess(parse_guess_spec(o.guess), sys.basis, sys.matrix, sys.file.indexing);
  PhaseProblem problem(sys.matrix, guess, config.window);
  const std::size_t target = o.target.value_or(problem.best_overlap_index());
  auto s = success_probability(config, problem, target);

  const char* version = config.version == IpeaVersion::A ? "A" : "B";
  out << "version " << version << ", m = " << config.bits << ", target " << target
      << ", S_overlap " << format_real(problem.weight(target)) << "\n";
  out << "single-run p " << format_real(s.single_run) << "\n";
  out << "target_p  r_min\n";
  CsvTable table({"target_p", "r_min", "p_at_r_min", "version", "m", "p_single"});
  for (double t : targets) {
    std::string r_text, p_text;
    try {
      const int r = config.version == IpeaVersion::A ? min_repetitions(s.single_run, t)
                                                     : min_repetitions(s.per_bit, t);
      r_text = std::to_string(r);
      p_text = format_real(voted_success(config.version, s, r));
    } catch (const NotAmplifiableError& e) {
      r_text = "none";
      p_text = "";
      out << "note: " << e.what() << "\n";
    }
    out << pad(format_real(t), 10) << r_text << "\n";
    table.add_row({format_real(t), r_text, p_text, version, std::to_string(config.bits),
                   format_real(s.single_run)});
  }
  if (!o.csv.empty()) table.write_file(o.csv, config.seed, hash);

  if (!o.curve_csv.empty()) {
    CsvTable curve({"r", "p", "f"});
    for (int r = 1; r <= o.max_r; r += 2) {
      const double failure = voted_failure(config.version, s, r);
      curve.add_row({std::to_string(r), format_real(1.0 - failure),
                     format_real(-std::log(failure))});
    }
    curve.write_file(o.curve_csv, config.seed, hash);
  }
  return 0;
}

inline int cmd_cost(const std::string& file, const std::string& mapping,
                    const std::string& csv, const std::vector<std::string>& args,
                    std::ostream& out) {
  CostMapping m;
  if (mapping == "direct") {
    m = CostMapping::Direct;
  } else if (mapping == "compact") {
    m = CostMapping::Compact;
  } else if (mapping == "compact-simplified") {
    m = CostMapping::CompactSimplified;
  } else {
    throw UsageError("--mapping must be direct, compact or compact-simplified");
  }
  auto sys = load(file, {});
  const auto hash = config_hash(args, sys.text);
  const auto& indexing = sys.file.indexing;
  auto report = trotter_step_cost(indexing, m);
  auto big = [](const std::optional<BigInt>& v) { return v ? v->str() : std::string(); };

  out << "Trotter-step cost, " << to_string(m) << " mapping (unit-constant counts, natural log)\n";
  out << "fermion-fermion terms use the Bravyi-Kitaev scaling; simulation itself uses "
         "Jordan-Wigner\n";
  CsvTable table({"category", "k", "l", "formula", "value", "exact", "N_g", "block_sum_d2",
                  "classical_M_S3"});
  for (const auto& t : report.terms) {
    const auto& lk = indexing.spec(t.k).label;
    const auto& ll = indexing.spec(t.l).label;
    out << pad(std::string(to_string(t.category)), 17) << pad(lk + "," + ll, 10)
        << pad(t.formula, 30) << format_real(t.value);
    if (t.ng) out << "  N_g " << t.ng->str();
    out << "\n";
    table.add_row({std::string(to_string(t.category)), lk, ll, t.formula,
                   format_real(t.value), big(t.exact), big(t.ng), big(t.block_sum_d2),
                   big(t.classical_precompute)});
  }
  out << "total fermion-fermion " << format_real(report.fermion_fermion) << "\n";
  out << "total boson-boson     " << format_real(report.boson_boson) << "\n";
  out << "total fermion-boson   " << format_real(report.fermion_boson) << "\n";
  out << "total                 " << format_real(report.total()) << "\n";
  out << "qubits direct " << report.qubits_direct << ", compact " << report.qubits_compact
      << "\n";
  table.add_row({"total", "", "", "", format_real(report.total()), "", "", "", ""});
  if (!csv.empty()) table.write_file(csv, 0, hash);
  return 0;
}

inline int cmd_blocks(int n1, int n2, const std::string& csv, std::uint64_t hash,
                      std::ostream& out) {
  auto blocks = enumerate_blocks(n1, n2);
  bool ok = true;
  out << "n1 = " << n1 << ", n2 = " << n2 << "\n";
  out << "histogram";
  for (const auto& [d, c] : blocks.histogram) out << " d=" << d << ":" << c;
  out << "\n";
  out << "d    enumerated  formula\n";
  const BigInt ng = gate_count_ng(n1, n2);
  CsvTable table({"d", "p_enumerated", "p_formula", "match", "N_g"});
  for (int d = 1; d <= std::min(n1, n2) + 1; ++d) {
    const auto e = blocks.count(d);
    const auto f = block_count_formula(n1, n2, d);
    ok = ok && e == f;
    out << pad(std::to_string(d), 5) << pad(std::to_string(e), 12) << f
        << (e == f ? "" : "  MISMATCH") << "\n";
    table.add_row({std::to_string(d), std::to_string(e), std::to_string(f),
                   e == f ? "1" : "0", ng.str()});
  }
  BigInt m[4];
  for (int s = 0; s < 4; ++s) {
    m[s] = 0;
    for (const auto& [d, c] : blocks.histogram) {
      BigInt term = c;
      for (int i = 0; i < s; ++i) term *= d;
      m[s] += term;
    }
  }
  const bool m1 = m[1] == BigInt(box_size(n1, n2));
  const bool m2 = m[2] == ng;
  ok = ok && m1 && m2;
  out << "M_S,0 " << m[0] << "  (printed n1 n2 (n1+n2+1): "
      << printed_subspace_count(n1, n2) << ")\n";
  out << "M_S,1 " << m[1] << "  ((n1+1)^2 (n2+1)^2: " << box_size(n1, n2) << ")\n";
  out << "M_S,2 " << m[2] << "  (N_g: " << ng << ")\n";
  out << "M_S,3 " << m[3] << "  (classical precomputation C)\n";
  if (n1 == n2) {
    out << "printed equal-bound case d=1: " << printed_equal_bound_count(n1, 1)
        << " (enumerated " << blocks.count(1) << ")\n";
  }
  out << "status " << (ok ? "OK" : "MISMATCH") << "\n";
  if (!csv.empty()) table.write_file(csv, 0, hash);
  return ok ? 0 : static_cast<int>(ErrorKind::Verification);
}

inline int cmd_verify(std::uint64_t seed, const std::string& csv, std::uint64_t hash,
                      std::ostream& out) {
  auto results = verify_suite(seed);
  int failed = 0;
  CsvTable table({"check", "status", "detail"});
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    if (!r.passed) ++failed;
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    table.add_row({r.name, r.passed ? "PASS" : "FAIL", detail});
  }
  out << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
      << " checks passed\n";
  if (!csv.empty()) table.write_file(csv, seed, hash);
  return failed == 0 ? 0 : static_cast<int>(ErrorKind::Verification);
}

}  // namespace detail

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 1 usage, 2 parse, 3 numerical guard, 4 verification failure.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Mixed-statistics Hamiltonians, qubit mappings and iterative phase estimation",
               "nomoqpe"};
  app.set_version_flag("--version-info", kVersion);
  app.require_subcommand(1);

  std::string file, csv, mapping = "compact";
  std::vector<std::string> sz_zero;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the configuration matrix");
  spectrum->add_option("file", file, "system file or bundled toy name")->required();
  spectrum->add_option("--sz-zero", sz_zero, "classes restricted to Sz = 0");
  spectrum->add_option("--csv", csv, "write eigenvalues as CSV");

  detail::IpeaOptions ipea_opts;
  auto* ipea = app.add_subcommand("ipea", "simulate iterative phase estimation");
  detail::add_ipea_options(ipea, ipea_opts, false);

  detail::IpeaOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep-reps", "repetition counts and amplification curve");
  detail::add_ipea_options(sweep, sweep_opts, true);

  auto* cost = app.add_subcommand("cost", "unit-constant Trotter-step gate counts");
  cost->add_option("file", file, "system file or bundled toy name")->required();
  cost->add_option("--mapping", mapping, "direct | compact | compact-simplified");
  cost->add_option("--csv", csv, "write the report as CSV");

  int n1 = 0, n2 = 0;
  auto* blocks = app.add_subcommand("blocks", "block structure of the 4-index boson term");
  blocks->add_option("--n1", n1, "occupation bound of modes p, r")->required();
  blocks->add_option("--n2", n2, "occupation bound of modes q, s")->required();
  blocks->add_option("--csv", csv, "write the histogram as CSV");

  std::uint64_t verify_seed = 2026;
  auto* verify = app.add_subcommand("verify", "oracle and decomposition checks");
  verify->add_option("--seed", verify_seed, "seed for the random exponential draws");
  verify->add_option("--csv", csv, "write the check list as CSV");

  std::vector<const char*> argv{"nomoqpe"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : static_cast<int>(ErrorKind::Usage);
  }

  try {
    if (*spectrum) return detail::cmd_spectrum(file, sz_zero, csv, args, out);
    if (*ipea) return detail::cmd_ipea(ipea_opts, args, out);
    if (*sweep) return detail::cmd_sweep(sweep_opts, args, out);
    if (*cost) return detail::cmd_cost(file, mapping, csv, args, out);
    if (*blocks) return detail::cmd_blocks(n1, n2, csv, detail::config_hash(args), out);
    if (*verify) return detail::cmd_verify(verify_seed, csv, detail::config_hash(args), out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return static_cast<int>(ErrorKind::Usage);
}

}  // namespace nomoqpe
