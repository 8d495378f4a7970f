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
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nomoqpe/error.hpp"
#include "nomoqpe/linalg.hpp"
#include "nomoqpe/random.hpp"

namespace nomoqpe {

/// Energy interval [e_min, e_max) mapped affinely onto phases [0, 1).
struct PhaseWindow {
  double e_min = 0.0;
  double e_max = 1.0;

  void validate() const {
    if (!(e_min < e_max)) {
      throw UsageError("phase window needs e_min < e_max");
    }
  }
  double width() const { return e_max - e_min; }
};

inline double phase_of_energy(double energy, const PhaseWindow& window) {
  window.validate();
  if (!(energy >= window.e_min && energy < window.e_max)) {
    throw NumericalError("energy " + std::to_string(energy) +
                         " outside phase window [" + std::to_string(window.e_min) +
                         ", " + std::to_string(window.e_max) + ")");
  }
  return (energy - window.e_min) / window.width();
}

inline double energy_of_phase(double phase, const PhaseWindow& window) {
  window.validate();
  return window.e_min + phase * window.width();
}

/// tau such that exp(i tau (H - e_min)) has eigenphase 2 pi phase_of_energy(E).
inline double window_tau(const PhaseWindow& window) {
  return 2.0 * std::numbers::pi / window.width();
}

enum class IpeaVersion { A, B };
enum class IpeaMode { Sampled, ExactBranching };

inline constexpr int kMaxExactBits = 24;
inline constexpr int kMaxBits = 50;

struct IpeaConfig {
  IpeaVersion version = IpeaVersion::A;
  int bits = 17;
  PhaseWindow window;
  int repetitions = 1;
  std::uint64_t seed = 0;
  IpeaMode mode = IpeaMode::Sampled;
  /// Eigenvector whose phase counts as success; defaults to the one with the
  /// largest overlap with the guess.
  std::optional<std::size_t> target;
  /// Odd r up to this value are tabulated in the report.
  int table_max_repetitions = 55;

  void validate() const {
    window.validate();
    if (bits < 1 || bits > kMaxBits) {
      throw UsageError("bit count must lie in 1.." + std::to_string(kMaxBits));
    }
    if (repetitions < 1 || repetitions % 2 == 0) {
      throw UsageError("repetitions must be odd and positive");
    }
    if (mode == IpeaMode::ExactBranching && bits > kMaxExactBits) {
      throw UsageError("exact branching supports at most " +
                       std::to_string(kMaxExactBits) + " bits");
    }
  }
};

/// Bits phi_1 .. phi_m of an m-bit phase value v = sum_j phi_j 2^{m-j}.
inline std::vector<int> bits_of(std::uint64_t value, int m) {
  std::vector<int> out(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) {
    out[static_cast<std::size_t>(j - 1)] = static_cast<int>((value >> (m - j)) & 1u);
  }
  return out;
}

inline std::uint64_t value_of(std::span<const int> bits) {
  std::uint64_t v = 0;
  for (int b : bits) v = (v << 1) | static_cast<std::uint64_t>(b != 0);
  return v;
}

inline double phase_of_bits(std::span<const int> bits) {
  return std::ldexp(static_cast<double>(value_of(bits)), -static_cast<int>(bits.size()));
}

inline std::string bit_string(std::span<const int> bits) {
  std::string s;
  for (int b : bits) s += b ? '1' : '0';
  return s;
}

/// omega_k = -sum_{i=2}^{m-k+1} phi_{k+i-1} / 2^i. `bits[j-1]` holds phi_j;
/// only phi_{k+1} .. phi_m are read.
inline double feedback_angle(int k, std::span<const int> bits, int m) {
  if (k < 1 || k > m || static_cast<int>(bits.size()) < m) {
    throw UsageError("feedback angle needs 1 <= k <= m and m bits");
  }
  double omega = 0.0;
  for (int i = 2; i <= m - k + 1; ++i) {
    omega -= bits[static_cast<std::size_t>(k + i - 2)] * std::ldexp(1.0, -i);
  }
  return omega;
}

/// Outcome of one IPEA iteration: probability of reading 0 on the ancilla and
/// the normalized system state for either reading (zero vector when that
/// reading has probability 0).
struct IterationOutcome {
  double prob_bit0 = 1.0;
  ComplexVector post_state_0;
  ComplexVector post_state_1;
};

namespace detail {

inline void check_normalized(const ComplexVector& state) {
  const double norm = state.norm();
  if (!(std::abs(norm - 1.0) <= 1e-8)) {
    throw NumericalError("state norm " + std::to_string(norm) + " deviates from 1");
  }
}

// Ancilla |0>: (psi + e^{2 pi i w} U psi) / 2, ancilla |1>: (psi - ...) / 2.
inline IterationOutcome finish_iteration(const ComplexVector& state,
                                         const ComplexVector& rotated) {
  ComplexVector zero = 0.5 * (state + rotated);
  ComplexVector one = 0.5 * (state - rotated);
  IterationOutcome out;
  const double n0 = zero.squaredNorm();
  const double n1 = one.squaredNorm();
  out.prob_bit0 = std::clamp(n0 / (n0 + n1), 0.0, 1.0);
  out.post_state_0 = n0 > 0.0 ? ComplexVector(zero / std::sqrt(n0))
                              : ComplexVector::Zero(state.size());
  out.post_state_1 = n1 > 0.0 ? ComplexVector(one / std::sqrt(n1))
                              : ComplexVector::Zero(state.size());
  return out;
}

}  // namespace detail

/// Hadamard, controlled-U, R_z(omega), Hadamard on the read-out qubit, with
/// `u_power` = U^{2^{k-1}} as a dense unitary.
inline IterationOutcome run_iteration(const ComplexVector& state,
                                      const ComplexMatrix& u_power, double omega) {
  detail::check_normalized(state);
  if (u_power.rows() != state.size() || u_power.cols() != state.size()) {
    throw UsageError("unitary and state dimensions differ");
  }
  const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * omega);
  return detail::finish_iteration(state, phase * (u_power * state));
}

/// Same kernel for a unitary that is diagonal in the state's basis, given by
/// its eigenphases theta_j (U = diag(exp(2 pi i theta_j))).
inline IterationOutcome run_iteration_diagonal(const ComplexVector& state,
                                               std::span<const double> theta,
                                               double omega) {
  detail::check_normalized(state);
  if (static_cast<Eigen::Index>(theta.size()) != state.size()) {
    throw UsageError("phase list and state dimensions differ");
  }
  ComplexVector rotated(state.size());
  for (Eigen::Index j = 0; j < state.size(); ++j) {
    rotated(j) = std::polar(1.0, 2.0 * std::numbers::pi *
                                     (theta[static_cast<std::size_t>(j)] + omega)) *
                 state(j);
  }
  return detail::finish_iteration(state, rotated);
}

/// |<guess|eig>|^2
inline double overlap_squared(const ComplexVector& guess, const ComplexVector& eig) {
  detail::check_normalized(guess);
  detail::check_normalized(eig);
  return std::norm(guess.dot(eig));
}

/// Accepted m-bit results for a target phase: the floor-rounded value, plus
/// the next grid point when the remainder exceeds half a unit.
inline std::vector<std::uint64_t> accepted_values(double phase, int m) {
  const double scaled = std::ldexp(phase, m);
  const double floor_value = std::floor(scaled);
  const std::uint64_t modulus = static_cast<std::uint64_t>(1) << m;
  std::vector<std::uint64_t> out{static_cast<std::uint64_t>(floor_value) % modulus};
  if (scaled - floor_value > 0.5) out.push_back((out.front() + 1) % modulus);
  return out;
}

/// The grid point nearest to the phase (ties round down).
inline std::uint64_t nearest_value(double phase, int m) {
  auto acc = accepted_values(phase, m);
  return acc.back();
}

/// Probability that a majority of r independent trials with success p fail,
/// sum_{k <= (r-1)/2} C(r,k) p^k (1-p)^{r-k}.
inline double majority_failure(double p, int r) {
  if (r < 1 || r % 2 == 0) throw UsageError("repetition count must be odd");
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return 1.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  for (int k = 0; k <= (r - 1) / 2; ++k) {
    double t = std::lgamma(r + 1.0) - std::lgamma(k + 1.0) - std::lgamma(r - k + 1.0) +
               k * lp + (r - k) * lq;
    logs.push_back(t);
    max_term = std::max(max_term, t);
  }
  double sum = 0.0;
  for (double t : logs) sum += std::exp(t - max_term);
  return std::min(1.0, std::exp(max_term) * sum);
}

inline double majority_success(double p, int r) { return 1.0 - majority_failure(p, r); }

/// Failure of per-bit voting: 1 - prod_k (1 - failure_k(r)).
inline double per_bit_failure(std::span<const double> per_bit, int r) {
  double log_ok = 0.0;
  for (double p : per_bit) log_ok += std::log1p(-majority_failure(p, r));
  return -std::expm1(log_ok);
}

/// f(r) = -log(1 - p(r)) from the failure probability.
inline double amplification(double failure) {
  return failure <= 0.0 ? std::numeric_limits<double>::infinity() : -std::log(failure);
}

class NotAmplifiableError : public NumericalError {
 public:
  explicit NotAmplifiableError(double p)
      : NumericalError("success probability " + std::to_string(p) +
                       " <= 0.5 is not amplifiable by majority voting") {}
};

inline constexpr int kMaxRepetitions = 100001;

/// Smallest odd r whose whole-run majority vote succeeds with >= target.
inline int min_repetitions(double p_single, double target) {
  if (!(target > 0.0 && target < 1.0)) throw UsageError("target must lie in (0, 1)");
  if (!(p_single > 0.5)) throw NotAmplifiableError(p_single);
  for (int r = 1; r <= kMaxRepetitions; r += 2) {
    if (1.0 - majority_failure(p_single, r) >= target) return r;
  }
  throw NumericalError("no repetition count up to " + std::to_string(kMaxRepetitions) +
                       " reaches the target");
}

/// Smallest odd r such that voting every bit independently succeeds on all
/// bits with probability >= target.
inline int min_repetitions(std::span<const double> per_bit, double target) {
  if (!(target > 0.0 && target < 1.0)) throw UsageError("target must lie in (0, 1)");
  for (double p : per_bit) {
    if (!(p > 0.5)) throw NotAmplifiableError(p);
  }
  for (int r = 1; r <= kMaxRepetitions; r += 2) {
    if (1.0 - per_bit_failure(per_bit, r) >= target) return r;
  }
  throw NumericalError("no repetition count up to " + std::to_string(kMaxRepetitions) +
                       " reaches the target");
}

/// A Hamiltonian in its eigenbasis together with the guess expanded in it.
/// All IPEA simulation runs here: the controlled powers U^{2^{k-1}} are
/// diagonal with eigenphases frac(2^{k-1} phi_j).
class PhaseProblem {
 public:
  template <typename Derived>
  PhaseProblem(const Eigen::MatrixBase<Derived>& hamiltonian, const ComplexVector& guess,
               const PhaseWindow& window)
      : window_(window) {
    window.validate();
    auto spectrum = exact_spectrum(hamiltonian);
    if (guess.size() != spectrum.size()) {
      throw UsageError("guess dimension " + std::to_string(guess.size()) +
                       " differs from Hamiltonian dimension " +
                       std::to_string(spectrum.size()));
    }
    detail::check_normalized(guess);
    energies_ = spectrum.values;
    vectors_ = spectrum.vectors.template cast<Complex>();
    for (Eigen::Index j = 0; j < energies_.size(); ++j) {
      phases_.push_back(phase_of_energy(energies_(j), window));
    }
    coefficients_ = vectors_.adjoint() * guess;
  }

  const PhaseWindow& window() const { return window_; }
  Eigen::Index dimension() const { return energies_.size(); }
  const RealVector& energies() const { return energies_; }
  const ComplexMatrix& eigenvectors() const { return vectors_; }
  const std::vector<double>& phases() const { return phases_; }
  /// Guess in the eigenbasis.
  const ComplexVector& coefficients() const { return coefficients_; }
  double weight(std::size_t j) const {
    return std::norm(coefficients_(static_cast<Eigen::Index>(j)));
  }

  std::size_t best_overlap_index() const {
    std::size_t best = 0;
    for (std::size_t j = 1; j < phases_.size(); ++j) {
      if (weight(j) > weight(best) + 1e-12) best = j;
    }
    return best;
  }

  /// Eigenphases of U^{2^{k-1}}.
  std::vector<double> power_phases(int k) const {
    std::vector<double> out(phases_.size());
    for (std::size_t j = 0; j < phases_.size(); ++j) {
      const double x = std::ldexp(phases_[j], k - 1);
      out[j] = x - std::floor(x);
    }
    return out;
  }

  /// True when another eigenphase lies within 2^{-m} of the target's
  /// (distance measured on the unit circle).
  bool target_degenerate(std::size_t target, int m) const {
    const double ulp = std::ldexp(1.0, -m);
    for (std::size_t j = 0; j < phases_.size(); ++j) {
      if (j == target) continue;
      double d = std::abs(phases_[j] - phases_[target]);
      d = std::min(d, 1.0 - d);
      if (d < ulp) return true;
    }
    return false;
  }

 private:
  PhaseWindow window_;
  RealVector energies_;
  ComplexMatrix vectors_;
  std::vector<double> phases_;
  ComplexVector coefficients_;
};

/// Result of run_ipea.
struct IpeaReport {
  IpeaConfig config;
  /// phi_1 .. phi_m of the voted (sampled) or most probable (exact) result.
  std::vector<int> bits;
  double phase = 0.0;
  double energy = 0.0;
  std::size_t target = 0;
  double target_energy = 0.0;
  double overlap_squared = 0.0;
  bool target_degenerate = false;
  /// Sampled mode: whether the voted result is an accepted value.
  bool succeeded = false;
  /// Exact mode: probability that a single voted run (config.repetitions)
  /// lands on an accepted value.
  std::optional<double> success_probability;
  /// Version B: probability of the correct bit at iteration k (index k-1)
  /// given correct earlier feedback.
  std::vector<double> per_iteration_probabilities;
  /// Odd r -> voted success probability (exact mode).
  std::vector<std::pair<int, double>> repetition_table;
};

namespace detail {

// Single m-bit run; version A carries the collapsed state, B reinitializes.
inline std::uint64_t sample_once(const PhaseProblem& problem, IpeaVersion version,
                                 int m, Rng& rng) {
  std::vector<int> bits(static_cast<std::size_t>(m), 0);
  ComplexVector state = problem.coefficients();
  for (int k = m; k >= 1; --k) {
    const double omega = feedback_angle(k, bits, m);
    auto theta = problem.power_phases(k);
    auto out = run_iteration_diagonal(
        version == IpeaVersion::A ? state : problem.coefficients(), theta, omega);
    const int bit = rng.uniform() < out.prob_bit0 ? 0 : 1;
    bits[static_cast<std::size_t>(k - 1)] = bit;
    if (version == IpeaVersion::A) state = bit == 0 ? out.post_state_0 : out.post_state_1;
  }
  return value_of(bits);
}

// Version B with each iteration repeated r times and majority-voted.
inline std::uint64_t sample_voted_b(const PhaseProblem& problem, int m, int r,
                                    Rng& rng) {
  std::vector<int> bits(static_cast<std::size_t>(m), 0);
  for (int k = m; k >= 1; --k) {
    const double omega = feedback_angle(k, bits, m);
    auto out = run_iteration_diagonal(problem.coefficients(), problem.power_phases(k),
                                      omega);
    int ones = 0;
    for (int i = 0; i < r; ++i) ones += rng.uniform() < out.prob_bit0 ? 0 : 1;
    bits[static_cast<std::size_t>(k - 1)] = 2 * ones > r ? 1 : 0;
  }
  return value_of(bits);
}

// Version A repeated r times, the most frequent m-bit value wins (ties go to
// the smaller value).
inline std::uint64_t sample_voted_a(const PhaseProblem& problem, int m, int r,
                                    Rng& rng) {
  std::map<std::uint64_t, int> counts;
  for (int i = 0; i < r; ++i) ++counts[sample_once(problem, IpeaVersion::A, m, rng)];
  std::uint64_t best = counts.begin()->first;
  int best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

inline std::uint64_t sample_voted(const PhaseProblem& problem, const IpeaConfig& config,
                                  Rng& rng) {
  if (config.version == IpeaVersion::B) {
    return sample_voted_b(problem, config.bits, config.repetitions, rng);
  }
  return sample_voted_a(problem, config.bits, config.repetitions, rng);
}

// Depth-first walk over every measurement record, k = m down to 1.
template <typename Visit>
void walk_tree(const PhaseProblem& problem, IpeaVersion version, int m, int k,
               std::vector<int>& bits, const ComplexVector& state, double prob,
               Visit&& visit) {
  if (prob <= 0.0) return;
  if (k == 0) {
    visit(value_of(bits), prob);
    return;
  }
  const double omega = feedback_angle(k, bits, m);
  auto out = run_iteration_diagonal(
      version == IpeaVersion::A ? state : problem.coefficients(), problem.power_phases(k),
      omega);
  for (int bit = 0; bit < 2; ++bit) {
    bits[static_cast<std::size_t>(k - 1)] = bit;
    const double p = bit == 0 ? out.prob_bit0 : 1.0 - out.prob_bit0;
    walk_tree(problem, version, m, k - 1, bits,
              bit == 0 ? out.post_state_0 : out.post_state_1, prob * p, visit);
  }
  bits[static_cast<std::size_t>(k - 1)] = 0;
}

}  // namespace detail

/// Exact probability of every m-bit outcome of a single (unrepeated) run,
/// indexed by the value sum_j phi_j 2^{m-j}.
inline std::vector<double> outcome_distribution(const PhaseProblem& problem,
                                                IpeaVersion version, int m) {
  if (m < 1 || m > 20) throw UsageError("outcome distribution supports 1..20 bits");
  std::vector<double> out(static_cast<std::size_t>(1) << m, 0.0);
  std::vector<int> bits(static_cast<std::size_t>(m), 0);
  detail::walk_tree(problem, version, m, m, bits, problem.coefficients(), 1.0,
                    [&](std::uint64_t v, double p) { out[v] += p; });
  return out;
}

/// Probability of the reference bit at every iteration given correct
/// feedback from the reference, version B (fresh guess each iteration).
inline std::vector<double> per_bit_probabilities(const PhaseProblem& problem,
                                                 std::uint64_t reference, int m) {
  auto bits = bits_of(reference, m);
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int k = m; k >= 1; --k) {
    auto it = run_iteration_diagonal(problem.coefficients(), problem.power_phases(k),
                                     feedback_angle(k, bits, m));
    out[static_cast<std::size_t>(k - 1)] =
        bits[static_cast<std::size_t>(k - 1)] == 0 ? it.prob_bit0 : 1.0 - it.prob_bit0;
  }
  return out;
}

struct SuccessEstimate {
  double probability = 0.0;
  bool target_degenerate = false;
  /// Exact single-run probability before repetition.
  double single_run = 0.0;
  std::vector<double> per_bit;
  /// Probability mass the full tree walk covered; 1 up to rounding.
  double total_mass = 0.0;
  /// Most probable single-run outcome.
  std::uint64_t mode_value = 0;
};

/// Exact success probability of the configured protocol for a target
/// eigenvector, by walking the whole outcome tree.
inline SuccessEstimate success_probability(const IpeaConfig& config,
                                           const PhaseProblem& problem,
                                           std::size_t target) {
  IpeaConfig exact = config;
  exact.mode = IpeaMode::ExactBranching;
  exact.validate();
  if (target >= static_cast<std::size_t>(problem.dimension())) {
    throw UsageError("target eigenvector index out of range");
  }
  const int m = config.bits;
  const double phase = problem.phases()[target];
  const auto accepted = accepted_values(phase, m);

  SuccessEstimate out;
  out.target_degenerate = problem.target_degenerate(target, m);
  double best = -1.0;
  std::vector<int> bits(static_cast<std::size_t>(m), 0);
  detail::walk_tree(problem, config.version, m, m, bits, problem.coefficients(), 1.0,
                    [&](std::uint64_t v, double p) {
                      out.total_mass += p;
                      if (std::find(accepted.begin(), accepted.end(), v) !=
                          accepted.end()) {
                        out.single_run += p;
                      }
                      if (p > best) {
                        best = p;
                        out.mode_value = v;
                      }
                    });
  if (std::abs(out.total_mass - 1.0) > 1e-8) {
    throw NumericalError("outcome tree probabilities sum to " +
                         std::to_string(out.total_mass));
  }
  out.per_bit = per_bit_probabilities(problem, nearest_value(phase, m), m);
  const int r = config.repetitions;
  if (r == 1) {
    out.probability = out.single_run;
  } else if (config.version == IpeaVersion::A) {
    out.probability = majority_success(out.single_run, r);
  } else {
    out.probability = 1.0 - per_bit_failure(out.per_bit, r);
  }
  return out;
}

template <typename Derived>
SuccessEstimate success_probability(const IpeaConfig& config, const ComplexVector& guess,
                                    const Eigen::MatrixBase<Derived>& hamiltonian,
                                    std::size_t target) {
  PhaseProblem problem(hamiltonian, guess, config.window);
  return success_probability(config, problem, target);
}

/// Voted success with r repetitions from the exact single-run data: whole-run
/// binomial tail for A, per-bit product for B.
inline double voted_success(IpeaVersion version, const SuccessEstimate& s, int r) {
  if (r == 1) return s.single_run;
  if (version == IpeaVersion::A) return majority_success(s.single_run, r);
  return 1.0 - per_bit_failure(s.per_bit, r);
}

inline double voted_failure(IpeaVersion version, const SuccessEstimate& s, int r) {
  if (r == 1) return 1.0 - s.single_run;
  if (version == IpeaVersion::A) return majority_failure(s.single_run, r);
  return per_bit_failure(s.per_bit, r);
}

/// Worker count from NOMOQPE_THREADS, else hardware concurrency.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NOMOQPE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  return hw;
}

/// Count of accepted results over `runs` independent sampled runs; run i
/// draws from stream i of config.seed, so the count does not depend on the
/// thread count.
inline std::size_t sample_successes(const IpeaConfig& config, const PhaseProblem& problem,
                                    std::size_t target, std::size_t runs) {
  config.validate();
  const auto accepted = accepted_values(problem.phases().at(target), config.bits);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(runs, 1)));
  std::vector<std::size_t> counts(workers, 0);
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < runs; i += workers) {
      Rng rng = Rng::stream(config.seed, i);
      auto v = detail::sample_voted(problem, config, rng);
      if (std::find(accepted.begin(), accepted.end(), v) != accepted.end()) ++counts[w];
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::size_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

/// Simulates IPEA on a Hamiltonian matrix and an initial guess. Every
/// eigenvalue must lie inside the phase window.
template <typename Derived>
IpeaReport run_ipea(const IpeaConfig& config, const ComplexVector& guess,
                    const Eigen::MatrixBase<Derived>& hamiltonian) {
  config.validate();
  PhaseProblem problem(hamiltonian, guess, config.window);
  IpeaReport report;
  report.config = config;
  report.target = config.target.value_or(problem.best_overlap_index());
  if (report.target >= static_cast<std::size_t>(problem.dimension())) {
    throw UsageError("target eigenvector index out of range");
  }
  report.target_energy = problem.energies()(static_cast<Eigen::Index>(report.target));
  report.overlap_squared = problem.weight(report.target);
  const int m = config.bits;
  report.target_degenerate = problem.target_degenerate(report.target, m);
  const auto accepted = accepted_values(problem.phases()[report.target], m);

  std::uint64_t value = 0;
  if (config.mode == IpeaMode::ExactBranching) {
    auto s = success_probability(config, problem, report.target);
    report.success_probability = s.probability;
    if (config.version == IpeaVersion::B) report.per_iteration_probabilities = s.per_bit;
    for (int r = 1; r <= std::max(config.table_max_repetitions, 1); r += 2) {
      report.repetition_table.emplace_back(r, voted_success(config.version, s, r));
    }
    value = s.mode_value;
  } else {
    Rng rng(config.seed);
    value = detail::sample_voted(problem, config, rng);
    if (config.version == IpeaVersion::B) {
      report.per_iteration_probabilities =
          per_bit_probabilities(problem, nearest_value(problem.phases()[report.target], m), m);
    }
  }
  report.bits = bits_of(value, m);
  report.phase = phase_of_bits(report.bits);
  report.energy = energy_of_phase(report.phase, config.window);
  report.succeeded = std::find(accepted.begin(), accepted.end(), value) != accepted.end();
  return report;
}

}  // namespace nomoqpe
