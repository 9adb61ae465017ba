#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lfdlcq/fock_basis.hpp"
#include "lfdlcq/hamiltonian.hpp"
#include "lfdlcq/observables.hpp"

namespace lfdlcq {

// ---------------------------------------------------------------------------
// Change descriptors

/// Particle type codes as stored in a change descriptor.
enum class Particle : std::uint8_t { fermion = 0, antifermion = 1, boson = 2 };

struct DeltaSlot {
  int k = 0;           ///< momentum; 0 marks an unused slot
  bool raise = false;  ///< occupancy increased (creation) or lowered
  Particle type = Particle::fermion;

  bool operator==(const DeltaSlot&) const = default;
  auto operator<=>(const DeltaSlot&) const = default;
};

/// Net occupancy change connecting a Fock state to one Hamiltonian image.
/// Raised slots come first, then lowered ones; within each group fermions,
/// antifermions, bosons, each by increasing momentum. Either all slots are
/// empty (diagonal), three are used with exactly one boson, or all four are
/// used with exactly two bosons.
struct Delta {
  std::array<DeltaSlot, 4> slots{};
  TermFamily family = TermFamily::mass;
  int multiplicity = 1;      ///< Hamiltonian terms producing this change
  double coefficient = 0.0;  ///< summed bracket coefficient of those terms

  int used_slots() const;
  bool operator==(const Delta& o) const { return slots == o.slots; }
};

/// Checks slot layout, species counts and momentum conservation.
bool is_valid_delta(const Delta& d);

std::string to_string(const Delta& d);

/// n-th pair (k, l) with k > l >= 1 in the order (2,1), (3,1), (3,2), (4,1)...
std::pair<int, int> tuple_from_index(std::int64_t n);
std::int64_t index_from_tuple(int k, int l);

/// Every change descriptor with a nonvanishing coefficient that can act
/// inside a K block: the all-zero diagonal first, then vertex, seagull and
/// fork changes, each family in pair-index order of its momentum tuples.
/// Changes reachable from several terms appear once with their multiplicity.
std::vector<Delta> enumerate_deltas(int K);

/// The state changed according to `d`, or nullopt when a lowered mode is
/// empty or a raised fermionic mode is already occupied.
std::optional<FockState> apply_delta(const FockState& state, const Delta& d);

struct OracleReport {
  int K = 0;
  std::size_t deltas = 0;
  std::size_t invalid_deltas = 0;
  std::size_t states = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> counterexamples;  ///< first few mismatching states

  bool passed() const { return invalid_deltas == 0 && mismatches == 0; }
};

/// For every state of the K space (all charges), compares the set of states
/// reached through the change descriptors with the images of H (structure
/// only; amplitudes are ignored). `params.K` selects the block.
OracleReport check_delta_oracle(const ModelParams& params, std::size_t max_examples = 5);

// ---------------------------------------------------------------------------
// Qubit budgets

enum class Scheme { direct_direct, direct_compact, compact };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& text);

struct QubitBudget {
  std::string scheme;
  int K = 0;
  std::int64_t total_qubits = 0;
  std::vector<std::pair<std::string, std::int64_t>> breakdown;
  /// compact only: qubits of one (momentum, occupancy) register
  std::int64_t register_qubits = 0;
};

/// Smallest b with 2^b >= x; 0 for x <= 1.
int ceil_log2(std::int64_t x);

QubitBudget qubit_count(Scheme scheme, int K);

/// 3+1D estimate: 2K [ceil(log K) + 2 ceil(log L) + 1 + ceil(log n_f) +
/// ceil(log n_c)] + K [ceil(log K) + 2 ceil(log L) + ceil(log K) + 1 +
/// ceil(log(n_c^2 - 1))], logs base 2, with the color term 0 when n_c = 1.
QubitBudget qubit_count_qcd(int K, int lperp, int n_flavors, int n_colors);

/// Published 3+1D figure for K = 20, L = 20, n_f = 5, n_c = 3.
inline constexpr std::int64_t kPublishedQcdQubits = 1360;

// ---------------------------------------------------------------------------
// Gate-cost scalings. The published costs are asymptotic with logarithmic
// factors suppressed and no constants; `constant` is the caller's choice and
// the result is a scaling estimate, not a verified gate count.

/// constant * t * K^4: time evolution inside one K block.
double time_evolution_gate_scaling(int K, double t, double constant);

/// constant * T * K^4: adiabatic preparation along a path bounded by K.
double adiabatic_gate_scaling(int K, double T, double constant);

/// 3^4 K^3 2^2 = 324 K^3, the bound on the number of change descriptors.
std::int64_t delta_count_bound(int K);

// ---------------------------------------------------------------------------
// Occupation measurement

struct WeightedState {
  FockState state;
  double probability;
};

struct OccupationEstimate {
  double expected = 0.0;
  double kept_fraction = 1.0;
};

/// Exact expectation of the occupation of mode n (summed over species) that
/// the sampling procedure converges to. With `qsq`, states whose free
/// invariant mass exceeds it are flagged and discarded and the estimate is
/// conditioned on the rest. Throws DegenerateTruncation when nothing is kept.
OccupationEstimate measure_occupation(const std::vector<WeightedState>& distribution, int n, int K,
                                      const FreeMasses& masses, std::optional<double> qsq);

/// Finite-shot emulation of the same procedure.
OccupationEstimate sample_occupation(const std::vector<WeightedState>& distribution, int n, int K,
                                     const FreeMasses& masses, std::optional<double> qsq,
                                     std::size_t shots, std::mt19937_64& rng);

}  // namespace lfdlcq
