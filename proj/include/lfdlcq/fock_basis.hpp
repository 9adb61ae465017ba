#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lfdlcq {

/// Occupied bosonic mode: momentum `n` holding `w >= 1` quanta.
struct BosonMode {
  int n = 0;
  int w = 0;
  auto operator<=>(const BosonMode&) const = default;
};

/// One occupation-number basis vector. Only occupied modes are stored:
/// fermion and antifermion momenta are strictly increasing, boson modes are
/// sorted by momentum with nonzero occupancy.
struct FockState {
  std::vector<int> fermions;
  std::vector<int> antifermions;
  std::vector<BosonMode> bosons;

  bool operator==(const FockState&) const = default;
  auto operator<=>(const FockState&) const = default;
};

int charge(const FockState& s);
int momentum(const FockState& s);

/// Total occupancy of bosonic mode `n` (0 when empty).
int boson_occupancy(const FockState& s, int n);
bool has_fermion(const FockState& s, int n);
bool has_antifermion(const FockState& s, int n);

/// True for |;;1^K>, all momentum carried by K bosons in the lowest mode.
bool is_angel_state(const FockState& s);

/// Checks the structural invariants (ordering, Pauli exclusion, occupancy
/// bounds against `K`, total momentum equal to `K`).
bool is_well_formed(const FockState& s, int K);

/// Canonical basis order: charge, then fermions, antifermions, bosons
/// (each lexicographic).
bool canonical_less(const FockState& a, const FockState& b);

/// Textual form `f:[1,2];a:[3];b:[(1,2),(4,1)]`.
std::string to_string(const FockState& s);
FockState parse_state(std::string_view text);

struct FockStateHash {
  std::size_t operator()(const FockState& s) const noexcept;
};

/// Immutable, indexable list of the states of one (K, Q) block.
class Basis {
 public:
  Basis(int K, std::optional<int> Q, std::vector<FockState> states);

  int K() const noexcept { return K_; }
  std::optional<int> Q() const noexcept { return Q_; }
  std::size_t size() const noexcept { return states_.size(); }
  bool empty() const noexcept { return states_.empty(); }

  const FockState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<FockState>& states() const noexcept { return states_; }
  auto begin() const noexcept { return states_.begin(); }
  auto end() const noexcept { return states_.end(); }

  std::optional<std::size_t> find(const FockState& s) const;

 private:
  int K_;
  std::optional<int> Q_;
  std::vector<FockState> states_;
  std::unordered_map<FockState, std::size_t, FockStateHash> index_;
};

/// Every Fock state of total momentum K (and charge Q when given), in
/// canonical order. Throws InvalidArgument for K < 1. An unreachable Q
/// yields an empty basis.
Basis enumerate_basis(int K, std::optional<int> Q = std::nullopt);

/// Number of integer partitions p(K), via Euler's pentagonal recurrence.
std::uint64_t partition_count(int K);

/// Largest number of distinct part sizes in a partition of K:
/// floor(sqrt(2K + 1/4) - 1/2).
int max_distinct_parts(int K);

/// All partitions of `total` as boson mode lists (momentum ascending).
std::vector<std::vector<BosonMode>> boson_partitions(int total);

/// All sets of distinct positive integers summing to `total`, each sorted
/// ascending.
std::vector<std::vector<int>> distinct_part_sets(int total);

}  // namespace lfdlcq
