#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lfdlcq/fock_basis.hpp"
#include "lfdlcq/sparse_matrix.hpp"

namespace lfdlcq {

/// Which expression feeds the self-induced inertias into the mass term.
/// The harmonic-number closed forms and the bracket sums they summarize
/// differ for alpha and gamma; see README.
enum class InertiaForm { closed_form, bracket_sum };

/// Bare parameters of one fixed-K block Hamiltonian.
struct ModelParams {
  double m_boson = 1.0;    ///< bare boson mass
  double m_fermion = 1.0;  ///< bare fermion mass
  double g = 0.0;          ///< coupling as it multiplies the interaction terms
  int cutoff = 0;          ///< momentum cutoff entering the inertias; must be >= K
  int K = 1;
  std::optional<int> Q;
  InertiaForm inertias = InertiaForm::closed_form;

  /// Throws InvalidArgument on K < 1, cutoff < K, or non-finite masses.
  void validate() const;
};

/// {n|m}: 0 if n == 0 or m == 0, otherwise delta(m, -n) / n.
double bracket(int n, int m);

/// H_n = 1 + 1/2 + ... + 1/n, H_0 = 0.
double harmonic_number(int n);

struct InertiaTriple {
  double alpha = 0.0;  ///< boson
  double beta = 0.0;   ///< fermion
  double gamma = 0.0;  ///< antifermion
};

/// Closed harmonic-number forms of the self-induced inertias at mode n.
/// Requires 1 <= n <= cutoff.
InertiaTriple self_induced_inertias(int n, int cutoff);

/// The inertias as the literal bracket sums over m = 1..cutoff.
InertiaTriple inertia_bracket_sums(int n, int cutoff);

/// Analytic lower/upper bounds on the inertias (valid for n < cutoff).
struct InertiaBounds {
  InertiaTriple lower;
  InertiaTriple upper;
};
InertiaBounds inertia_bounds(int n, int cutoff);

/// Bookkeeping tag for the families of terms in H.
enum class TermFamily { mass, vertex, seagull, fork };

struct Image {
  FockState state;
  double amplitude;
};

/// The Hamiltonian H of one K block, with inertia tables precomputed.
/// Immutable after construction; `apply` is safe to call concurrently.
class MassOperator {
 public:
  explicit MassOperator(const ModelParams& params);

  const ModelParams& params() const noexcept { return params_; }
  const InertiaTriple& inertias(int n) const { return inertia_[static_cast<std::size_t>(n)]; }

  /// All distinct images H|state> with summed amplitudes (exact zeros
  /// dropped), sorted by state. Includes the diagonal.
  std::vector<Image> apply(const FockState& state) const;

  /// Diagonal mass term only.
  double mass_term(const FockState& state) const;

  /// Images of a single family; `apply` sums mass and all three families.
  void apply_family(TermFamily family, const FockState& state, std::vector<Image>& out) const;

  /// Images of the first seagull line (b+_k b_m c+_l c_n) only.
  void apply_seagull_fermion_boson(const FockState& state, std::vector<Image>& out) const;

 private:
  ModelParams params_;
  std::vector<InertiaTriple> inertia_;
};

/// Convenience wrapper around MassOperator::apply.
std::vector<Image> apply_hamiltonian(const FockState& state, const ModelParams& params);

struct BuildOptions {
  std::size_t max_dim = 5'000'000;
  unsigned threads = 1;
  double zero_threshold = 1e-14;
};

/// M^2 = K H on the given basis. Throws ResourceLimit if the basis exceeds
/// `max_dim`, InvalidArgument if basis.K() != params.K.
SparseMatrix build_mass_matrix(const Basis& basis, const ModelParams& params,
                               const BuildOptions& options = {});

/// Largest number of entries with |value| > threshold in any row.
std::size_t sparsity(const SparseMatrix& matrix, double threshold = 1e-14);

/// max |H_ij| for the H underlying an M^2 = K H matrix.
double max_abs_element(const SparseMatrix& mass_matrix, int K);

/// <to| H_S1 |from> for the b+_k b_m c+_l c_n seagull line, from its closed
/// expression g^2 sqrt(w w' / (l n)) ((1 - d_kn)/(k - n + d_kn) + 1/(k + l))
/// times the fermion sign of the canonical ordering. Nonzero only when the
/// fermion sets differ by exactly one mode each, the antifermions agree, and
/// one boson moved from mode n to mode l; identical states give 0.
double matrix_element_hs1(const FockState& from, const FockState& to, const ModelParams& params);

/// Sparsity bounds: s_upper = K^2/2 + 3K/2 - 1, s_lower = K^2/2 - 3K/2 + 1.
double sparsity_upper_bound(int K);
double sparsity_lower_bound(int K);

}  // namespace lfdlcq
