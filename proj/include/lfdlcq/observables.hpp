#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lfdlcq/fock_basis.hpp"
#include "lfdlcq/hamiltonian.hpp"

namespace lfdlcq {

/// Parton distributions at x = n/K, n = 1..K.
struct PdfEntry {
  int n = 0;
  double x = 0.0;
  double fermion = 0.0;
  double antifermion = 0.0;
  double boson = 0.0;
};

struct PdfTable {
  int K = 0;
  std::vector<PdfEntry> entries;
  std::optional<double> qsq;  ///< probing scale, when the state was truncated

  /// sum_n n (f_f + f_a + f_b); equals K for a unit-norm state.
  double momentum_sum() const;
  /// sum_n (f_f - f_a); equals the charge of the state.
  double charge_sum() const;
};

/// Masses entering the free invariant mass of a Fock state.
struct FreeMasses {
  double m_boson = 1.0;
  double m_fermion = 1.0;
};

inline FreeMasses bare_masses(const ModelParams& p) { return {p.m_boson, p.m_fermion}; }

/// Expectation of the single-mode number operators in `vector`, which must
/// be unit norm within 1e-10 and indexed against `basis`.
PdfTable pdf(const Eigen::VectorXd& vector, const Basis& basis);

/// Occupation of mode n summed over species, per basis state.
int total_occupation(const FockState& state, int n);

/// K * sum over occupied modes of w m^2 / n.
double invariant_mass_free(const FockState& state, int K, const FreeMasses& masses);
double invariant_mass_free(const FockState& state, const ModelParams& params);

/// Largest free invariant mass over the basis.
double qmax2(const Basis& basis, const FreeMasses& masses);
double qmax2(const Basis& basis, const ModelParams& params);

struct Truncation {
  Eigen::VectorXd vector;  ///< renormalized to unit norm
  double kept_fraction = 1.0;
  std::size_t kept_states = 0;
};

/// Drops components whose free invariant mass exceeds `qsq` and
/// renormalizes. Throws DegenerateTruncation when less than 1e-6 of the
/// probability survives.
Truncation truncate_state(const Eigen::VectorXd& vector, const Basis& basis,
                          const FreeMasses& masses, double qsq);

}  // namespace lfdlcq
