#include "lfdlcq/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lfdlcq/errors.hpp"

namespace lfdlcq {

double PdfTable::momentum_sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.n * (e.fermion + e.antifermion + e.boson);
  return s;
}

double PdfTable::charge_sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.fermion - e.antifermion;
  return s;
}

PdfTable pdf(const Eigen::VectorXd& vector, const Basis& basis) {
  if (static_cast<std::size_t>(vector.size()) != basis.size())
    throw InvalidArgument("pdf: vector length " + std::to_string(vector.size()) +
                          " does not match basis size " + std::to_string(basis.size()));
  const double norm = vector.norm();
  if (std::abs(norm - 1.0) > 1e-10)
    throw InvalidArgument("pdf: state norm " + std::to_string(norm) + " differs from 1");

  PdfTable t;
  t.K = basis.K();
  t.entries.resize(static_cast<std::size_t>(t.K));
  for (int n = 1; n <= t.K; ++n) {
    auto& e = t.entries[static_cast<std::size_t>(n - 1)];
    e.n = n;
    e.x = static_cast<double>(n) / t.K;
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double p = vector(static_cast<Eigen::Index>(i)) * vector(static_cast<Eigen::Index>(i));
    if (p == 0.0) continue;
    const auto& s = basis[i];
    for (int n : s.fermions) t.entries[static_cast<std::size_t>(n - 1)].fermion += p;
    for (int n : s.antifermions) t.entries[static_cast<std::size_t>(n - 1)].antifermion += p;
    for (const auto& b : s.bosons) t.entries[static_cast<std::size_t>(b.n - 1)].boson += p * b.w;
  }
  return t;
}

int total_occupation(const FockState& s, int n) {
  return (has_fermion(s, n) ? 1 : 0) + (has_antifermion(s, n) ? 1 : 0) + boson_occupancy(s, n);
}

double invariant_mass_free(const FockState& s, int K, const FreeMasses& masses) {
  const double mb2 = masses.m_boson * masses.m_boson;
  const double mf2 = masses.m_fermion * masses.m_fermion;
  double sum = 0.0;
  for (int n : s.fermions) sum += mf2 / n;
  for (int n : s.antifermions) sum += mf2 / n;
  for (const auto& b : s.bosons) sum += b.w * mb2 / b.n;
  return K * sum;
}

double invariant_mass_free(const FockState& s, const ModelParams& params) {
  return invariant_mass_free(s, params.K, bare_masses(params));
}

double qmax2(const Basis& basis, const FreeMasses& masses) {
  if (basis.empty()) throw InvalidArgument("qmax2: empty basis");
  double best = 0.0;
  for (const auto& s : basis) best = std::max(best, invariant_mass_free(s, basis.K(), masses));
  return best;
}

double qmax2(const Basis& basis, const ModelParams& params) {
  return qmax2(basis, bare_masses(params));
}

Truncation truncate_state(const Eigen::VectorXd& vector, const Basis& basis,
                          const FreeMasses& masses, double qsq) {
  if (static_cast<std::size_t>(vector.size()) != basis.size())
    throw InvalidArgument("truncate_state: vector does not match basis");
  const double norm2 = vector.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10) throw InvalidArgument("truncate_state: input is not unit norm");

  Truncation t;
  t.vector = vector;
  double kept = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    if (invariant_mass_free(basis[i], basis.K(), masses) > qsq) {
      t.vector(idx) = 0.0;
    } else {
      kept += vector(idx) * vector(idx);
      ++t.kept_states;
    }
  }
  if (t.kept_states == basis.size()) {
    t.kept_fraction = 1.0;
    return t;
  }
  t.kept_fraction = kept / norm2;
  if (t.kept_fraction < 1e-6)
    throw DegenerateTruncation("truncate_state: cutoff keeps only " + std::to_string(t.kept_fraction) +
                                   " of the probability",
                               t.kept_fraction);
  t.vector /= std::sqrt(kept);
  return t;
}

}  // namespace lfdlcq
