#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lfdlcq/hamiltonian.hpp"
#include "lfdlcq/sparse_matrix.hpp"

namespace lfdlcq {

struct EigenResult {
  std::vector<double> eigenvalues;           ///< ascending M^2 values
  std::vector<Eigen::VectorXd> eigenvectors;  ///< unit norm, indexed like the basis
  std::vector<double> residuals;             ///< ||A v - lambda v||_2
  bool used_lanczos = false;
  int iterations = 0;
};

enum class EigenMethod { automatic, dense, lanczos };

struct SolverOptions {
  EigenMethod method = EigenMethod::automatic;
  std::size_t dense_limit = 512;  ///< automatic picks dense at or below this dimension
  std::uint64_t seed = 20200117;
  /// Krylov basis size before a restart; 0 means max(160, 4 * count + 80).
  int max_iterations = 0;
  int max_restarts = 400;
  /// Optional starting vector, e.g. the eigenvector of a nearby problem.
  std::optional<Eigen::VectorXd> start;
  /// Confirm that no eigenvalue was missed below the ones found: by the
  /// inertia of A - sigma I up to `inertia_limit`, by deflated passes above.
  bool deflation_check = true;
  std::size_t inertia_limit = 6000;
};

/// The `count` smallest eigenpairs of a symmetric matrix. Each pair meets
/// ||A v - lambda v|| <= tol * max(1, |lambda|). Lanczos runs with full
/// reorthogonalization and deflated restarts so repeated eigenvalues are
/// recovered. Throws ConvergenceError with the best residual otherwise.
EigenResult lowest_eigenpairs(const SparseMatrix& matrix, std::size_t count, double tol = 1e-9,
                              const SolverOptions& options = {});

/// Number of eigenvalues strictly below `sigma` (Sylvester inertia of a
/// sparse LDL^T factorization of A - sigma I). nullopt if it breaks down.
std::optional<std::size_t> eigenvalue_count_below(const SparseMatrix& matrix, double sigma);

/// How the Lagrangian coupling lambda maps onto the Hamiltonian's g.
enum class CouplingConvention { identity, sqrt4pi };

double coupling_from_lambda(double lambda, CouplingConvention convention);
std::string to_string(CouplingConvention convention);
CouplingConvention parse_coupling_convention(const std::string& text);

/// Which Q = 0 eigenvalue the boson condition constrains.
enum class BosonCondition {
  lowest,        ///< the lowest Q = 0 eigenvalue, as the condition is stated
  single_boson,  ///< the Q = 0 eigenstate with the largest weight on |;;(K,1)>
};

std::string to_string(BosonCondition c);
BosonCondition parse_boson_condition(const std::string& text);

struct RenormTarget {
  double m_boson_phys = 1.0;   ///< physical boson mass
  double m_fermion_phys = 1.0; ///< physical fermion mass
  double lambda = 0.0;         ///< bare coupling
  int cutoff = 0;
  int K = 1;
  CouplingConvention convention = CouplingConvention::identity;
  InertiaForm inertias = InertiaForm::closed_form;
  BosonCondition boson_condition = BosonCondition::lowest;

  void validate() const;
};

struct RenormSettings {
  double rel_tol = 1e-6;
  int max_sweeps = 50;
  int max_secant_steps = 60;
  double eigen_tol = 1e-8;
  unsigned threads = 1;
  /// Start from these bare masses instead of the analytic seed.
  std::optional<double> start_m_boson;
  std::optional<double> start_m_fermion;
};

struct RenormStep {
  int sweep;
  double m_boson;
  double m_fermion;
  double lowest_q0;  ///< constrained M^2 in the Q = 0 block
  double lowest_q1;  ///< lowest M^2 in the Q = 1 block
};

struct RenormResult {
  double m_boson = 0.0;
  double m_fermion = 0.0;
  double seed_m_boson = 0.0;
  double lowest_q0 = 0.0;  ///< the constrained Q = 0 eigenvalue
  double lowest_q1 = 0.0;
  double boson_overlap = 0.0;  ///< single-boson weight of that Q = 0 state
  int sweeps = 0;
  int eigen_solves = 0;
  std::vector<RenormStep> trace;

  ModelParams params(const RenormTarget& target) const;
};

/// Bare (m_B, m_F) such that the constrained Q = 0 eigenvalue and the lowest
/// Q = 1 eigenvalue of M^2 equal the squared physical masses. Seeds m_B^2 =
/// m_B,phys^2 - alpha_2 lambda^2 / (4 pi) and m_F = m_F,phys, then
/// alternates 1D secant solves. Throws InfeasibleSeed or ConvergenceError;
/// the latter also when a condition does not respond to its mass.
RenormResult renormalize(const RenormTarget& target, const RenormSettings& settings = {});

/// Lowest eigenvalue of M^2 in the (K, Q) block for the given bare masses.
double lowest_eigenvalue(const ModelParams& params, int Q, double tol = 1e-10,
                         unsigned threads = 1);

struct ScanRow {
  int K = 0;
  bool converged = false;
  std::string error;  ///< empty on success
  RenormResult renorm;
  std::vector<double> lowest_q0;  ///< lowest eigenvalues, Q = 0
  std::vector<double> lowest_q1;  ///< lowest eigenvalues, Q = 1
};

/// One renormalize + diagonalize per K. Per-K failures are recorded in the
/// row and do not stop the scan.
std::vector<ScanRow> spectrum_scan(const RenormTarget& base, const std::vector<int>& Ks,
                                   std::size_t eigen_count = 3,
                                   const RenormSettings& settings = {});

}  // namespace lfdlcq
