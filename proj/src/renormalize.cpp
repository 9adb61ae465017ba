#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "lfdlcq/errors.hpp"
#include "lfdlcq/spectrum.hpp"

namespace lfdlcq {

double coupling_from_lambda(double lambda, CouplingConvention convention) {
  switch (convention) {
    case CouplingConvention::identity: return lambda;
    case CouplingConvention::sqrt4pi: return lambda / std::sqrt(4.0 * std::numbers::pi);
  }
  return lambda;
}

std::string to_string(CouplingConvention convention) {
  return convention == CouplingConvention::identity ? "identity" : "sqrt4pi";
}

std::string to_string(BosonCondition c) {
  return c == BosonCondition::lowest ? "lowest" : "single-boson";
}

BosonCondition parse_boson_condition(const std::string& text) {
  if (text == "lowest") return BosonCondition::lowest;
  if (text == "single-boson") return BosonCondition::single_boson;
  throw InvalidArgument("unknown boson condition '" + text + "' (lowest|single-boson)");
}

CouplingConvention parse_coupling_convention(const std::string& text) {
  if (text == "identity") return CouplingConvention::identity;
  if (text == "sqrt4pi") return CouplingConvention::sqrt4pi;
  throw InvalidArgument("unknown coupling convention '" + text + "' (identity|sqrt4pi)");
}

void RenormTarget::validate() const {
  if (!(m_boson_phys > 0.0) || !(m_fermion_phys > 0.0))
    throw InvalidArgument("RenormTarget: physical masses must be positive");
  if (!std::isfinite(lambda)) throw InvalidArgument("RenormTarget: lambda must be finite");
  if (K < 1) throw InvalidArgument("RenormTarget: K must be >= 1");
  if (cutoff < K) throw InvalidArgument("RenormTarget: cutoff must be >= K");
}

ModelParams RenormResult::params(const RenormTarget& target) const {
  ModelParams p;
  p.m_boson = m_boson;
  p.m_fermion = m_fermion;
  p.g = coupling_from_lambda(target.lambda, target.convention);
  p.cutoff = target.cutoff;
  p.K = target.K;
  p.inertias = target.inertias;
  return p;
}

double lowest_eigenvalue(const ModelParams& params, int Q, double tol, unsigned threads) {
  const Basis basis = enumerate_basis(params.K, Q);
  if (basis.empty()) throw InvalidArgument("lowest_eigenvalue: empty (K, Q) block");
  BuildOptions build;
  build.threads = threads;
  const SparseMatrix m = build_mass_matrix(basis, params, build);
  return lowest_eigenpairs(m, 1, tol).eigenvalues.front();
}

namespace {

/// Full diagonalization is used to find the single-boson state; beyond this
/// dimension it is refused.
constexpr std::size_t kSingleBosonDenseLimit = 6000;

/// The two constrained eigenvalues with the bases cached and each solve
/// warm-started from the previous eigenvector of the same block.
class BlockPair {
 public:
  BlockPair(const RenormTarget& t, const RenormSettings& s)
      : target_(t), settings_(s), q0_(enumerate_basis(t.K, 0)), q1_(enumerate_basis(t.K, 1)) {
    FockState one;
    one.bosons = {BosonMode{t.K, 1}};
    single_boson_ = q0_.find(one).value();
    if (t.boson_condition == BosonCondition::single_boson && q0_.size() > kSingleBosonDenseLimit)
      throw ResourceLimit("renormalize: the single-boson condition needs a full Q = 0 spectrum (dim " +
                          std::to_string(q0_.size()) + " > " +
                          std::to_string(kSingleBosonDenseLimit) + ")");
  }

  /// `verify` solves cold with the missed-eigenvalue check; warm starts can
  /// follow an excited level through a crossing.
  double boson(double m_boson, double m_fermion, bool verify = false) {
    const SparseMatrix m = matrix(0, m_boson, m_fermion);
    ++solves_;
    if (target_.boson_condition == BosonCondition::single_boson) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.to_dense());
      if (es.info() != Eigen::Success)
        throw ConvergenceError("dense eigensolver failed", std::numeric_limits<double>::infinity());
      const auto row = es.eigenvectors().row(static_cast<Eigen::Index>(single_boson_));
      Eigen::Index best = 0;
      row.cwiseAbs2().maxCoeff(&best);
      overlap_ = row(best) * row(best);
      return es.eigenvalues()(best);
    }
    const double value = solve(m, last0_, verify);
    overlap_ = (*last0_)(static_cast<Eigen::Index>(single_boson_)) *
               (*last0_)(static_cast<Eigen::Index>(single_boson_));
    return value;
  }

  double fermion(double m_boson, double m_fermion, bool verify = false) {
    ++solves_;
    return solve(matrix(1, m_boson, m_fermion), last1_, verify);
  }

  double overlap() const { return overlap_; }
  int solves() const { return solves_; }

 private:
  SparseMatrix matrix(int Q, double m_boson, double m_fermion) const {
    ModelParams p;
    p.m_boson = m_boson;
    p.m_fermion = m_fermion;
    p.g = coupling_from_lambda(target_.lambda, target_.convention);
    p.cutoff = target_.cutoff;
    p.K = target_.K;
    p.Q = Q;
    p.inertias = target_.inertias;
    BuildOptions build;
    build.threads = settings_.threads;
    return build_mass_matrix(Q == 0 ? q0_ : q1_, p, build);
  }

  double solve(const SparseMatrix& m, std::optional<Eigen::VectorXd>& last, bool verify) {
    SolverOptions opts;
    if (!verify) {
      opts.start = last;
      opts.deflation_check = false;
    }
    EigenResult r = lowest_eigenpairs(m, 1, settings_.eigen_tol, opts);
    last = r.eigenvectors.front();
    return r.eigenvalues.front();
  }

  RenormTarget target_;
  RenormSettings settings_;
  Basis q0_;
  Basis q1_;
  std::size_t single_boson_ = 0;
  std::optional<Eigen::VectorXd> last0_;
  std::optional<Eigen::VectorXd> last1_;
  double overlap_ = 0.0;
  int solves_ = 0;
};

struct SecantOutcome {
  double x;
  double f;
  bool converged;
  bool stalled;  ///< |f| stopped improving: the condition does not respond to x
};

/// Secant iteration on f(x) = 0 from x0, kept inside (floor, ceiling) by
/// halving the distance to a bound that a step overshoots.
SecantOutcome secant(const std::function<double(double)>& f, double x0, double f0, double tol,
                     int max_steps, double floor, double ceiling) {
  if (std::abs(f0) <= tol) return {x0, f0, true, false};
  double x1 = x0 + std::max(1e-3, 1e-2 * std::abs(x0));
  double f1 = f(x1);
  double best_x = x0, best_f = f0;
  if (std::abs(f1) < std::abs(best_f)) best_x = x1, best_f = f1;
  int idle = 0;
  for (int step = 0; step < max_steps; ++step) {
    if (std::abs(f1) <= tol) return {x1, f1, true, false};
    const double denom = f1 - f0;
    double x2 = (denom != 0.0) ? x1 - f1 * (x1 - x0) / denom : x1 * 1.01 + 1e-3;
    if (!std::isfinite(x2)) x2 = x1 * 1.01 + 1e-3;
    if (x2 <= floor) x2 = floor + 0.5 * (x1 - floor);
    if (x2 >= ceiling) x2 = ceiling - 0.5 * (ceiling - x1);
    x0 = x1, f0 = f1;
    x1 = x2, f1 = f(x1);
    if (std::abs(f1) < 0.99 * std::abs(best_f)) {
      best_x = x1, best_f = f1;
      idle = 0;
    } else if (++idle >= 6) {
      return {best_x, best_f, false, true};
    }
  }
  return {best_x, best_f, std::abs(best_f) <= tol, false};
}

std::string describe(const RenormStep& s) {
  std::ostringstream os;
  os.precision(10);
  os << "sweep " << s.sweep << ": m_B=" << s.m_boson << " m_F=" << s.m_fermion
     << " constrained(Q=0)=" << s.lowest_q0 << " lowest(Q=1)=" << s.lowest_q1;
  return os.str();
}

}  // namespace

RenormResult renormalize(const RenormTarget& target, const RenormSettings& settings) {
  target.validate();
  RenormResult r;
  const double mb_phys2 = target.m_boson_phys * target.m_boson_phys;
  const double mf_phys2 = target.m_fermion_phys * target.m_fermion_phys;

  const double alpha2 = self_induced_inertias(2, target.cutoff).alpha;
  const double seed_mb2 =
      mb_phys2 - alpha2 / (4.0 * std::numbers::pi) * target.lambda * target.lambda;
  if (seed_mb2 <= 0.0)
    throw InfeasibleSeed("seed m_B^2 = " + std::to_string(seed_mb2) +
                         " <= 0; use a larger cutoff or a smaller lambda");
  r.seed_m_boson = std::sqrt(seed_mb2);

  // the free theory is renormalized as given
  if (target.lambda == 0.0) {
    r.m_boson = target.m_boson_phys;
    r.m_fermion = target.m_fermion_phys;
    r.seed_m_boson = target.m_boson_phys;
    r.lowest_q0 = mb_phys2;
    r.lowest_q1 = mf_phys2;
    return r;
  }

  BlockPair blocks(target, settings);
  double mb2 = settings.start_m_boson ? (*settings.start_m_boson) * (*settings.start_m_boson)
                                      : seed_mb2;
  double mf = settings.start_m_fermion.value_or(target.m_fermion_phys);
  const double tol0 = settings.rel_tol * mb_phys2;
  const double tol1 = settings.rel_tol * mf_phys2;
  const double mb2_ceiling = 4.0 * std::max(mb2, mb_phys2);
  const double mf_ceiling = 10.0 * std::max(mf, target.m_fermion_phys);

  std::vector<std::string> trace_text;
  auto fail = [&](const std::string& why, double residual) {
    throw ConvergenceError("renormalize: " + why, residual, trace_text);
  };

  try {
    double low0 = blocks.boson(std::sqrt(mb2), mf);
    double low1 = blocks.fermion(std::sqrt(mb2), mf);

    for (int sweep = 1; sweep <= settings.max_sweeps; ++sweep) {
      // fermion condition at fixed m_B
      const double mb_now = std::sqrt(mb2);
      auto f1 = [&](double x) { return blocks.fermion(mb_now, x) - mf_phys2; };
      const double mf_before = mf;
      SecantOutcome sf =
          secant(f1, mf, low1 - mf_phys2, tol1, settings.max_secant_steps, 0.0, mf_ceiling);
      mf = sf.x;
      low1 = sf.f + mf_phys2;
      if (mf != mf_before) low0 = blocks.boson(std::sqrt(mb2), mf);

      // boson condition at fixed m_F, solved in m_B^2 > 0
      auto f0 = [&](double x) { return blocks.boson(std::sqrt(x), mf) - mb_phys2; };
      const double mb2_before = mb2;
      SecantOutcome sb =
          secant(f0, mb2, low0 - mb_phys2, tol0, settings.max_secant_steps, 0.0, mb2_ceiling);
      mb2 = sb.x;
      low0 = blocks.boson(std::sqrt(mb2), mf);
      if (mb2 != mb2_before) low1 = blocks.fermion(std::sqrt(mb2), mf);

      RenormStep step{sweep, std::sqrt(mb2), mf, low0, low1};
      r.trace.push_back(step);
      trace_text.push_back(describe(step));

      if (sf.stalled && !sf.converged)
        fail("the lowest Q = 1 eigenvalue does not respond to m_F (best " +
                 std::to_string(low1) + " vs target " + std::to_string(mf_phys2) + ")",
             std::abs(low1 - mf_phys2) / mf_phys2);
      if (sb.stalled && !sb.converged)
        fail("the constrained Q = 0 eigenvalue (" + to_string(target.boson_condition) +
                 ") does not respond to m_B (best " + std::to_string(low0) + " vs target " +
                 std::to_string(mb_phys2) + ")",
             std::abs(low0 - mb_phys2) / mb_phys2);

      bool done = std::abs(low0 - mb_phys2) <= tol0 && std::abs(low1 - mf_phys2) <= tol1;
      if (done) {
        low0 = blocks.boson(std::sqrt(mb2), mf, true);
        low1 = blocks.fermion(std::sqrt(mb2), mf, true);
        done = std::abs(low0 - mb_phys2) <= tol0 && std::abs(low1 - mf_phys2) <= tol1;
      }
      if (done) {
        r.m_boson = std::sqrt(mb2);
        r.m_fermion = mf;
        r.lowest_q0 = low0;
        r.lowest_q1 = low1;
        r.boson_overlap = blocks.overlap();
        r.sweeps = sweep;
        r.eigen_solves = blocks.solves();
        return r;
      }
    }
    fail("no convergence after " + std::to_string(settings.max_sweeps) + " sweeps",
         std::max(std::abs(low0 - mb_phys2) / mb_phys2, std::abs(low1 - mf_phys2) / mf_phys2));
  } catch (const ConvergenceError& e) {
    if (!e.trace().empty()) throw;
    fail(std::string("eigensolver failed: ") + e.what(), e.best_residual());
  }
  return r;
}

std::vector<ScanRow> spectrum_scan(const RenormTarget& base, const std::vector<int>& Ks,
                                   std::size_t eigen_count, const RenormSettings& settings) {
  std::vector<ScanRow> rows;
  for (int K : Ks) {
    ScanRow row;
    row.K = K;
    RenormTarget t = base;
    t.K = K;
    try {
      row.renorm = renormalize(t, settings);
      for (int Q : {0, 1}) {
        ModelParams p = row.renorm.params(t);
        p.Q = Q;
        const Basis basis = enumerate_basis(K, Q);
        BuildOptions build;
        build.threads = settings.threads;
        const SparseMatrix m = build_mass_matrix(basis, p, build);
        const auto count = std::min(eigen_count, basis.size());
        auto eig = lowest_eigenpairs(m, count, settings.eigen_tol);
        (Q == 0 ? row.lowest_q0 : row.lowest_q1) = eig.eigenvalues;
      }
      row.converged = true;
    } catch (const Error& e) {
      row.error = e.kind() + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lfdlcq
