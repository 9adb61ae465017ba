#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "lfdlcq/errors.hpp"
#include "lfdlcq/spectrum.hpp"

namespace lfdlcq {

namespace {

double residual_norm(const SparseMatrix& a, const Eigen::VectorXd& v, double lambda) {
  return (a.multiply(v) - lambda * v).norm();
}

bool within_tol(double residual, double lambda, double tol) {
  return residual <= tol * std::max(1.0, std::abs(lambda));
}

EigenResult dense_eigenpairs(const SparseMatrix& a, std::size_t count, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.to_dense());
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("dense eigensolver failed", std::numeric_limits<double>::infinity());
  EigenResult r;
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double lambda = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(i));
    v.normalize();
    const double res = residual_norm(a, v, lambda);
    if (!within_tol(res, lambda, tol)) worst = std::max(worst, res);
    r.eigenvalues.push_back(lambda);
    r.eigenvectors.push_back(std::move(v));
    r.residuals.push_back(res);
  }
  if (worst > 0.0)
    throw ConvergenceError("dense eigenpairs miss the residual tolerance", worst);
  return r;
}

/// Orthogonalizes `w` against the columns [0, cols) of `basis` and against
/// `locked`, twice (classical Gram-Schmidt with reorthogonalization).
void orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Eigen::Index cols,
                   const std::vector<Eigen::VectorXd>& locked) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& u : locked) w -= u.dot(w) * u;
    if (cols > 0) {
      const auto block = basis.leftCols(cols);
      w -= block * (block.transpose() * w);
    }
  }
}

struct LanczosPass {
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;
  int steps = 0;
  double best_unconverged = 0.0;
  bool converged = false;
};

/// Thick-restart Lanczos on A restricted to the complement of `locked`.
/// The basis grows to `block` vectors; the Rayleigh-Ritz problem is then
/// solved explicitly, the lowest Ritz vectors are kept and the expansion
/// continues from the residual direction.
LanczosPass lanczos_pass(const SparseMatrix& a, std::size_t want, double tol, int block,
                         int max_restarts, std::mt19937_64& rng,
                         const std::vector<Eigen::VectorXd>& locked, const Eigen::VectorXd* start) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  const auto room = n - static_cast<Eigen::Index>(locked.size());
  LanczosPass out;
  if (room <= 0) {
    out.converged = true;
    return out;
  }
  const Eigen::Index cap = std::min<Eigen::Index>(std::max<Eigen::Index>(block, static_cast<Eigen::Index>(want) + 2), room);
  const auto keep = std::min<Eigen::Index>(cap - 1, std::max<Eigen::Index>(static_cast<Eigen::Index>(want) + 4, cap / 2));

  Eigen::MatrixXd V(n, cap), W(n, cap);
  Eigen::Index j = 0;

  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  // a warm start keeps a little noise so no wanted direction is missing
  if (start != nullptr && start->size() == n && start->norm() > 0.0)
    v = *start / start->norm() + 1e-3 * v / v.norm();

  auto project = [&](Eigen::VectorXd& w) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : locked) w -= u.dot(w) * u;
      if (j > 0) w -= V.leftCols(j) * (V.leftCols(j).transpose() * w);
    }
  };
  const double scale = std::max(1.0, a.max_abs());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz;
  bool fresh_start = true;  // v is a restart direction, not A v_j
  for (int cycle = 0; cycle <= max_restarts; ++cycle) {
    bool invariant = false;
    while (j < cap) {
      project(v);
      double nv = v.norm();
      if (nv <= 1e-12 * scale && fresh_start) {
        for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
        project(v);
        nv = v.norm();
      }
      fresh_start = false;
      if (nv <= 1e-12 * scale) {
        invariant = true;  // Krylov space closed under A
        break;
      }
      V.col(j) = v / nv;
      Eigen::VectorXd w = a.multiply(Eigen::VectorXd(V.col(j)));
      for (const auto& u : locked) w -= u.dot(w) * u;
      W.col(j) = w;
      ++j;
      ++out.steps;
      v = w;
    }

    const Eigen::MatrixXd H = V.leftCols(j).transpose() * W.leftCols(j);
    ritz.compute(0.5 * (H + H.transpose()));
    const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(want), j);
    bool ok = k == static_cast<Eigen::Index>(want) || invariant || j == room;
    double worst = 0.0;
    Eigen::VectorXd restart;
    for (Eigen::Index i = 0; i < k; ++i) {
      Eigen::VectorXd y = V.leftCols(j) * ritz.eigenvectors().col(i);
      Eigen::VectorXd r = a.multiply(y);
      for (const auto& u : locked) r -= u.dot(r) * u;
      r -= ritz.eigenvalues()(i) * y;
      const double res = r.norm();
      if (!within_tol(res, ritz.eigenvalues()(i), tol * 0.5)) {
        ok = false;
        if (res > worst) worst = res, restart = std::move(r);
      }
    }
    out.best_unconverged = worst;
    if (ok || invariant || j == room) {
      out.converged = ok;
      for (Eigen::Index i = 0; i < k; ++i) {
        Eigen::VectorXd y = V.leftCols(j) * ritz.eigenvectors().col(i);
        y.normalize();
        out.values.push_back(ritz.eigenvalues()(i));
        out.vectors.push_back(std::move(y));
      }
      return out;
    }

    // restart: keep the lowest Ritz vectors, continue from a residual
    const Eigen::Index p = std::min(keep, j - 1);
    const Eigen::MatrixXd S = ritz.eigenvectors().leftCols(p);
    v = std::move(restart);
    const Eigen::MatrixXd Vk = V.leftCols(j) * S;
    const Eigen::MatrixXd Wk = W.leftCols(j) * S;
    V.leftCols(p) = Vk;
    W.leftCols(p) = Wk;
    j = p;
    if (cycle % 4 == 3) {
      // recombined products drift; recompute them from the matrix
      for (Eigen::Index c = 0; c < j; ++c) {
        Eigen::VectorXd w = a.multiply(Eigen::VectorXd(V.col(c)));
        for (const auto& u : locked) w -= u.dot(w) * u;
        W.col(c) = w;
      }
    }
    fresh_start = true;
  }
  return out;
}

EigenResult lanczos_eigenpairs(const SparseMatrix& a, std::size_t count, double tol,
                               const SolverOptions& options) {
  const int block = options.max_iterations > 0 ? options.max_iterations
                                               : static_cast<int>(std::max<std::size_t>(160, 4 * count + 80));
  std::mt19937_64 rng(options.seed);
  std::vector<Eigen::VectorXd> locked;
  std::vector<double> locked_values;
  int total_steps = 0;
  double best_unconverged = 0.0;
  std::size_t missing = 0;

  for (int pass = 0; pass < 8; ++pass) {
    const std::size_t remaining = a.dim() - locked.size();
    if (remaining == 0) break;
    // later passes only look for a missed value below the ones locked
    const std::size_t want = pass == 0 ? std::min(count, remaining) : missing;
    const Eigen::VectorXd* start = pass == 0 && options.start ? &*options.start : nullptr;
    LanczosPass p = lanczos_pass(a, want, tol, block, options.max_restarts, rng, locked, start);
    total_steps += p.steps;
    if (!p.converged) {
      best_unconverged = p.best_unconverged;
      throw ConvergenceError("Lanczos did not converge the lowest " + std::to_string(want) +
                                 " Ritz pairs in " + std::to_string(p.steps) + " matrix-vector products",
                             best_unconverged);
    }
    // threshold: the count-th smallest value locked so far
    double ceiling = std::numeric_limits<double>::infinity();
    if (locked_values.size() >= count) {
      auto sorted = locked_values;
      std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(count - 1), sorted.end());
      ceiling = sorted[count - 1];
    }
    bool found_new = false;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      const double slack = tol * std::max(1.0, std::abs(ceiling));
      if (p.values[i] < ceiling + slack || locked.size() < count) {
        Eigen::VectorXd y = p.vectors[i];
        orthogonalize(y, Eigen::MatrixXd(), 0, locked);
        y.normalize();
        locked.push_back(std::move(y));
        locked_values.push_back(p.values[i]);
        found_new = true;
      }
    }
    if (pass > 0 && !found_new) break;
    if (!options.deflation_check || locked.size() < count) {
      if (locked.size() >= count) break;
      missing = count - locked.size();
      continue;
    }
    // the count-th smallest locked value bounds what may have been missed
    auto sorted = locked_values;
    std::sort(sorted.begin(), sorted.end());
    const double top = sorted[count - 1];
    if (a.dim() <= options.inertia_limit) {
      const double sigma = top + 10.0 * tol * std::max(1.0, std::abs(top));
      const auto below = eigenvalue_count_below(a, sigma);
      if (below) {
        const auto have = static_cast<std::size_t>(
            std::count_if(sorted.begin(), sorted.end(), [&](double x) { return x < sigma; }));
        if (*below <= have) break;
        missing = *below - have;
        continue;
      }
    }
    if (pass > 0 && !found_new) break;
    missing = 1;
  }

  std::vector<std::size_t> order(locked.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return locked_values[x] < locked_values[y]; });

  EigenResult r;
  r.used_lanczos = true;
  r.iterations = total_steps;
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(count, order.size()); ++i) {
    const auto& vec = locked[order[i]];
    // Rayleigh quotient sharpens the Ritz value
    const double lambda = vec.dot(a.multiply(vec));
    const double res = residual_norm(a, vec, lambda);
    if (!within_tol(res, lambda, tol)) worst = std::max(worst, res);
    r.eigenvalues.push_back(lambda);
    r.eigenvectors.push_back(vec);
    r.residuals.push_back(res);
  }
  if (r.eigenvalues.size() < count)
    throw ConvergenceError("Lanczos found fewer eigenpairs than requested", worst);
  if (worst > 0.0) throw ConvergenceError("Lanczos eigenpairs miss the residual tolerance", worst);
  return r;
}

}  // namespace

std::optional<std::size_t> eigenvalue_count_below(const SparseMatrix& matrix, double sigma) {
  const auto n = static_cast<Eigen::Index>(matrix.dim());
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t i = 0; i < matrix.dim(); ++i)
    for (const auto& e : matrix.row(i))
      if (e.col <= i)  // lower triangle suffices
        entries.emplace_back(static_cast<int>(i), static_cast<int>(e.col), e.value);
  for (Eigen::Index i = 0; i < n; ++i) entries.emplace_back(static_cast<int>(i), static_cast<int>(i), -sigma);
  Eigen::SparseMatrix<double> shifted(n, n);
  shifted.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd& d = ldlt.vectorD();
  std::size_t negative = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d(i)) || d(i) == 0.0) return std::nullopt;
    if (d(i) < 0.0) ++negative;
  }
  return negative;
}

EigenResult lowest_eigenpairs(const SparseMatrix& matrix, std::size_t count, double tol,
                              const SolverOptions& options) {
  if (count == 0) return {};
  if (count > matrix.dim())
    throw InvalidArgument("lowest_eigenpairs: count " + std::to_string(count) + " exceeds dim " +
                          std::to_string(matrix.dim()));
  const bool dense = options.method == EigenMethod::dense ||
                     (options.method == EigenMethod::automatic && matrix.dim() <= options.dense_limit);
  return dense ? dense_eigenpairs(matrix, count, tol) : lanczos_eigenpairs(matrix, count, tol, options);
}

}  // namespace lfdlcq
