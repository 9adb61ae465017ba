#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <thread>

#include "lfdlcq/errors.hpp"
#include "lfdlcq/hamiltonian.hpp"

namespace lfdlcq {

SparseMatrix build_mass_matrix(const Basis& basis, const ModelParams& params,
                               const BuildOptions& options) {
  if (basis.K() != params.K)
    throw InvalidArgument("build_mass_matrix: basis K=" + std::to_string(basis.K()) +
                          " but params K=" + std::to_string(params.K));
  if (basis.size() > options.max_dim)
    throw ResourceLimit("build_mass_matrix: dimension " + std::to_string(basis.size()) +
                        " exceeds cap " + std::to_string(options.max_dim));

  const MassOperator op(params);
  const double K = params.K;
  const std::size_t dim = basis.size();
  std::vector<std::vector<SparseEntry>> rows(dim);

  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& im : op.apply(basis[i])) {
        const double v = K * im.amplitude;
        if (std::abs(v) <= options.zero_threshold) continue;
        auto j = basis.find(im.state);
        // images keep K and charge; a missing image means the basis was not
        // a complete (K, Q) block
        if (!j)
          throw InvalidArgument("build_mass_matrix: image " + to_string(im.state) +
                                " of " + to_string(basis[i]) + " not in basis");
        rows[i].push_back({*j, v});
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, dim / 64 + 1));
  if (threads == 1) {
    fill(0, dim);
  } else {
    std::vector<std::jthread> workers;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (dim + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        try {
          fill(std::min(dim, t * chunk), std::min(dim, (t + 1) * chunk));
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    workers.clear();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return SparseMatrix::from_rows(std::move(rows));
}

std::size_t sparsity(const SparseMatrix& matrix, double threshold) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < matrix.dim(); ++i) {
    auto r = matrix.row(i);
    const auto count = static_cast<std::size_t>(std::count_if(
        r.begin(), r.end(), [threshold](const SparseEntry& e) { return std::abs(e.value) > threshold; }));
    best = std::max(best, count);
  }
  return best;
}

double max_abs_element(const SparseMatrix& mass_matrix, int K) {
  if (K < 1) throw InvalidArgument("max_abs_element: K must be >= 1");
  return mass_matrix.max_abs() / K;
}

double sparsity_upper_bound(int K) { return 0.5 * K * K + 1.5 * K - 1.0; }
double sparsity_lower_bound(int K) { return 0.5 * K * K - 1.5 * K + 1.0; }

namespace {

/// Elements of `a` missing from `b` (both sorted).
std::vector<int> difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

int count_below(const std::vector<int>& v, int k) {
  return static_cast<int>(std::lower_bound(v.begin(), v.end(), k) - v.begin());
}

}  // namespace

double matrix_element_hs1(const FockState& from, const FockState& to, const ModelParams& params) {
  if (from.antifermions != to.antifermions) return 0.0;
  const auto removed = difference(from.fermions, to.fermions);
  const auto added = difference(to.fermions, from.fermions);
  if (removed.size() != 1 || added.size() != 1) return 0.0;
  const int m = removed.front();
  const int k = added.front();

  // boson occupancy change: exactly one quantum leaves mode n, one enters l
  std::map<int, int> delta;
  for (const auto& bm : from.bosons) delta[bm.n] -= bm.w;
  for (const auto& bm : to.bosons) delta[bm.n] += bm.w;
  int n = 0;
  int l = 0;
  for (const auto& [mode, change] : delta) {
    if (change == 0) continue;
    if (change == -1 && n == 0) {
      n = mode;
    } else if (change == 1 && l == 0) {
      l = mode;
    } else {
      return 0.0;
    }
  }
  if (n == 0 || l == 0 || k + l != m + n) return 0.0;

  const double w_from = boson_occupancy(from, n);
  const double w_to = boson_occupancy(to, l);
  const double kn = (k == n) ? 1.0 : 0.0;
  const double shape = (1.0 - kn) / (k - n + kn) + 1.0 / (k + l);
  const double boson_factor = std::sqrt(w_from * w_to / (static_cast<double>(l) * n));

  // b_m acts first on `from`, then b+_k on the intermediate state
  const int below_m = count_below(from.fermions, m);
  const int below_k = count_below(from.fermions, k) - (m < k ? 1 : 0);
  const double sign = ((below_m + below_k) % 2 == 0) ? 1.0 : -1.0;

  return params.g * params.g * shape * boson_factor * sign;
}

}  // namespace lfdlcq
