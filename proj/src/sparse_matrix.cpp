#include "lfdlcq/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "lfdlcq/errors.hpp"

namespace lfdlcq {

SparseMatrix SparseMatrix::from_rows(std::vector<std::vector<SparseEntry>> rows) {
  SparseMatrix m;
  m.row_ptr_.clear();
  m.row_ptr_.reserve(rows.size() + 1);
  m.row_ptr_.push_back(0);
  for (auto& r : rows) {
    std::sort(r.begin(), r.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k > 0 && r[k].col == m.entries_.back().col && m.row_ptr_.back() < m.entries_.size()) {
        m.entries_.back().value += r[k].value;
      } else {
        if (r[k].col >= rows.size())
          throw InvalidArgument("SparseMatrix: column index out of range");
        m.entries_.push_back(r[k]);
      }
    }
    m.row_ptr_.push_back(m.entries_.size());
  }
  return m;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  auto r = row(i);
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const SparseEntry& e, std::size_t c) { return e.col < c; });
  return (it != r.end() && it->col == j) ? it->value : 0.0;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      acc += entries_[k].value * x[entries_[k].col];
    y[i] = acc;
  }
}

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(dim()));
  multiply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
           std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
  return m;
}

double SparseMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += at(i, i);
  return t;
}

double SparseMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    for (const auto& e : row(i)) worst = std::max(worst, std::abs(e.value - at(e.col, i)));
  return worst;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < dim(); ++i)
    for (const auto& e : row(i))
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) = e.value;
  return d;
}

SparseMatrix SparseMatrix::scaled(double factor) const {
  SparseMatrix m = *this;
  for (auto& e : m.entries_) e.value *= factor;
  return m;
}

}  // namespace lfdlcq
