#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lfdlcq {

struct SparseEntry {
  std::size_t col;
  double value;
};

/// Row-compressed real matrix. Both triangles of a symmetric matrix are
/// stored. Column indices are sorted within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Builds from per-row entry lists; entries are sorted and duplicate
  /// columns summed.
  static SparseMatrix from_rows(std::vector<std::vector<SparseEntry>> rows);

  std::size_t dim() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nonzeros() const noexcept { return entries_.size(); }

  std::span<const SparseEntry> row(std::size_t i) const {
    return {entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  /// Value at (i, j); 0 when structurally absent.
  double at(std::size_t i, std::size_t j) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

  double max_abs() const;
  double trace() const;

  /// max |A(i,j) - A(j,i)| over all stored entries and their transposes.
  double max_asymmetry() const;

  Eigen::MatrixXd to_dense() const;

  SparseMatrix scaled(double factor) const;

 private:
  std::vector<std::size_t> row_ptr_{0};
  std::vector<SparseEntry> entries_;
};

}  // namespace lfdlcq
