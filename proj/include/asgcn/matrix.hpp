#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace asgcn {

/// Row-major dense matrix of doubles. The one value type every numeric
/// routine in this project operates on; 64-bit precision throughout so
/// finite-difference checks and variance estimates are meaningful.
class dense_matrix {
 public:
  dense_matrix() = default;
  dense_matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  /// Build from nested braces, e.g. {{1,2},{3,4}}. Rows must be equal length.
  static dense_matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  bool same_shape(const dense_matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row and explicit zeros are not stored, so iteration order
/// (and therefore summation order) is deterministic.
struct sparse_matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;    // size rows+1
  std::vector<std::uint32_t> col_idx;  // size nnz
  std::vector<double> values;          // size nnz

  std::size_t nnz() const { return values.size(); }

  /// Assemble from (row, col, value) triplets; duplicates are summed and
  /// entries that cancel to exactly zero are dropped.
  static sparse_matrix from_coo(std::size_t rows, std::size_t cols,
                                std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets);

  /// Throws validation_error if the CSR invariants do not hold.
  void check_invariants() const;

  double at(std::size_t r, std::size_t c) const;  // 0.0 when absent
  dense_matrix to_dense() const;
};

// Dense kernels. Shapes are checked; mismatches throw dimension_error.
dense_matrix matmul(const dense_matrix& a, const dense_matrix& b);
dense_matrix transpose(const dense_matrix& a);

/// s * d with per-row accumulation in ascending column order.
dense_matrix spmm(const sparse_matrix& s, const dense_matrix& d);

/// Sparse-sparse product (used for the two-hop operator). Result rows are
/// column-sorted with exact-zero entries dropped.
sparse_matrix spgemm(const sparse_matrix& a, const sparse_matrix& b);
sparse_matrix sparse_add(const sparse_matrix& a, const sparse_matrix& b);

}  // namespace asgcn
