#include "asgcn/matrix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <tuple>

#include "asgcn/errors.hpp"

namespace asgcn {

namespace {
using eigen_map =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using eigen_cmap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
}  // namespace

dense_matrix::dense_matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

dense_matrix dense_matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  dense_matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != m.cols_) throw dimension_error("from_rows: ragged row lengths");
    std::copy(r.begin(), r.end(), m.row(i));
    ++i;
  }
  return m;
}

bool dense_matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

dense_matrix matmul(const dense_matrix& a, const dense_matrix& b) {
  if (a.cols() != b.rows()) throw dimension_error("matmul: inner dimensions differ");
  dense_matrix out(a.rows(), b.cols());
  if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) return out;
  eigen_cmap am(a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  eigen_cmap bm(b.data(), static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()));
  eigen_map om(out.data(), static_cast<Eigen::Index>(out.rows()),
               static_cast<Eigen::Index>(out.cols()));
  om.noalias() = am * bm;
  return out;
}

dense_matrix transpose(const dense_matrix& a) {
  dense_matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

sparse_matrix sparse_matrix::from_coo(
    std::size_t rows, std::size_t cols,
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets) {
  for (const auto& [r, c, v] : triplets) {
    (void)v;
    if (r >= rows || c >= cols) throw dimension_error("from_coo: index out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const auto& x, const auto& y) {
    return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
  });
  sparse_matrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  std::size_t i = 0;
  while (i < triplets.size()) {
    auto [r, c, v] = triplets[i];
    std::size_t j = i + 1;
    while (j < triplets.size() && std::get<0>(triplets[j]) == r && std::get<1>(triplets[j]) == c) {
      v += std::get<2>(triplets[j]);
      ++j;
    }
    if (v != 0.0) {
      m.col_idx.push_back(c);
      m.values.push_back(v);
      m.row_ptr[r + 1]++;
    }
    i = j;
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

void sparse_matrix::check_invariants() const {
  if (row_ptr.size() != rows + 1) throw validation_error("csr: row_ptr size mismatch");
  if (row_ptr.front() != 0 || row_ptr.back() != values.size())
    throw validation_error("csr: row_ptr endpoints mismatch");
  if (col_idx.size() != values.size()) throw validation_error("csr: col/value size mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_ptr[r] > row_ptr[r + 1]) throw validation_error("csr: row_ptr not monotone");
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      if (col_idx[k] >= cols) throw validation_error("csr: column index out of range");
      if (k > row_ptr[r] && col_idx[k - 1] >= col_idx[k])
        throw validation_error("csr: columns not strictly increasing");
      if (values[k] == 0.0) throw validation_error("csr: explicit zero stored");
    }
  }
}

double sparse_matrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows || c >= cols) throw dimension_error("csr at: index out of range");
  const auto* begin = col_idx.data() + row_ptr[r];
  const auto* end = col_idx.data() + row_ptr[r + 1];
  const auto* it = std::lower_bound(begin, end, static_cast<std::uint32_t>(c));
  if (it != end && *it == c) return values[row_ptr[r] + (it - begin)];
  return 0.0;
}

dense_matrix sparse_matrix::to_dense() const {
  dense_matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) out(r, col_idx[k]) = values[k];
  return out;
}

dense_matrix spmm(const sparse_matrix& s, const dense_matrix& d) {
  if (s.cols != d.rows()) throw dimension_error("spmm: inner dimensions differ");
  dense_matrix out(s.rows, d.cols());
  const std::size_t c = d.cols();
  for (std::size_t r = 0; r < s.rows; ++r) {
    double* orow = out.row(r);
    for (std::size_t k = s.row_ptr[r]; k < s.row_ptr[r + 1]; ++k) {
      const double v = s.values[k];
      const double* drow = d.row(s.col_idx[k]);
      for (std::size_t j = 0; j < c; ++j) orow[j] += v * drow[j];
    }
  }
  return out;
}

sparse_matrix spgemm(const sparse_matrix& a, const sparse_matrix& b) {
  if (a.cols != b.rows) throw dimension_error("spgemm: inner dimensions differ");
  sparse_matrix out;
  out.rows = a.rows;
  out.cols = b.cols;
  out.row_ptr.assign(a.rows + 1, 0);
  std::vector<double> acc(b.cols, 0.0);
  std::vector<std::uint32_t> touched;
  for (std::size_t r = 0; r < a.rows; ++r) {
    touched.clear();
    for (std::size_t ka = a.row_ptr[r]; ka < a.row_ptr[r + 1]; ++ka) {
      const std::uint32_t mid = a.col_idx[ka];
      const double av = a.values[ka];
      for (std::size_t kb = b.row_ptr[mid]; kb < b.row_ptr[mid + 1]; ++kb) {
        const std::uint32_t c = b.col_idx[kb];
        if (acc[c] == 0.0) touched.push_back(c);
        acc[c] += av * b.values[kb];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::uint32_t c : touched) {
      if (acc[c] != 0.0) {
        out.col_idx.push_back(c);
        out.values.push_back(acc[c]);
      }
      acc[c] = 0.0;
    }
    out.row_ptr[r + 1] = out.values.size();
  }
  return out;
}

sparse_matrix sparse_add(const sparse_matrix& a, const sparse_matrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw dimension_error("sparse_add: shape mismatch");
  sparse_matrix out;
  out.rows = a.rows;
  out.cols = a.cols;
  out.row_ptr.assign(a.rows + 1, 0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    std::size_t ka = a.row_ptr[r], kb = b.row_ptr[r];
    while (ka < a.row_ptr[r + 1] || kb < b.row_ptr[r + 1]) {
      std::uint32_t ca = ka < a.row_ptr[r + 1] ? a.col_idx[ka] : UINT32_MAX;
      std::uint32_t cb = kb < b.row_ptr[r + 1] ? b.col_idx[kb] : UINT32_MAX;
      std::uint32_t c = std::min(ca, cb);
      double v = 0.0;
      if (ca == c) v += a.values[ka++];
      if (cb == c) v += b.values[kb++];
      if (v != 0.0) {
        out.col_idx.push_back(c);
        out.values.push_back(v);
      }
    }
    out.row_ptr[r + 1] = out.values.size();
  }
  return out;
}

}  // namespace asgcn
