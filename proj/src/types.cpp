#include "jdx/types.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace jdx {

namespace {

bool finite(Scalar v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : entries_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

SparseMatrix::SparseMatrix(std::size_t n, std::vector<std::size_t> row_ptr,
                           std::vector<std::size_t> col_idx,
                           std::vector<Scalar> values)
    : n_(n),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != n_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != values_.size() || col_idx_.size() != values_.size())
    throw DimensionError("SparseMatrix: inconsistent CSR arrays");
  for (std::size_t i = 0; i < n_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1])
      throw DimensionError("SparseMatrix: row_ptr not monotone");
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] >= n_)
        throw DimensionError("SparseMatrix: column index out of range");
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1])
        throw DimensionError("SparseMatrix: columns not strictly increasing");
      if (!finite(values_[p]))
        throw DimensionError("SparseMatrix: non-finite value");
    }
  }
}

Scalar SparseMatrix::at(std::size_t i, std::size_t j) const {
  for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
    if (col_idx_[p] == j) return values_[p];
  return Scalar(0.0);
}

double SparseMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      s += std::abs(values_[p]);
    m = std::max(m, s);
  }
  return m;
}

SparseMatrix SparseMatrix::from_triplets(
    std::size_t n,
    std::vector<std::tuple<std::size_t, std::size_t, Scalar>> triplets) {
  std::sort(triplets.begin(), triplets.end(),
            [](const auto& a, const auto& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<Scalar> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  std::size_t last_i = n, last_j = n;
  for (const auto& [i, j, v] : triplets) {
    if (i >= n || j >= n) throw DimensionError("from_triplets: index out of range");
    if (i == last_i && j == last_j) {
      values.back() += v;  // duplicate entry
    } else {
      col_idx.push_back(j);
      values.push_back(v);
      last_i = i;
      last_j = j;
    }
    row_ptr[i + 1] = col_idx.size();
  }
  for (std::size_t i = 0; i < n; ++i)
    row_ptr[i + 1] = std::max(row_ptr[i + 1], row_ptr[i]);
  return SparseMatrix(n, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& d, double drop_tol) {
  if (d.rows() != d.cols()) throw DimensionError("from_dense: matrix not square");
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> trip;
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (std::abs(d(i, j)) > drop_tol) trip.emplace_back(i, j, d(i, j));
  return from_triplets(d.rows(), std::move(trip));
}

}  // namespace jdx
