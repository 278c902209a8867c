#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jdx {

using Scalar = std::complex<double>;
using Vector = std::vector<Scalar>;

// Thrown on caller misuse (mismatched sizes, bad parameters).
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A pivot fell below the singularity threshold, or a projected small
// system turned out rank-deficient.
class SingularError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The small dense eigensolver exhausted its sweep budget.
class NoConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Row-major dense matrix of complex scalars.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) {
    return entries_[i * cols_ + j];
  }
  const Scalar& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  const std::vector<Scalar>& entries() const { return entries_; }

  double max_abs() const;

  static DenseMatrix identity(std::size_t n);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> entries_;
};

/// Compressed sparse row matrix of order n. Column indices are strictly
/// increasing within each row; all values finite.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t n, std::vector<std::size_t> row_ptr,
               std::vector<std::size_t> col_idx, std::vector<Scalar> values);

  std::size_t order() const { return n_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<Scalar>& values() const { return values_; }

  Scalar at(std::size_t i, std::size_t j) const;

  /// Infinity norm (max absolute row sum); the cheap size proxy used in
  /// tolerances throughout.
  double norm_inf() const;

  /// Builds CSR from (row, col, value) triplets; duplicates are summed.
  static SparseMatrix from_triplets(
      std::size_t n,
      std::vector<std::tuple<std::size_t, std::size_t, Scalar>> triplets);

  static SparseMatrix from_dense(const DenseMatrix& d, double drop_tol = 0.0);

private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<Scalar> values_;
};

}  // namespace jdx
