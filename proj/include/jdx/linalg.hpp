#pragma once

#include <optional>
#include <utility>

#include "jdx/types.hpp"

namespace jdx {

// ---- vector helpers ----

double norm2(const Vector& x);
Scalar dot(const Vector& x, const Vector& y);  // conj(x)^* y
void axpy(Scalar alpha, const Vector& x, Vector& y);
Vector scaled(const Vector& x, Scalar alpha);
Vector normalized(const Vector& x);
Vector add(const Vector& x, const Vector& y);
Vector sub(const Vector& x, const Vector& y);

/// y = A x for CSR A.
Vector spmv(const SparseMatrix& A, const Vector& x);

/// y = A^* x (conjugate transpose product).
Vector spmv_adjoint(const SparseMatrix& A, const Vector& x);

Vector dense_mv(const DenseMatrix& M, const Vector& x);

// ---- modified Gram-Schmidt ----

/// Orthogonalizes t against the columns of V (each a unit vector of the
/// ambient dimension) with one unconditional reorthogonalization pass.
/// Returns the normalized remainder, or nullopt when t is numerically
/// inside span(V) (deflation).
std::optional<Vector> mgs_orthonormalize(const std::vector<Vector>& V,
                                         const Vector& t);

// ---- dense direct solves ----

/// Solves M x = b by partial-pivoting LU. Throws SingularError when a
/// pivot magnitude falls below n*eps*max|M|.
Vector lu_solve(const DenseMatrix& M, const Vector& b);

/// Factorization kept around when many right-hand sides share one matrix.
class LuFactors {
public:
  explicit LuFactors(DenseMatrix M);
  Vector solve(const Vector& b) const;
  std::size_t order() const { return lu_.rows(); }

private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

// ---- small dense eigenproblems ----

struct EigenPair {
  Scalar value;
  Vector vector;  // unit
};

/// All k eigenpairs of a general complex k-by-k matrix (k <= 64).
/// Hessenberg reduction + shifted QR for values, inverse iteration on the
/// Hessenberg form for vectors. Throws NoConvergenceError past the 30*k
/// sweep cap.
std::vector<EigenPair> small_eig(const DenseMatrix& H);

/// Smallest singular value of M (rows >= cols) with its right singular
/// vector, via the eigendecomposition of the Gram matrix M^* M.
std::pair<double, Vector> small_svd_min(const DenseMatrix& M);

}  // namespace jdx
