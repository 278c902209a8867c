#pragma once

#include <functional>

#include "jdx/linalg.hpp"
#include "jdx/types.hpp"

namespace jdx {

/// The four correction-equation left-hand sides, with P = I - u u^*:
///   OJD: P (A - theta I) P
///   MJD: P (A - theta I)^* (A - theta I) P        (normal equation)
///   JDS: P A P - theta I
///   MDS: P A^*A P - theta P A^* P - conj(theta) P A P + |theta|^2 I
enum class CorrectionVariant { OJD, MJD, JDS, MDS };

const char* variant_name(CorrectionVariant v);

struct InnerSolver {
  enum class Kind { GaussianElimination, Gmres };
  Kind kind = Kind::GaussianElimination;
  std::size_t gmres_steps = 8;
  double gmres_rtol = 1e-13;

  static InnerSolver gaussian_elimination() { return {}; }
  static InnerSolver gmres(std::size_t steps, double rtol = 1e-13) {
    return {Kind::Gmres, steps, rtol};
  }
};

/// Matrix-free application of one correction-equation operator. Never
/// materializes an n-by-n matrix; only sparse products and rank-one
/// projections.
class ProjectedOperator {
public:
  ProjectedOperator(CorrectionVariant variant, const SparseMatrix& A,
                    Scalar theta, Vector u);

  Vector apply(const Vector& x) const;

  /// Column-by-column dense assembly for the direct solver. Throws when
  /// the order exceeds the dense cap (default 2000).
  DenseMatrix materialize(std::size_t dense_cap = 2000) const;

  CorrectionVariant variant() const { return variant_; }
  const Vector& u() const { return u_; }
  Scalar theta() const { return theta_; }
  std::size_t order() const { return A_->order(); }

private:
  CorrectionVariant variant_;
  const SparseMatrix* A_;
  Scalar theta_;
  Vector u_;
};

/// Right-hand side of the variant's correction equation. OJD/JDS use -r;
/// MJD/MDS use -P (A-theta I)^* (A-theta I) u.
Vector correction_rhs(CorrectionVariant variant, const SparseMatrix& A,
                      Scalar theta, const Vector& u, const Vector& r);

/// Solves the correction equation for t with t orthogonal to u. The
/// direct path factors the materialized operator augmented by +u u^*
/// (which leaves the u-orthogonal solution untouched); genuinely
/// rank-deficient systems throw SingularError. The GMRES path runs the
/// configured number of steps from a zero guess.
Vector solve_correction(CorrectionVariant variant, const InnerSolver& inner,
                        const SparseMatrix& A, Scalar theta, const Vector& u,
                        const Vector& r);

/// Tikhonov-regularized normal equation: adds h^2 to the diagonal of the
/// materialized MJD operator before the direct solve.
Vector tikhonov_solve(const SparseMatrix& A, Scalar theta, const Vector& u,
                      double h);

/// Direction of the rank-one perturbation's w-component orthogonal to u:
/// ((A - theta I)^* (A - theta I) - ||(A - theta I)u||^2 I) u.
Vector perturbation_direction(const SparseMatrix& A, Scalar theta,
                              const Vector& u);

/// Unrestarted GMRES with modified Gram-Schmidt Arnoldi and zero initial
/// guess, on an arbitrary linear operator.
Vector gmres_solve(const std::function<Vector(const Vector&)>& op,
                   const Vector& b, std::size_t max_steps, double rtol);

}  // namespace jdx
