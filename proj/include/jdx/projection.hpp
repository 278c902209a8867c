#pragma once

#include "jdx/linalg.hpp"
#include "jdx/types.hpp"

namespace jdx {

/// Column-orthonormal search-space basis.
struct SubspaceBasis {
  std::size_t n = 0;
  std::vector<Vector> cols;

  std::size_t dim() const { return cols.size(); }

  /// u = V y for a small-space vector y.
  Vector lift(const Vector& y) const;
};

/// Which approximate eigenvalue to chase.
struct Target {
  enum class Kind { LargestReal, SmallestMagnitude, Nearest };
  Kind kind = Kind::LargestReal;
  Scalar shift{};  // meaningful for Nearest

  static Target largest_real() { return {Kind::LargestReal, {}}; }
  static Target smallest_magnitude() { return {Kind::SmallestMagnitude, {}}; }
  static Target nearest(Scalar s) { return {Kind::Nearest, s}; }
};

/// Extracted approximate eigenpair. theta is the extraction value (Ritz
/// or harmonic Ritz); rho is the Rayleigh quotient of the lifted vector,
/// which is what the residual and the correction equation use.
struct RitzPair {
  Scalar theta{};
  Scalar rho{};
  Vector y;  // small-space unit vector
  Vector u;  // full-space unit vector
  Vector r;  // A u - rho u
  double resnorm = 0.0;
  bool refined = false;
};

Scalar rayleigh_quotient(const SparseMatrix& A, const Vector& u);

Vector residual(const SparseMatrix& A, Scalar theta, const Vector& u);

/// Ritz pairs of A over span(V), sorted best-first by target. Ties break
/// by the small eigensolver's output index, so orderings are stable.
std::vector<RitzPair> rayleigh_ritz(const SparseMatrix& A, const SubspaceBasis& V,
                                    const Target& target);

/// Harmonic Ritz pairs relative to the shift: solves the small problem
/// (W^*W) z = (theta - shift)(W^*V) z with W = (A - shift I)V. Throws
/// SingularError when W^*V is numerically singular.
std::vector<RitzPair> harmonic_ritz(const SparseMatrix& A, const SubspaceBasis& V,
                                    Scalar shift, const Target& target);

/// Refined vector for a fixed theta: the unit vector in span(V)
/// minimizing ||(A - theta I) v||, with its residual norm.
std::pair<Vector, double> refined_vector(const SparseMatrix& A, Scalar theta,
                                         const SubspaceBasis& V);

/// Sorts pairs in place best-first for the target.
void sort_by_target(std::vector<RitzPair>& pairs, const Target& target);

}  // namespace jdx
