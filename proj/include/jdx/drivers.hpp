#pragma once

#include <optional>
#include <string>

#include "jdx/correction.hpp"
#include "jdx/matio.hpp"
#include "jdx/projection.hpp"
#include "jdx/types.hpp"

namespace jdx {

enum class Method { Expanding, Simplified, Restarted };
enum class Extraction { RayleighRitz, Harmonic };

struct SolverOptions {
  Method method = Method::Expanding;
  CorrectionVariant variant = CorrectionVariant::OJD;
  InnerSolver inner = InnerSolver::gaussian_elimination();
  Extraction extraction = Extraction::RayleighRitz;
  Scalar harmonic_shift{};
  bool refined = false;
  Target target = Target::largest_real();
  double tol = 1e-10;
  std::size_t max_outer = 500;
  std::size_t max_subspace = 64;
  std::size_t restart_size = 3;  // restarted method only
  Vector initial;                // empty means all-ones
  std::optional<Vector> reference_vector;  // unit; enables angle tracking
};

enum class SolveStatus {
  Converged,
  MaxIter,
  DeflationStall,
  SubspaceCap,
  Singular,
};

const char* status_name(SolveStatus s);

struct StagnationReport {
  double limit_resnorm = 0.0;  // the plateau level alpha
  double singular_check = 0.0; // ||((A-theta I)^*(A-theta I) - alpha^2 I) x||
  enum class Kind { Eigenvector, InvariantSubspace, SingularVectorStagnation };
  Kind classification = Kind::Eigenvector;
};

struct SolveResult {
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIter;
  Scalar eigenvalue{};
  Vector eigenvector;
  double final_resnorm = 0.0;
  std::size_t restarts = 0;
  std::vector<ConvergenceRecord> history;
  std::optional<StagnationReport> stagnation;
  std::string diagnostic;  // populated for Singular / DeflationStall
};

/// Expanding-subspace outer iteration (unrestarted).
SolveResult expanding_solve(const SparseMatrix& A, const SolverOptions& opts);

/// Single-vector iteration with no subspace: u <- (u + P t) / ||u + P t||.
SolveResult simplified_solve(const SparseMatrix& A, const SolverOptions& opts);

/// Expanding iteration that collapses the basis to the current best
/// vector whenever it reaches restart_size columns.
SolveResult restarted_solve(const SparseMatrix& A, const SolverOptions& opts);

SolveResult solve(const SparseMatrix& A, const SolverOptions& opts);

/// Oracle step for symmetric A: normalize((A - theta I)^{-2} u), computed
/// with two dense LU solves. Not used by the main loops.
Vector msjd_symmetric_step(const SparseMatrix& A, Scalar theta, const Vector& u);

/// Classifies a residual-norm plateau per the convergence alternatives:
/// an eigenvector (plateau below tol), a right singular vector of
/// (A - theta I) at singular value alpha, or an invariant subspace.
/// Throws NoConvergenceError("NOT_STAGNANT") when the last ten history
/// rows do not form a plateau.
StagnationReport classify_stagnation(const SparseMatrix& A,
                                     const SolveResult& result, double tol);

}  // namespace jdx
