#include "jdx/drivers.hpp"

#include <algorithm>
#include <cmath>

namespace jdx {

namespace {

Vector initial_vector(const SparseMatrix& A, const SolverOptions& opts) {
  Vector v = opts.initial;
  if (v.empty()) v.assign(A.order(), Scalar(1.0));
  if (v.size() != A.order())
    throw DimensionError("initial vector has wrong length");
  if (norm2(v) == 0.0) throw DimensionError("initial vector is zero");
  return normalized(v);
}

void validate(const SolverOptions& opts) {
  if (opts.tol <= 0.0) throw DimensionError("tol must be positive");
  if (opts.max_subspace > 64)
    throw DimensionError("max_subspace exceeds the small-eigensolver cap (64)");
  if (opts.method == Method::Restarted &&
      (opts.restart_size < 2 || opts.restart_size > opts.max_subspace))
    throw DimensionError("restart_size must be in [2, max_subspace]");
}

std::optional<double> angle_to(const std::optional<Vector>& ref, const Vector& u) {
  if (!ref) return std::nullopt;
  double c = std::abs(dot(*ref, u));
  return std::acos(std::clamp(c, 0.0, 1.0));
}

std::vector<RitzPair> extract(const SparseMatrix& A, const SubspaceBasis& V,
                              const SolverOptions& opts) {
  if (opts.extraction == Extraction::RayleighRitz)
    return rayleigh_ritz(A, V, opts.target);
  try {
    return harmonic_ritz(A, V, opts.harmonic_shift, opts.target);
  } catch (const SingularError&) {
    // Shift hit a projected Ritz value; nudge it and retry once.
    Scalar nudged = opts.harmonic_shift + Scalar(1e-12 * A.norm_inf());
    return harmonic_ritz(A, V, nudged, opts.target);
  }
}

void refine_pair(const SparseMatrix& A, const SubspaceBasis& V, RitzPair& best) {
  auto [u, rn] = refined_vector(A, best.theta, V);
  best.u = std::move(u);
  // Convergence is judged on the refined residual at the extraction value;
  // the correction equation still uses the Rayleigh quotient of the vector.
  best.resnorm = rn;
  best.rho = rayleigh_quotient(A, best.u);
  best.r = residual(A, best.rho, best.u);
  best.refined = true;
}

void finish(SolveResult& res, const RitzPair& best) {
  res.eigenvalue = best.rho;
  res.eigenvector = best.u;
  res.final_resnorm = best.resnorm;
}

SolveResult run_subspace(const SparseMatrix& A, const SolverOptions& opts,
                         bool restarted) {
  validate(opts);
  SolveResult res;
  SubspaceBasis V{A.order(), {initial_vector(A, opts)}};
  std::size_t restart_index = 0;
  const std::size_t cap = restarted ? opts.restart_size : opts.max_subspace;

  for (std::size_t outer = 1; outer <= opts.max_outer; ++outer) {
    RitzPair best;
    try {
      best = extract(A, V, opts)[0];
      if (opts.refined) refine_pair(A, V, best);
    } catch (const SingularError& e) {
      res.status = SolveStatus::Singular;
      res.diagnostic = e.what();
      return res;
    }

    res.history.push_back({outer, restart_index, best.theta, best.resnorm,
                           V.dim(), angle_to(opts.reference_vector, best.u)});
    finish(res, best);
    res.restarts = restart_index;

    if (best.resnorm <= opts.tol) {
      res.converged = true;
      res.status = SolveStatus::Converged;
      return res;
    }
    if (outer == opts.max_outer) break;

    if (V.dim() >= cap) {
      if (!restarted) {
        res.status = SolveStatus::SubspaceCap;
        return res;
      }
      V.cols = {best.u};
      ++restart_index;
    }

    Vector t;
    try {
      t = solve_correction(opts.variant, opts.inner, A, best.rho, best.u,
                           best.r);
    } catch (const SingularError& e) {
      res.status = SolveStatus::Singular;
      res.diagnostic = e.what();
      return res;
    }
    auto v = mgs_orthonormalize(V.cols, t);
    if (!v) {
      res.status = SolveStatus::DeflationStall;
      res.diagnostic = "expansion vector numerically inside span(V)";
      return res;
    }
    V.cols.push_back(std::move(*v));
  }
  res.status = SolveStatus::MaxIter;
  return res;
}

}  // namespace

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "CONVERGED";
    case SolveStatus::MaxIter: return "MAX_ITER";
    case SolveStatus::DeflationStall: return "DEFLATION_STALL";
    case SolveStatus::SubspaceCap: return "SUBSPACE_CAP";
    case SolveStatus::Singular: return "SINGULAR";
  }
  return "?";
}

SolveResult expanding_solve(const SparseMatrix& A, const SolverOptions& opts) {
  return run_subspace(A, opts, /*restarted=*/false);
}

SolveResult restarted_solve(const SparseMatrix& A, const SolverOptions& opts) {
  return run_subspace(A, opts, /*restarted=*/true);
}

SolveResult simplified_solve(const SparseMatrix& A, const SolverOptions& opts) {
  validate(opts);
  SolveResult res;
  Vector u = initial_vector(A, opts);

  for (std::size_t step = 1; step <= opts.max_outer; ++step) {
    Scalar rho = rayleigh_quotient(A, u);
    Vector r = residual(A, rho, u);
    double rn = norm2(r);
    res.history.push_back(
        {step, 0, rho, rn, 1, angle_to(opts.reference_vector, u)});
    res.eigenvalue = rho;
    res.eigenvector = u;
    res.final_resnorm = rn;

    if (rn <= opts.tol) {
      res.converged = true;
      res.status = SolveStatus::Converged;
      return res;
    }
    if (step == opts.max_outer) break;

    Vector t;
    try {
      t = solve_correction(opts.variant, opts.inner, A, rho, u, r);
    } catch (const SingularError& e) {
      res.status = SolveStatus::Singular;
      res.diagnostic = e.what();
      return res;
    }
    Vector next = add(u, t);  // t is already orthogonal to u
    double nn = norm2(next);
    if (nn == 0.0) {
      res.status = SolveStatus::DeflationStall;
      res.diagnostic = "update annihilated the iterate";
      return res;
    }
    u = scaled(next, 1.0 / nn);
  }
  res.status = SolveStatus::MaxIter;
  return res;
}

SolveResult solve(const SparseMatrix& A, const SolverOptions& opts) {
  switch (opts.method) {
    case Method::Expanding: return expanding_solve(A, opts);
    case Method::Simplified: return simplified_solve(A, opts);
    case Method::Restarted: return restarted_solve(A, opts);
  }
  throw std::logic_error("unreachable");
}

Vector msjd_symmetric_step(const SparseMatrix& A, Scalar theta, const Vector& u) {
  const std::size_t n = A.order();
  if (n > 2000) throw DimensionError("msjd_symmetric_step: dense cap exceeded");
  if (u.size() != n) throw DimensionError("msjd_symmetric_step: size mismatch");
  DenseMatrix M(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = A.row_ptr()[i]; p < A.row_ptr()[i + 1]; ++p)
      M(i, A.col_idx()[p]) = A.values()[p];
    M(i, i) -= theta;
  }
  LuFactors lu(M);
  return normalized(lu.solve(lu.solve(u)));
}

StagnationReport classify_stagnation(const SparseMatrix& A,
                                     const SolveResult& result, double tol) {
  const auto& hist = result.history;
  if (hist.size() < 10)
    throw NoConvergenceError("NOT_STAGNANT: fewer than 10 history records");
  double lo = hist.back().resnorm, hi = lo;
  for (std::size_t i = hist.size() - 10; i < hist.size(); ++i) {
    lo = std::min(lo, hist[i].resnorm);
    hi = std::max(hi, hist[i].resnorm);
  }
  if (hi <= 0.0 || (hi - lo) / hi >= 1e-3)
    throw NoConvergenceError("NOT_STAGNANT: no residual-norm plateau");

  StagnationReport rep;
  rep.limit_resnorm = hist.back().resnorm;
  const Scalar theta = result.eigenvalue;
  const Vector& x = result.eigenvector;
  Vector w = spmv(A, x);
  axpy(-theta, x, w);
  Vector y = spmv_adjoint(A, w);
  axpy(-std::conj(theta), w, y);
  axpy(Scalar(-rep.limit_resnorm * rep.limit_resnorm), x, y);
  rep.singular_check = norm2(y);

  const double anorm = A.norm_inf();
  if (rep.limit_resnorm <= tol)
    rep.classification = StagnationReport::Kind::Eigenvector;
  else if (rep.singular_check <= 1e-8 * anorm * anorm)
    rep.classification = StagnationReport::Kind::SingularVectorStagnation;
  else
    rep.classification = StagnationReport::Kind::InvariantSubspace;
  return rep;
}

}  // namespace jdx
