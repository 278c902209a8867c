#include "jdx/correction.hpp"

#include <algorithm>
#include <cmath>

namespace jdx {

namespace {

// x <- (I - u u^*) x
void project_out(const Vector& u, Vector& x) {
  Scalar h = dot(u, x);
  axpy(-h, u, x);
}

Vector projected(const Vector& u, Vector x) {
  project_out(u, x);
  return x;
}

// (A - theta I)^* (A - theta I) u
Vector normal_apply(const SparseMatrix& A, Scalar theta, const Vector& u) {
  Vector w = spmv(A, u);
  axpy(-theta, u, w);
  Vector y = spmv_adjoint(A, w);
  axpy(-std::conj(theta), w, y);
  return y;
}

}  // namespace

const char* variant_name(CorrectionVariant v) {
  switch (v) {
    case CorrectionVariant::OJD: return "ojd";
    case CorrectionVariant::MJD: return "mjd";
    case CorrectionVariant::JDS: return "jds";
    case CorrectionVariant::MDS: return "mds";
  }
  return "?";
}

ProjectedOperator::ProjectedOperator(CorrectionVariant variant,
                                     const SparseMatrix& A, Scalar theta,
                                     Vector u)
    : variant_(variant), A_(&A), theta_(theta), u_(std::move(u)) {
  if (u_.size() != A.order())
    throw DimensionError("ProjectedOperator: u has wrong length");
}

Vector ProjectedOperator::apply(const Vector& x) const {
  if (x.size() != A_->order())
    throw DimensionError("ProjectedOperator::apply: size mismatch");
  switch (variant_) {
    case CorrectionVariant::OJD: {
      Vector px = projected(u_, x);
      Vector y = spmv(*A_, px);
      axpy(-theta_, px, y);
      project_out(u_, y);
      return y;
    }
    case CorrectionVariant::MJD: {
      Vector px = projected(u_, x);
      Vector y = normal_apply(*A_, theta_, px);
      project_out(u_, y);
      return y;
    }
    case CorrectionVariant::JDS: {
      Vector px = projected(u_, x);
      Vector y = spmv(*A_, px);
      project_out(u_, y);
      axpy(-theta_, x, y);
      return y;
    }
    case CorrectionVariant::MDS: {
      // P A^*A P x - theta P A^* P x - conj(theta) P A P x + |theta|^2 x
      Vector px = projected(u_, x);
      Vector ax = spmv(*A_, px);
      Vector y = spmv_adjoint(*A_, ax);  // A^*A px
      project_out(u_, y);
      Vector t2 = projected(u_, spmv_adjoint(*A_, px));
      axpy(-theta_, t2, y);
      Vector t3 = projected(u_, ax);
      axpy(-std::conj(theta_), t3, y);
      axpy(Scalar(std::norm(theta_)), x, y);
      return y;
    }
  }
  throw std::logic_error("unreachable");
}

DenseMatrix ProjectedOperator::materialize(std::size_t dense_cap) const {
  const std::size_t n = A_->order();
  if (n > dense_cap)
    throw DimensionError("ProjectedOperator::materialize: dense cap exceeded");
  DenseMatrix M(n, n);
  Vector e(n, Scalar(0.0));
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    Vector col = apply(e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) M(i, j) = col[i];
  }
  return M;
}

Vector correction_rhs(CorrectionVariant variant, const SparseMatrix& A,
                      Scalar theta, const Vector& u, const Vector& r) {
  switch (variant) {
    case CorrectionVariant::OJD:
    case CorrectionVariant::JDS:
      return scaled(r, Scalar(-1.0));
    case CorrectionVariant::MJD:
    case CorrectionVariant::MDS: {
      Vector y = normal_apply(A, theta, u);
      project_out(u, y);
      return scaled(y, Scalar(-1.0));
    }
  }
  throw std::logic_error("unreachable");
}

Vector solve_correction(CorrectionVariant variant, const InnerSolver& inner,
                        const SparseMatrix& A, Scalar theta, const Vector& u,
                        const Vector& r) {
  ProjectedOperator op(variant, A, theta, u);
  Vector b = correction_rhs(variant, A, theta, u, r);
  if (norm2(b) == 0.0) return Vector(u.size(), Scalar(0.0));

  Vector t;
  if (inner.kind == InnerSolver::Kind::GaussianElimination) {
    DenseMatrix M = op.materialize();
    // The operator annihilates (or merely rescales) the u direction;
    // shifting by u u^* makes solvable systems nonsingular without
    // touching the u-orthogonal solution.
    const double c = std::max(1.0, M.max_abs());
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        M(i, j) += c * u[i] * std::conj(u[j]);
    LuFactors lu(M);
    t = lu.solve(b);
    // Two rounds of iterative refinement; the squared operators can be
    // badly conditioned when theta sits near a second eigenvalue.
    for (int round = 0; round < 2; ++round) {
      Vector res = sub(b, op.apply(t));
      axpy(-c * dot(u, t), u, res);
      Vector d = lu.solve(res);
      for (std::size_t i = 0; i < n; ++i) t[i] += d[i];
    }
  } else {
    t = gmres_solve([&op](const Vector& x) { return op.apply(x); },
                    projected(u, b), inner.gmres_steps, inner.gmres_rtol);
  }
  project_out(u, t);
  return t;
}

Vector tikhonov_solve(const SparseMatrix& A, Scalar theta, const Vector& u,
                      double h) {
  if (h <= 0.0) throw DimensionError("tikhonov_solve: h must be positive");
  ProjectedOperator op(CorrectionVariant::MJD, A, theta, u);
  DenseMatrix M = op.materialize();
  for (std::size_t i = 0; i < M.rows(); ++i) M(i, i) += h * h;
  // Same rank-one shift as the direct path: the u direction carries only
  // h^2, which for small h sits below the LU pivot threshold even though
  // the system is formally nonsingular.
  const double c = std::max(1.0, M.max_abs());
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      M(i, j) += c * u[i] * std::conj(u[j]);
  Vector b = correction_rhs(CorrectionVariant::MJD, A, theta, u, {});
  Vector t = lu_solve(M, b);
  project_out(u, t);
  return t;
}

Vector perturbation_direction(const SparseMatrix& A, Scalar theta,
                              const Vector& u) {
  Vector au = spmv(A, u);
  axpy(-theta, u, au);
  const double rn2 = norm2(au) * norm2(au);
  Vector w = spmv_adjoint(A, au);
  axpy(-std::conj(theta), au, w);
  axpy(Scalar(-rn2), u, w);
  return w;
}

Vector gmres_solve(const std::function<Vector(const Vector&)>& op,
                   const Vector& b, std::size_t max_steps, double rtol) {
  const std::size_t n = b.size();
  const double beta = norm2(b);
  if (beta == 0.0) return Vector(n, Scalar(0.0));
  const std::size_t m = std::min(max_steps, n);

  std::vector<Vector> V;
  V.push_back(scaled(b, 1.0 / beta));
  DenseMatrix H(m + 1, m);
  // Givens-rotated least-squares right-hand side.
  std::vector<double> cs(m);
  std::vector<Scalar> sn(m);
  Vector g(m + 1, Scalar(0.0));
  g[0] = beta;

  std::size_t steps = 0;
  for (std::size_t j = 0; j < m; ++j) {
    Vector w = op(V[j]);
    for (std::size_t i = 0; i <= j; ++i) {
      Scalar h = dot(V[i], w);
      H(i, j) = h;
      axpy(-h, V[i], w);
    }
    double hnext = norm2(w);
    H(j + 1, j) = hnext;
    // Rotate the new column.
    for (std::size_t i = 0; i < j; ++i) {
      Scalar a = H(i, j), c = H(i + 1, j);
      H(i, j) = cs[i] * a + sn[i] * c;
      H(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * c;
    }
    {
      Scalar a = H(j, j);
      double aa = std::abs(a), ab = std::abs(H(j + 1, j));
      double d = std::hypot(aa, ab);
      if (d == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else if (aa == 0.0) {
        cs[j] = 0.0;
        sn[j] = std::conj(H(j + 1, j)) / ab;
      } else {
        Scalar phase = a / aa;
        cs[j] = aa / d;
        sn[j] = phase * std::conj(H(j + 1, j)) / d;
      }
      H(j, j) = cs[j] * a + sn[j] * H(j + 1, j);
      H(j + 1, j) = 0.0;
      Scalar gj = g[j];
      g[j] = cs[j] * gj;
      g[j + 1] = -std::conj(sn[j]) * gj;
    }
    ++steps;
    const bool breakdown = hnext <= 1e-14 * beta;
    if (!breakdown && j + 1 < m) V.push_back(scaled(w, 1.0 / hnext));
    if (std::abs(g[j + 1]) <= rtol * beta || breakdown) break;
  }

  // Back-substitute the rotated Hessenberg system.
  Vector y(steps, Scalar(0.0));
  for (std::size_t i = steps; i-- > 0;) {
    Scalar s = g[i];
    for (std::size_t c = i + 1; c < steps; ++c) s -= H(i, c) * y[c];
    y[i] = s / H(i, i);
  }
  Vector x(n, Scalar(0.0));
  for (std::size_t i = 0; i < steps; ++i) axpy(y[i], V[i], x);
  return x;
}

}  // namespace jdx
