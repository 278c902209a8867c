#include "jdx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jdx {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": size mismatch");
}

}  // namespace

double norm2(const Vector& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

Scalar dot(const Vector& x, const Vector& y) {
  check_same_size(x.size(), y.size(), "dot");
  Scalar s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

void axpy(Scalar alpha, const Vector& x, Vector& y) {
  check_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector scaled(const Vector& x, Scalar alpha) {
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = alpha * x[i];
  return y;
}

Vector normalized(const Vector& x) {
  double n = norm2(x);
  if (n == 0.0) throw DimensionError("normalized: zero vector");
  return scaled(x, 1.0 / n);
}

Vector add(const Vector& x, const Vector& y) {
  check_same_size(x.size(), y.size(), "add");
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

Vector sub(const Vector& x, const Vector& y) {
  check_same_size(x.size(), y.size(), "sub");
  Vector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

Vector spmv(const SparseMatrix& A, const Vector& x) {
  check_same_size(A.order(), x.size(), "spmv");
  Vector y(A.order(), Scalar(0.0));
  const auto& rp = A.row_ptr();
  const auto& ci = A.col_idx();
  const auto& va = A.values();
  for (std::size_t i = 0; i < A.order(); ++i) {
    Scalar s = 0.0;
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) s += va[p] * x[ci[p]];
    y[i] = s;
  }
  return y;
}

Vector spmv_adjoint(const SparseMatrix& A, const Vector& x) {
  check_same_size(A.order(), x.size(), "spmv_adjoint");
  Vector y(A.order(), Scalar(0.0));
  const auto& rp = A.row_ptr();
  const auto& ci = A.col_idx();
  const auto& va = A.values();
  for (std::size_t i = 0; i < A.order(); ++i)
    for (std::size_t p = rp[i]; p < rp[i + 1]; ++p)
      y[ci[p]] += std::conj(va[p]) * x[i];
  return y;
}

Vector dense_mv(const DenseMatrix& M, const Vector& x) {
  check_same_size(M.cols(), x.size(), "dense_mv");
  Vector y(M.rows(), Scalar(0.0));
  for (std::size_t i = 0; i < M.rows(); ++i) {
    Scalar s = 0.0;
    for (std::size_t j = 0; j < M.cols(); ++j) s += M(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

std::optional<Vector> mgs_orthonormalize(const std::vector<Vector>& V,
                                         const Vector& t) {
  const double orig = norm2(t);
  if (orig == 0.0) return std::nullopt;
  Vector v = t;
  // One unconditional reorthogonalization pass.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& col : V) {
      check_same_size(col.size(), v.size(), "mgs_orthonormalize");
      Scalar h = dot(col, v);
      axpy(-h, col, v);
    }
  }
  const double rem = norm2(v);
  if (rem <= 1e-13 * orig) return std::nullopt;
  return scaled(v, 1.0 / rem);
}

// ---- LU ----

LuFactors::LuFactors(DenseMatrix M) : lu_(std::move(M)) {
  if (lu_.rows() != lu_.cols()) throw DimensionError("lu: matrix not square");
  const std::size_t n = lu_.rows();
  const double thresh = static_cast<double>(n) * kEps * lu_.max_abs();
  perm_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t piv = j;
    double best = std::abs(lu_(j, j));
    for (std::size_t i = j + 1; i < n; ++i) {
      double a = std::abs(lu_(i, j));
      if (a > best) {
        best = a;
        piv = i;
      }
    }
    if (best <= thresh) throw SingularError("lu: pivot below singularity threshold");
    perm_[j] = piv;
    if (piv != j)
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_(j, c), lu_(piv, c));
    for (std::size_t i = j + 1; i < n; ++i) {
      Scalar m = lu_(i, j) / lu_(j, j);
      lu_(i, j) = m;
      for (std::size_t c = j + 1; c < n; ++c) lu_(i, c) -= m * lu_(j, c);
    }
  }
}

Vector LuFactors::solve(const Vector& b) const {
  const std::size_t n = lu_.rows();
  check_same_size(n, b.size(), "lu_solve");
  Vector x = b;
  // The factorization swaps whole rows (L entries included), so all
  // interchanges apply to the right-hand side before the L sweep.
  for (std::size_t j = 0; j < n; ++j)
    if (perm_[j] != j) std::swap(x[j], x[perm_[j]]);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) x[i] -= lu_(i, j) * x[j];
  for (std::size_t j = n; j-- > 0;) {
    for (std::size_t c = j + 1; c < n; ++c) x[j] -= lu_(j, c) * x[c];
    x[j] /= lu_(j, j);
  }
  return x;
}

Vector lu_solve(const DenseMatrix& M, const Vector& b) {
  return LuFactors(M).solve(b);
}

// ---- small dense eigensolver ----

namespace {

struct Givens {
  double c;
  Scalar s;
};

Givens make_givens(Scalar a, Scalar b) {
  double aa = std::abs(a), ab = std::abs(b);
  if (ab == 0.0) return {1.0, Scalar(0.0)};
  double d = std::hypot(aa, ab);
  if (aa == 0.0) return {0.0, std::conj(b) / ab};
  Scalar phase = a / aa;
  return {aa / d, phase * std::conj(b) / d};
}

// Eigenvalue of [[a,b],[c,d]] closest to d.
Scalar wilkinson_shift(Scalar a, Scalar b, Scalar c, Scalar d) {
  Scalar tr = a + d;
  Scalar det = a * d - b * c;
  Scalar disc = std::sqrt(tr * tr - 4.0 * det);
  Scalar l1 = 0.5 * (tr + disc);
  Scalar l2 = 0.5 * (tr - disc);
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

// Householder reduction to upper Hessenberg; accumulates the unitary Q
// with H = Q^* A Q.
void hessenberg_reduce(DenseMatrix& H, DenseMatrix& Q) {
  const std::size_t n = H.rows();
  Q = DenseMatrix::identity(n);
  if (n < 3) return;
  for (std::size_t j = 0; j + 2 < n; ++j) {
    Vector v(n - j - 1);
    double xnorm = 0.0;
    for (std::size_t i = j + 1; i < n; ++i) {
      v[i - j - 1] = H(i, j);
      xnorm += std::norm(H(i, j));
    }
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    Scalar x0 = v[0];
    Scalar phase = (std::abs(x0) == 0.0) ? Scalar(1.0) : x0 / std::abs(x0);
    Scalar alpha = -phase * xnorm;
    v[0] -= alpha;
    double vn2 = 0.0;
    for (const auto& vi : v) vn2 += std::norm(vi);
    if (vn2 == 0.0) continue;
    // Left: H <- (I - 2 v v^*/v^*v) H on rows j+1..n-1.
    for (std::size_t c = j; c < n; ++c) {
      Scalar s = 0.0;
      for (std::size_t i = j + 1; i < n; ++i) s += std::conj(v[i - j - 1]) * H(i, c);
      s *= 2.0 / vn2;
      for (std::size_t i = j + 1; i < n; ++i) H(i, c) -= s * v[i - j - 1];
    }
    // Right: H <- H (I - 2 v v^*/v^*v) on cols j+1..n-1.
    for (std::size_t r = 0; r < n; ++r) {
      Scalar s = 0.0;
      for (std::size_t i = j + 1; i < n; ++i) s += H(r, i) * v[i - j - 1];
      s *= 2.0 / vn2;
      for (std::size_t i = j + 1; i < n; ++i) H(r, i) -= s * std::conj(v[i - j - 1]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      Scalar s = 0.0;
      for (std::size_t i = j + 1; i < n; ++i) s += Q(r, i) * v[i - j - 1];
      s *= 2.0 / vn2;
      for (std::size_t i = j + 1; i < n; ++i) Q(r, i) -= s * std::conj(v[i - j - 1]);
    }
    for (std::size_t i = j + 2; i < n; ++i) H(i, j) = 0.0;
    H(j + 1, j) = alpha;
  }
}

// One explicit single-shift QR sweep on the Hessenberg window [lo, hi].
void qr_step(DenseMatrix& H, std::size_t lo, std::size_t hi, Scalar shift) {
  const std::size_t n = H.rows();
  for (std::size_t i = lo; i <= hi; ++i) H(i, i) -= shift;
  std::vector<Givens> rots(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) {
    Givens g = make_givens(H(i, i), H(i + 1, i));
    rots[i - lo] = g;
    for (std::size_t c = i; c < n; ++c) {
      Scalar a = H(i, c), b = H(i + 1, c);
      H(i, c) = g.c * a + g.s * b;
      H(i + 1, c) = -std::conj(g.s) * a + g.c * b;
    }
  }
  for (std::size_t i = lo; i < hi; ++i) {
    Givens g = rots[i - lo];
    std::size_t rmax = std::min(i + 1, hi);
    for (std::size_t r = 0; r <= rmax; ++r) {
      Scalar a = H(r, i), b = H(r, i + 1);
      H(r, i) = a * g.c + b * std::conj(g.s);
      H(r, i + 1) = -a * g.s + b * g.c;
    }
  }
  for (std::size_t i = lo; i <= hi; ++i) H(i, i) += shift;
}

std::vector<Scalar> hessenberg_eigenvalues(DenseMatrix H, double scale) {
  const std::size_t n = H.rows();
  std::vector<Scalar> values(n);
  const std::size_t max_sweeps = 30 * std::max<std::size_t>(n, 1);
  std::size_t sweeps = 0;
  std::size_t hi = n - 1;
  std::size_t since_deflate = 0;
  while (true) {
    // Deflate negligible subdiagonals.
    std::size_t lo = hi;
    while (lo > 0) {
      double sub = std::abs(H(lo, lo - 1));
      if (sub <= kEps * (std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo))) +
                     kEps * kEps * scale) {
        H(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      values[hi] = H(hi, hi);
      since_deflate = 0;
      if (hi == 0) break;
      --hi;
      continue;
    }
    if (++sweeps > max_sweeps)
      throw NoConvergenceError("small_eig: QR sweep cap exceeded");
    Scalar shift;
    if (since_deflate > 0 && since_deflate % 12 == 0) {
      // Exceptional shift to break symmetric cycling.
      shift = H(hi, hi) + Scalar(1.5) * std::abs(H(hi, hi - 1));
    } else {
      shift = wilkinson_shift(H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1),
                              H(hi, hi));
    }
    ++since_deflate;
    qr_step(H, lo, hi, shift);
  }
  return values;
}

}  // namespace

std::vector<EigenPair> small_eig(const DenseMatrix& Hin) {
  if (Hin.rows() != Hin.cols()) throw DimensionError("small_eig: matrix not square");
  const std::size_t n = Hin.rows();
  if (n == 0) return {};
  if (n > 64) throw DimensionError("small_eig: order exceeds the 64 cap");
  if (n == 1) return {{Hin(0, 0), Vector{Scalar(1.0)}}};

  DenseMatrix H = Hin;
  DenseMatrix Q;
  hessenberg_reduce(H, Q);
  const DenseMatrix Hess = H;
  const double scale = std::max(Hin.max_abs(), 1e-300);
  std::vector<Scalar> values = hessenberg_eigenvalues(H, scale);

  // Eigenvectors by inverse iteration on the Hessenberg form; cluster
  // members are orthogonalized against earlier members so multiple
  // eigenvalues do not collapse to one direction.
  std::vector<EigenPair> pairs;
  pairs.reserve(n);
  std::vector<Vector> small_vecs;
  for (std::size_t j = 0; j < n; ++j) {
    Scalar lambda = values[j];
    std::vector<std::size_t> cluster;
    for (std::size_t m = 0; m < j; ++m)
      if (std::abs(values[m] - lambda) <= 1e-8 * scale) cluster.push_back(m);

    DenseMatrix B = Hess;
    for (std::size_t i = 0; i < n; ++i) B(i, i) -= lambda;
    // Shifted matrix is nearly singular by construction; replace failed
    // pivots by a tiny perturbation instead of using LuFactors.
    // Factor B with partial pivoting and pivot repair.
    std::vector<std::size_t> perm(n);
    const double tiny = kEps * scale;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      double best = std::abs(B(c, c));
      for (std::size_t i = c + 1; i < n; ++i)
        if (std::abs(B(i, c)) > best) {
          best = std::abs(B(i, c));
          piv = i;
        }
      perm[c] = piv;
      if (piv != c)
        for (std::size_t cc = 0; cc < n; ++cc) std::swap(B(c, cc), B(piv, cc));
      if (std::abs(B(c, c)) <= tiny) B(c, c) = tiny;
      for (std::size_t i = c + 1; i < n; ++i) {
        Scalar m = B(i, c) / B(c, c);
        B(i, c) = m;
        for (std::size_t cc = c + 1; cc < n; ++cc) B(i, cc) -= m * B(c, cc);
      }
    }
    auto solve_lu = [&](Vector x) {
      for (std::size_t c = 0; c < n; ++c) {
        if (perm[c] != c) std::swap(x[c], x[perm[c]]);
        for (std::size_t i = c + 1; i < n; ++i) x[i] -= B(i, c) * x[c];
      }
      for (std::size_t c = n; c-- > 0;) {
        for (std::size_t cc = c + 1; cc < n; ++cc) x[c] -= B(c, cc) * x[cc];
        x[c] /= B(c, c);
      }
      return x;
    };

    Vector y(n);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = Scalar(1.0 + 0.3 * std::cos(double(i * (j + 1))),
                    0.1 * std::sin(double(i + 1) * double(j + 1)));
    y = normalized(y);
    for (int it = 0; it < 3; ++it) {
      y = solve_lu(y);
      for (std::size_t m : cluster) {
        Scalar h = dot(small_vecs[m], y);
        axpy(-h, small_vecs[m], y);
      }
      double ny = norm2(y);
      if (ny == 0.0) break;
      y = scaled(y, 1.0 / ny);
      double res = norm2(sub(dense_mv(Hess, y), scaled(y, lambda)));
      if (res <= 1e-13 * scale && cluster.empty()) break;
    }
    small_vecs.push_back(y);
    pairs.push_back({lambda, normalized(dense_mv(Q, y))});
  }
  return pairs;
}

std::pair<double, Vector> small_svd_min(const DenseMatrix& M) {
  if (M.rows() < M.cols()) throw DimensionError("small_svd_min: rows < cols");
  const std::size_t k = M.cols();
  DenseMatrix G(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      Scalar s = 0.0;
      for (std::size_t r = 0; r < M.rows(); ++r)
        s += std::conj(M(r, i)) * M(r, j);
      G(i, j) = s;
    }
  auto pairs = small_eig(G);
  std::size_t best = 0;
  for (std::size_t j = 1; j < pairs.size(); ++j)
    if (pairs[j].value.real() < pairs[best].value.real()) best = j;
  Vector v = pairs[best].vector;
  double sigma = norm2(dense_mv(M, v));
  return {sigma, v};
}

}  // namespace jdx
