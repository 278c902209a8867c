#include "jdx/projection.hpp"

#include <algorithm>
#include <cmath>

namespace jdx {

Vector SubspaceBasis::lift(const Vector& y) const {
  if (y.size() != cols.size())
    throw DimensionError("SubspaceBasis::lift: size mismatch");
  Vector u(n, Scalar(0.0));
  for (std::size_t j = 0; j < cols.size(); ++j) axpy(y[j], cols[j], u);
  return u;
}

Scalar rayleigh_quotient(const SparseMatrix& A, const Vector& u) {
  return dot(u, spmv(A, u));
}

Vector residual(const SparseMatrix& A, Scalar theta, const Vector& u) {
  Vector r = spmv(A, u);
  axpy(-theta, u, r);
  return r;
}

void sort_by_target(std::vector<RitzPair>& pairs, const Target& target) {
  auto key = [&](const RitzPair& p) {
    switch (target.kind) {
      case Target::Kind::LargestReal:
        return -p.theta.real();
      case Target::Kind::SmallestMagnitude:
        return std::abs(p.theta);
      case Target::Kind::Nearest:
        return std::abs(p.theta - target.shift);
    }
    return 0.0;
  };
  std::stable_sort(pairs.begin(), pairs.end(),
                   [&](const RitzPair& a, const RitzPair& b) {
                     return key(a) < key(b);
                   });
}

std::vector<RitzPair> rayleigh_ritz(const SparseMatrix& A, const SubspaceBasis& V,
                                    const Target& target) {
  const std::size_t k = V.dim();
  std::vector<Vector> AV(k);
  for (std::size_t j = 0; j < k; ++j) AV[j] = spmv(A, V.cols[j]);
  DenseMatrix H(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) H(i, j) = dot(V.cols[i], AV[j]);

  std::vector<RitzPair> pairs;
  pairs.reserve(k);
  for (const auto& [theta, y] : small_eig(H)) {
    RitzPair p;
    p.theta = theta;
    p.rho = theta;
    p.y = y;
    p.u = normalized(V.lift(y));
    p.r = residual(A, theta, p.u);
    p.resnorm = norm2(p.r);
    pairs.push_back(std::move(p));
  }
  sort_by_target(pairs, target);
  return pairs;
}

std::vector<RitzPair> harmonic_ritz(const SparseMatrix& A, const SubspaceBasis& V,
                                    Scalar shift, const Target& target) {
  const std::size_t k = V.dim();
  std::vector<Vector> W(k);
  for (std::size_t j = 0; j < k; ++j) {
    W[j] = spmv(A, V.cols[j]);
    axpy(-shift, V.cols[j], W[j]);
  }
  DenseMatrix WtW(k, k), WtV(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      WtW(i, j) = dot(W[i], W[j]);
      WtV(i, j) = dot(W[i], V.cols[j]);
    }
  // Reduce (W^*W) z = mu (W^*V) z to the standard problem for
  // G = (W^*V)^{-1} (W^*W).
  LuFactors lu = [&]() {
    try {
      return LuFactors(WtV);
    } catch (const SingularError&) {
      throw SingularError(
          "harmonic_ritz: W^*V is numerically singular (shift hits a "
          "projected Ritz value); perturb the shift");
    }
  }();
  DenseMatrix G(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    Vector col(k);
    for (std::size_t i = 0; i < k; ++i) col[i] = WtW(i, j);
    Vector g = lu.solve(col);
    for (std::size_t i = 0; i < k; ++i) G(i, j) = g[i];
  }

  std::vector<RitzPair> pairs;
  pairs.reserve(k);
  for (const auto& [mu, z] : small_eig(G)) {
    RitzPair p;
    p.theta = shift + mu;  // harmonic Ritz value
    p.y = z;
    p.u = normalized(V.lift(z));
    // Residual-norm monotonicity holds for Rayleigh quotients, so the
    // residual uses rho(u), not the harmonic value.
    p.rho = rayleigh_quotient(A, p.u);
    p.r = residual(A, p.rho, p.u);
    p.resnorm = norm2(p.r);
    pairs.push_back(std::move(p));
  }
  sort_by_target(pairs, target);
  return pairs;
}

std::pair<Vector, double> refined_vector(const SparseMatrix& A, Scalar theta,
                                         const SubspaceBasis& V) {
  const std::size_t k = V.dim();
  DenseMatrix W(V.n, k);
  for (std::size_t j = 0; j < k; ++j) {
    Vector w = spmv(A, V.cols[j]);
    axpy(-theta, V.cols[j], w);
    for (std::size_t i = 0; i < V.n; ++i) W(i, j) = w[i];
  }
  auto [sigma, z] = small_svd_min(W);
  Vector u = normalized(V.lift(z));
  Vector r = residual(A, theta, u);
  return {std::move(u), norm2(r)};
}

}  // namespace jdx
