#include <doctest.h>

#include <cmath>
#include <random>

#include "jdx/linalg.hpp"
#include "jdx/matio.hpp"
#include "oracles.hpp"

using namespace jdx;

namespace {

SparseMatrix example1() { return gen_matrix({.kind = "example1"}); }

SparseMatrix identity_csr(std::size_t n) {
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> t;
  for (std::size_t i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
  return SparseMatrix::from_triplets(n, std::move(t));
}

}  // namespace

TEST_CASE("spmv: identity") {
  auto A = identity_csr(4);
  Vector x = {1.0, 2.0, 3.0, 4.0};
  Vector y = spmv(A, x);
  for (std::size_t i = 0; i < 4; ++i) CHECK(y[i] == x[i]);
}

TEST_CASE("spmv: example1 applied to e3") {
  Vector y = spmv(example1(), oracle::unit_coordinate(4, 2));
  CHECK(y[0] == Scalar(0.0));
  CHECK(y[1] == Scalar(2.0));
  CHECK(y[2] == Scalar(0.0));
  CHECK(y[3] == Scalar(0.0));
}

TEST_CASE("spmv: tridiag200 first column") {
  auto A = gen_matrix({.kind = "tridiag200"});
  Vector y = spmv(A, oracle::unit_coordinate(200, 0));
  CHECK(y[0].real() == doctest::Approx(2.9).epsilon(1e-15));
  for (std::size_t i = 1; i < 200; ++i)
    CHECK(y[i].real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("spmv: dimension mismatch throws") {
  CHECK_THROWS_AS(spmv(identity_csr(4), Vector(3)), DimensionError);
}

TEST_CASE("spmv linearity on random inputs") {
  std::mt19937 rng(7);
  auto A = oracle::rand_real_symmetric(rng, 30);
  const double anorm = A.norm_inf();
  for (int rep = 0; rep < 20; ++rep) {
    Vector x = oracle::rand_vector(rng, 30);
    Vector y = oracle::rand_vector(rng, 30);
    Scalar a = oracle::rand_scalar(rng), b = oracle::rand_scalar(rng);
    Vector lhs = spmv(A, add(scaled(x, a), scaled(y, b)));
    Vector rhs = add(scaled(spmv(A, x), a), scaled(spmv(A, y), b));
    CHECK(norm2(sub(lhs, rhs)) <= 1e-12 * anorm * (norm2(x) + norm2(y)));
  }
}

TEST_CASE("mgs: already orthogonal vector passes through") {
  std::vector<Vector> V = {oracle::unit_coordinate(3, 0)};
  auto v = mgs_orthonormalize(V, oracle::unit_coordinate(3, 1));
  REQUIRE(v.has_value());
  CHECK(std::abs((*v)[1] - Scalar(1.0)) < 1e-15);
}

TEST_CASE("mgs: vector in span deflates") {
  std::vector<Vector> V = {oracle::unit_coordinate(3, 0)};
  CHECK(!mgs_orthonormalize(V, oracle::unit_coordinate(3, 0)).has_value());
}

TEST_CASE("mgs: exact projector arithmetic") {
  std::vector<Vector> V = {oracle::unit_coordinate(3, 0)};
  const double s = 1.0 / std::sqrt(2.0);
  auto v = mgs_orthonormalize(V, {s, s, 0.0});
  REQUIRE(v.has_value());
  CHECK(std::abs((*v)[0]) < 1e-15);
  CHECK(std::abs((*v)[1] - Scalar(1.0)) < 1e-14);
  CHECK(std::abs((*v)[2]) < 1e-15);
}

TEST_CASE("mgs orthogonality property: n=100 k=20") {
  std::mt19937 rng(11);
  std::vector<Vector> V;
  for (std::size_t j = 0; j < 20; ++j) {
    auto v = mgs_orthonormalize(V, oracle::rand_vector(rng, 100));
    REQUIRE(v.has_value());
    V.push_back(*v);
  }
  for (int rep = 0; rep < 10; ++rep) {
    auto v = mgs_orthonormalize(V, oracle::rand_vector(rng, 100));
    REQUIRE(v.has_value());
    double vtv = 0.0;
    for (const auto& col : V) vtv += std::norm(dot(col, *v));
    CHECK(std::sqrt(vtv) <= 1e-12);
    CHECK(std::abs(norm2(*v) - 1.0) <= 1e-14);
  }
}

TEST_CASE("lu_solve: identity") {
  Vector x = lu_solve(DenseMatrix::identity(3), {1.0, 2.0, 3.0});
  CHECK(std::abs(x[0] - Scalar(1.0)) < 1e-15);
  CHECK(std::abs(x[1] - Scalar(2.0)) < 1e-15);
  CHECK(std::abs(x[2] - Scalar(3.0)) < 1e-15);
}

TEST_CASE("lu_solve: the singular projected matrix from the 4x4 example") {
  DenseMatrix B(4, 4);
  B(0, 0) = 1.0;
  B(3, 3) = 1.0;
  CHECK_THROWS_AS(lu_solve(B, {0.0, -2.0, 0.0, 0.0}), SingularError);
}

TEST_CASE("lu_solve: 2x2 hand elimination") {
  DenseMatrix M(2, 2);
  M(0, 0) = 2.0;
  M(0, 1) = 1.0;
  M(1, 0) = 1.0;
  M(1, 1) = 3.0;
  Vector x = lu_solve(M, {3.0, 4.0});
  CHECK(std::abs(x[0] - Scalar(1.0)) < 1e-14);
  CHECK(std::abs(x[1] - Scalar(1.0)) < 1e-14);
}

TEST_CASE("lu_solve round trip on random well-conditioned systems") {
  std::mt19937 rng(23);
  for (std::size_t n : {5, 20, 50}) {
    DenseMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) M(i, j) = oracle::rand_scalar(rng);
      M(i, i) += Scalar(double(n));  // keep it well conditioned
    }
    Vector b = oracle::rand_vector(rng, n);
    Vector x = lu_solve(M, b);
    CHECK(norm2(sub(dense_mv(M, x), b)) <= 1e-10 * norm2(b));
  }
}

TEST_CASE("lu_solve stays backward stable when pivoting reorders rows") {
  std::mt19937 rng(29);
  for (std::size_t n : {4, 10, 25}) {
    for (int rep = 0; rep < 5; ++rep) {
      DenseMatrix M(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = oracle::rand_scalar(rng);
      Vector b = oracle::rand_vector(rng, n);
      Vector x = lu_solve(M, b);
      CHECK(norm2(sub(dense_mv(M, x), b)) <= 1e-11 * double(n) * norm2(x));
    }
  }
}

TEST_CASE("small_eig: diagonal matrix") {
  DenseMatrix H(3, 3);
  H(0, 0) = 3.0;
  H(1, 1) = 1.0;
  H(2, 2) = 2.0;
  auto pairs = small_eig(H);
  REQUIRE(pairs.size() == 3);
  std::vector<double> vals;
  for (const auto& p : pairs) {
    vals.push_back(p.value.real());
    CHECK(std::abs(p.value.imag()) < 1e-12);
    // unit coordinate vectors
    double mx = 0.0;
    for (const auto& c : p.vector) mx = std::max(mx, std::abs(c));
    CHECK(mx == doctest::Approx(1.0).epsilon(1e-12));
  }
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(vals[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(vals[2] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("small_eig: the 2x2 off-diagonal block has values -2, +2") {
  DenseMatrix H(2, 2);
  H(0, 1) = 2.0;
  H(1, 0) = 2.0;
  auto pairs = small_eig(H);
  REQUIRE(pairs.size() == 2);
  std::vector<double> vals = {pairs[0].value.real(), pairs[1].value.real()};
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(vals[1] == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("small_eig vs characteristic-polynomial roots, random Hermitian 5x5") {
  std::mt19937 rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    DenseMatrix H = oracle::rand_hermitian(rng, 5);
    auto expected = oracle::hermitian_eigenvalues_by_roots(H);
    REQUIRE(expected.size() == 5);
    auto pairs = small_eig(H);
    std::vector<double> got;
    for (const auto& p : pairs) {
      got.push_back(p.value.real());
      CHECK(std::abs(p.value.imag()) < 1e-10);
    }
    std::sort(got.begin(), got.end());
    for (std::size_t i = 0; i < 5; ++i)
      CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-8));
  }
}

TEST_CASE("small_eig reconstruction residuals") {
  std::mt19937 rng(37);
  for (std::size_t k : {3, 8, 20, 40}) {
    DenseMatrix H(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) H(i, j) = oracle::rand_scalar(rng);
    const double hnorm = H.max_abs() * double(k);
    auto pairs = small_eig(H);
    REQUIRE(pairs.size() == k);
    double total = 0.0;
    for (const auto& p : pairs)
      total += norm2(sub(dense_mv(H, p.vector), scaled(p.vector, p.value)));
    CHECK(total <= double(k) * 1e-10 * hnorm);
  }
}

TEST_CASE("small_svd_min: diagonal") {
  DenseMatrix M(3, 3);
  M(0, 0) = 3.0;
  M(1, 1) = 1.0;
  M(2, 2) = 2.0;
  auto [sigma, v] = small_svd_min(M);
  CHECK(sigma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(v[1]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("small_svd_min: unitary matrix has sigma_min 1") {
  std::mt19937 rng(41);
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < 4; ++j) {
    auto v = mgs_orthonormalize(cols, oracle::rand_vector(rng, 4));
    REQUIRE(v.has_value());
    cols.push_back(*v);
  }
  DenseMatrix U(4, 4);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) U(i, j) = cols[j][i];
  auto [sigma, v] = small_svd_min(U);
  CHECK(sigma == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("small_svd_min: tall thin matrix") {
  DenseMatrix M(3, 2);
  M(0, 0) = 1.0;
  M(1, 1) = 1e-3;
  auto [sigma, v] = small_svd_min(M);
  CHECK(sigma == doctest::Approx(1e-3).epsilon(1e-8));
  CHECK(std::abs(v[1]) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("small_svd_min optimality versus random unit probes") {
  std::mt19937 rng(43);
  DenseMatrix M(10, 6);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 6; ++j) M(i, j) = oracle::rand_scalar(rng);
  auto [sigma, v] = small_svd_min(M);
  for (int rep = 0; rep < 1000; ++rep) {
    Vector z = normalized(oracle::rand_vector(rng, 6));
    CHECK(sigma <= norm2(dense_mv(M, z)) + 1e-12);
  }
}
