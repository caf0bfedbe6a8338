#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "plap/linalg.hpp"

using namespace plap;

namespace {

SparseMatrix from_dense(const oracle::Dense& d) {
  TripletBuilder b(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      if (d[i][j] != 0.0) b.add(i, j, d[i][j]);
  return b.build();
}

// B B^T + I with B dense random.
oracle::Dense random_spd(std::size_t n, std::mt19937& rng) {
  oracle::Dense b = oracle::zeros(n);
  for (auto& row : b) row = oracle::random_vector(n, rng);
  oracle::Dense a = oracle::zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) a[i][j] += b[i][k] * b[j][k];
      if (i == j) a[i][j] += 1.0;
    }
  return a;
}

// 1-D Laplacian with a variable diagonal shift; sparse and well conditioned.
SparseMatrix tridiagonal(std::size_t n, double shift) {
  TripletBuilder b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.add(i, i, 2.0 + shift * (1.0 + std::sin(static_cast<double>(i))));
    if (i > 0) b.add(i, i - 1, -1.0);
    if (i + 1 < n) b.add(i, i + 1, -1.0);
  }
  return b.build();
}

}  // namespace

TEST_CASE("triplet builder sums duplicates in insertion order") {
  TripletBuilder b(3);
  b.add(2, 0, 1.0);
  b.add(0, 1, 0.5);
  b.add(0, 1, 0.25);
  b.add(2, 0, 1e-17);
  b.add(1, 1, 3.0);
  const SparseMatrix a = b.build();
  CHECK(a.nonzeros() == 3);
  CHECK(a(0, 1) == 0.75);
  CHECK(a(2, 0) == 1.0 + 1e-17);
  CHECK(a(1, 1) == 3.0);
  CHECK(a(1, 0) == 0.0);
  CHECK(a.diagonal() == std::vector<double>{0.0, 3.0, 0.0});
  CHECK(a.asymmetry() == 1.0);
  CHECK_THROWS_AS(b.add(3, 0, 1.0), std::out_of_range);
}

TEST_CASE("sparse matrix validates layout") {
  CHECK_THROWS_AS(SparseMatrix(2, {0, 2, 3}, {1, 0, 1}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix(2, {0, 1}, {0}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix(2, {0, 1, 2}, {0, 2}, {1, 1}), std::invalid_argument);
  CHECK_NOTHROW(SparseMatrix(2, {0, 1, 2}, {0, 1}, {1, 1}));
}

TEST_CASE("spmv") {
  std::mt19937 rng(1);
  const auto x = oracle::random_vector(7, rng);
  CHECK(spmv(SparseMatrix::identity(7), x) == x);
  const SparseMatrix zero = TripletBuilder(7).build();
  CHECK(spmv(zero, x) == std::vector<double>(7, 0.0));

  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 30;
    oracle::Dense d = oracle::zeros(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& row : d)
      for (auto& v : row)
        if (u(rng) < 0.15) v = 2.0 * u(rng) - 1.0;
    const auto y = oracle::random_vector(n, rng);
    CHECK(oracle::max_abs_diff(spmv(from_dense(d), y), oracle::matvec(d, y)) < 1e-12);
  }

  CHECK_THROWS_AS(spmv(zero, std::vector<double>(6)), std::invalid_argument);
  std::vector<double> out(5);
  CHECK_THROWS_AS(spmv(zero, x, out), std::invalid_argument);
  CHECK_THROWS_AS(dot(std::vector<double>(2), std::vector<double>(3)), std::invalid_argument);
  CHECK(norm2(std::vector<double>{3.0, 4.0}) == 5.0);
}

TEST_CASE("cg small systems") {
  std::mt19937 rng(2);
  const auto b = oracle::random_vector(9, rng);
  const CgResult id = cg_solve(SparseMatrix::identity(9), b);
  CHECK(id.iterations == 1);
  CHECK(oracle::max_abs_diff(id.x, b) < 1e-15);

  const SparseMatrix a = from_dense({{2.0, 1.0}, {1.0, 2.0}});
  for (auto pc : {Preconditioner::none, Preconditioner::jacobi}) {
    const CgResult r = cg_solve(a, std::vector<double>{3.0, 3.0}, {1e-12, 0, pc});
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-12));
  }

  const CgResult zero_rhs = cg_solve(a, std::vector<double>{0.0, 0.0});
  CHECK(zero_rhs.iterations == 0);
  CHECK(zero_rhs.x == std::vector<double>{0.0, 0.0});
}

TEST_CASE("cg against dense elimination") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = random_spd(50, rng);
    const auto b = oracle::random_vector(50, rng);
    const CgResult r = cg_solve(from_dense(d), b);
    CHECK(oracle::max_abs_diff(r.x, oracle::gauss_solve(d, b)) < 1e-9);
    CHECK(norm2(oracle::matvec(d, r.x)) > 0.0);
    auto res = oracle::matvec(d, r.x);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= b[i];
    CHECK(norm2(res) <= 1e-12 * norm2(b) * 1.01);
  }
}

TEST_CASE("cg residual history is nonincreasing up to slack") {
  std::mt19937 rng(4);
  for (auto pc : {Preconditioner::none, Preconditioner::jacobi}) {
    const SparseMatrix a = tridiagonal(200, 0.05);
    const auto b = oracle::random_vector(200, rng);
    const CgResult r = cg_solve(a, b, {1e-12, 0, pc});
    REQUIRE(r.history.size() == r.iterations + 1);
    if (pc == Preconditioner::none)
      for (std::size_t k = 1; k < r.history.size(); ++k)
        CHECK(r.history[k] <= 1.1 * r.history[k - 1]);
    CHECK(r.history.back() == r.residual_norm);
  }
}

TEST_CASE("jacobi and unpreconditioned agree") {
  std::mt19937 rng(5);
  const SparseMatrix a = tridiagonal(120, 1.0);
  const auto b = oracle::random_vector(120, rng);
  const CgResult plain = cg_solve(a, b, {1e-12, 0, Preconditioner::none});
  const CgResult jac = cg_solve(a, b, {1e-12, 0, Preconditioner::jacobi});
  // Both residuals are below 1e-12 |b|; with cond(A) <= 6 the solutions agree
  // to a few times that.
  CHECK(oracle::max_abs_diff(plain.x, jac.x) < 1e-10 * norm2(b));
}

TEST_CASE("cg failure carries the partial result") {
  std::mt19937 rng(6);
  const SparseMatrix a = tridiagonal(400, 0.0);
  const auto b = oracle::random_vector(400, rng);
  try {
    cg_solve(a, b, {1e-14, 3, Preconditioner::none});
    FAIL("expected CgError");
  } catch (const CgError& e) {
    CHECK(e.partial().iterations == 3);
    CHECK(e.partial().x.size() == 400);
    CHECK(e.partial().residual_norm > 0.0);
  }
  CHECK_THROWS_AS(cg_solve(a, std::vector<double>(3)), std::invalid_argument);
  CHECK_THROWS_AS(cg_solve(a, b, {0.0, 0, Preconditioner::none}), std::invalid_argument);
}

TEST_CASE("cg breakdown on an indefinite matrix is reported") {
  const SparseMatrix a = from_dense({{1.0, 0.0}, {0.0, -1.0}});
  CHECK_THROWS_AS(cg_solve(a, std::vector<double>{1.0, 1.0}, {1e-12, 0, Preconditioner::none}),
                  CgError);
}
