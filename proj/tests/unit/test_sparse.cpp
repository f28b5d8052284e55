#include <cmath>
#include <random>

#include "doctest.h"

#include "burgers/error.hpp"
#include "burgers/fem.hpp"
#include "burgers/sparse.hpp"

using namespace burgers;

TEST_CASE("csr_from_triplets sums duplicates and canonicalizes") {
  const std::vector<Triplet> dup{{0, 0, 1.0}, {0, 0, 2.0}};
  const SparseMatrix a = csr_from_triplets(dup, 1, 1);
  CHECK(a.nnz() == 1);
  CHECK(a.at(0, 0) == 3.0);

  const SparseMatrix z = csr_from_triplets({}, 3, 3);
  CHECK(z.nnz() == 0);
  CHECK(spmv(z, Vector{1.0, 2.0, 3.0}) == Vector{0.0, 0.0, 0.0});

  const std::vector<Triplet> eye{{1, 1, 1.0}, {0, 0, 1.0}};
  CHECK(spmv(csr_from_triplets(eye, 2, 2), Vector{4.0, -5.0}) == Vector{4.0, -5.0});

  const std::vector<Triplet> shuffled{{1, 2, 1.0}, {1, 0, 2.0}, {0, 1, 3.0}, {1, 1, 4.0}};
  const SparseMatrix s = csr_from_triplets(shuffled, 2, 3);
  CHECK(s.column_indices() == std::vector<int>{1, 0, 1, 2});
  CHECK(s.row_offsets() == std::vector<int>{0, 1, 4});

  const std::vector<Triplet> bad{{0, 3, 1.0}};
  CHECK_THROWS_AS(csr_from_triplets(bad, 3, 3), InvalidParameter);
}

TEST_CASE("spmv") {
  const std::vector<Triplet> t{{0, 0, 2.0}, {0, 1, 1.0}, {1, 1, 3.0}};
  const SparseMatrix a = csr_from_triplets(t, 2, 2);
  CHECK(spmv(a, Vector{1.0, 1.0}) == Vector{3.0, 3.0});
  CHECK_THROWS_AS(spmv(a, Vector{1.0, 1.0, 1.0}), DimensionMismatch);
}

TEST_CASE("solve_spd") {
  const std::vector<Triplet> eye{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}};
  const auto r1 = solve_spd(csr_from_triplets(eye, 3, 3), Vector{1.0, -2.0, 5.0});
  CHECK(r1.x[0] == doctest::Approx(1.0));
  CHECK(r1.x[1] == doctest::Approx(-2.0));
  CHECK(r1.x[2] == doctest::Approx(5.0));

  const std::vector<Triplet> diag{{0, 0, 2.0}, {1, 1, 4.0}};
  const auto r2 = solve_spd(csr_from_triplets(diag, 2, 2), Vector{2.0, 4.0});
  CHECK(r2.x[0] == doctest::Approx(1.0));
  CHECK(r2.x[1] == doctest::Approx(1.0));

  const FeSpace space(build_unit_square_mesh(4));
  const SparseMatrix m = assemble_mass(space);
  const Vector b = spmv(m, Vector(space.size(), 1.0));
  const auto r3 = solve_spd(m, b, 1e-12);
  CHECK(residual_norm(m, r3.x, b) <= 1e-12 * norm2(b));
  for (double x : r3.x) CHECK(x == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("CG converges within n iterations on small SPD systems") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int n : {5, 12, 30}) {
    // A = B^T B + n I with sparse random B
    std::vector<Triplet> bt;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || d(rng) > 0.7) bt.push_back({i, j, d(rng)});
      }
    }
    const SparseMatrix b = csr_from_triplets(bt, n, n);
    std::vector<Triplet> at;
    for (int i = 0; i < n; ++i) {
      at.push_back({i, i, static_cast<double>(n)});
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += b.at(k, i) * b.at(k, j);
        if (s != 0.0) at.push_back({i, j, s});
      }
    }
    const SparseMatrix a = csr_from_triplets(at, n, n);
    Vector rhs(n);
    for (double& x : rhs) x = d(rng);
    const auto r = solve_spd(a, rhs, 1e-12);
    CHECK(r.iterations <= n);
    CHECK(residual_norm(a, r.x, rhs) <= 1e-12 * norm2(rhs));
  }
}

TEST_CASE("CG reports breakdown on indefinite matrices") {
  const std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, -1.0}};
  try {
    solve_spd(csr_from_triplets(t, 2, 2), Vector{1.0, 1.0});
    FAIL("expected SolverFailure");
  } catch (const SolverFailure& e) {
    CHECK(e.residual() == doctest::Approx(1.0));
  }
}

TEST_CASE("solve_general") {
  const std::vector<Triplet> eye{{0, 0, 1.0}, {1, 1, 1.0}};
  CHECK(solve_general(csr_from_triplets(eye, 2, 2), Vector{3.0, 4.0}) == Vector{3.0, 4.0});

  const std::vector<Triplet> perm{{0, 1, 1.0}, {1, 0, 1.0}};
  const Vector x = solve_general(csr_from_triplets(perm, 2, 2), Vector{7.0, -2.0});
  CHECK(x[0] == -2.0);
  CHECK(x[1] == 7.0);

  const std::vector<Triplet> sing{{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}};
  CHECK_THROWS_AS(solve_general(csr_from_triplets(sing, 2, 2), Vector{1.0, 2.0}), SingularMatrix);
}

TEST_CASE("LU recovers spmv-generated right-hand sides") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = 50;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 4.0 + d(rng)});
    for (int k = 0; k < 4; ++k) t.push_back({i, static_cast<int>((i * 7 + 13 * k + 3) % n), d(rng)});
  }
  const SparseMatrix a = csr_from_triplets(t, n, n);
  Vector xs(n);
  for (double& v : xs) v = d(rng);
  const Vector x = solve_general(a, spmv(a, xs));
  double err = 0.0, ref = 0.0;
  for (int i = 0; i < n; ++i) {
    err = std::max(err, std::abs(x[i] - xs[i]));
    ref = std::max(ref, std::abs(xs[i]));
  }
  CHECK(err <= 1e-10);
  CHECK(err / ref <= 1e-9);
}

TEST_CASE("SparseLu reuses its analysis across matrices with one pattern") {
  const FeSpace space(build_unit_square_mesh(5));
  SparseMatrix a = assemble_stiffness(space);
  a.add_scaled(1.0, assemble_mass(space));
  SparseLu lu;
  const Vector ones(space.size(), 1.0);
  for (double s : {1.0, 2.0, 10.0}) {
    SparseMatrix b = a;
    b.add_scaled(s, assemble_mass(space));
    lu.factorize(b);
    const Vector rhs = spmv(b, ones);
    const Vector x = lu.solve(rhs);
    for (double v : x) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("bordered solve") {
  BorderedSystem pure{csr_from_triplets({}, 1, 1), {1.0}, {0.0}, 5.0};
  const auto s = solve_bordered(pure);
  CHECK(s.x[0] == doctest::Approx(5.0));
  CHECK(s.multiplier == doctest::Approx(0.0));

  const FeSpace space(build_unit_square_mesh(2));
  const SparseMatrix k = assemble_stiffness(space);
  const Vector c = mass_row_sums(space);
  const auto zero = solve_bordered({k, c, Vector(space.size(), 0.0), 0.0});
  CHECK(norm_inf(zero.x) <= 1e-14);

  // Zero-mean load: solution satisfies K x = b and the mean constraint.
  const FeSpace fine(build_unit_square_mesh(8));
  const SparseMatrix kf = assemble_stiffness(fine);
  const Vector cf = mass_row_sums(fine);
  FeField f = interpolate([](Vec2 p) { return std::cos(3.0 * p.x) + p.y * p.y; }, fine.mesh());
  double mean = kernels::dot(cf, f.values);
  for (double& v : f.values) v -= mean;  // area is 1
  const Vector b = spmv(assemble_mass(fine), f.values);
  const auto sol = solve_bordered({kf, cf, b, 0.0});
  CHECK(residual_norm(kf, sol.x, b) <= 1e-10);
  CHECK(std::abs(kernels::dot(cf, sol.x)) <= 1e-10);
  CHECK(std::abs(sol.multiplier) <= 1e-10);

  CHECK_THROWS_AS(solve_bordered({k, Vector(space.size(), 0.0), Vector(space.size(), 0.0), 0.0}), InvalidParameter);
}

TEST_CASE("Dirichlet elimination keeps a unit diagonal") {
  const FeSpace space(build_unit_square_mesh(3));
  SparseMatrix a = assemble_stiffness(space);
  const std::vector<int> rows{0, 5};
  a.eliminate(rows);
  for (int r : rows) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      CHECK(a.at(r, c) == (static_cast<int>(c) == r ? 1.0 : 0.0));
      CHECK(a.at(c, r) == (static_cast<int>(c) == r ? 1.0 : 0.0));
    }
  }
}
