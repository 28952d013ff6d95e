#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "graffito/fem.hpp"
#include "graffito/solver.hpp"
#include "graffito/sparse.hpp"

using namespace graffito;

namespace {
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}  // namespace

TEST_CASE("matvec") {
  const auto id = SparseMatrix::identity(2);
  const std::vector<double> x{3.0, -2.0};
  CHECK(matvec(id, x) == x);
  const auto a = SparseMatrix::from_dense({{2, 1}, {0, 3}});
  CHECK(matvec(a, std::vector<double>{1, 1}) == std::vector<double>{3, 3});
  CHECK(matvec(a, std::vector<double>{0, 0}) == std::vector<double>{0, 0});
}

TEST_CASE("pattern structure") {
  const auto a = SparseMatrix::from_dense({{2, 1, 0}, {0, 3, 0}, {0, 0, 1}});
  const auto& p = a.pattern();
  CHECK(p.n() == 3);
  CHECK(p.find(1, 0) != npos);
  CHECK(p.find(0, 2) == npos);
  CHECK(a(1, 0) == 0.0);
  CHECK(p.n_edges() == 1);
  CHECK(p.edge_lo(0) == 0);
  CHECK(p.edge_hi(0) == 1);
  for (std::size_t k = 0; k < p.nnz(); ++k) {
    CHECK(p.transpose_position(p.transpose_position(k)) == k);
    CHECK(p.row_of(p.transpose_position(k)) == p.col(k));
  }
  SparseMatrix b = a;
  CHECK_THROWS_AS(b.at(0, 2), std::out_of_range);
}

TEST_CASE("direct and iterative solves") {
  for (const SolverKind kind : {SolverKind::Direct, SolverKind::Iterative}) {
    SolverOptions opt;
    opt.kind = kind;
    const std::vector<double> b{1.5, -2.0, 4.0};
    CHECK(max_abs_diff(solve(SparseMatrix::identity(3), b, opt), b) < 1e-12);
    const auto diag = SparseMatrix::from_dense({{2, 0}, {0, 4}});
    CHECK(max_abs_diff(solve(diag, std::vector<double>{2, 8}, opt), std::vector<double>{1, 2}) < 1e-12);
    const auto lap = SparseMatrix::from_dense({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}});
    CHECK(max_abs_diff(solve(lap, std::vector<double>{1, 0, 0}, opt), std::vector<double>{0.75, 0.5, 0.25}) <
          1e-12);
  }
}

TEST_CASE("singular matrices are reported") {
  const auto s = SparseMatrix::from_dense({{1, 1}, {1, 1}});
  SolverOptions opt;
  opt.kind = SolverKind::Direct;
  try {
    solve(s, std::vector<double>{1, 2}, opt);
    FAIL("no error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::Singular);
  }
}

TEST_CASE("random well-conditioned systems") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> size(2, 200);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng);
    const int band = 1 + trial % 5;
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
      double off = 0.0;
      for (int j = std::max(0, i - band); j <= std::min(n - 1, i + band); ++j) {
        if (i == j) continue;
        dense[i][j] = uni(rng);
        off += std::abs(dense[i][j]);
      }
      dense[i][i] = off + 1.0 + std::abs(uni(rng));
    }
    const auto a = SparseMatrix::from_dense(dense);
    std::vector<double> b(n);
    for (auto& x : b) x = uni(rng);
    SolverOptions opt;
    opt.kind = trial % 2 == 0 ? SolverKind::Direct : SolverKind::Iterative;
    const auto x = solve(a, b, opt);
    const auto r = matvec(a, x);
    double rn = 0.0, bn = 0.0;
    for (int i = 0; i < n; ++i) {
      rn += (r[i] - b[i]) * (r[i] - b[i]);
      bn += b[i] * b[i];
    }
    CHECK(std::sqrt(rn) <= 1e-10 * std::sqrt(bn));
  }
}

TEST_CASE("row and column sums") {
  const auto z = SparseMatrix::from_dense({{0, 0}, {0, 0}});
  CHECK(row_sum(z, 0) == 0.0);
  const auto a = SparseMatrix::from_dense({{2, -2}, {-2, 2}});
  CHECK(row_sums(a) == std::vector<double>{0, 0});
  CHECK(column_sums(a) == std::vector<double>{0, 0});
  const Q1Space space(StructuredQuadMesh(Rectangle{}, 3));
  const auto k = assemble_stiffness(space);
  for (const double s : row_sums(k)) CHECK(std::abs(s) < 1e-12);
}

TEST_CASE("Z-matrix and diagonal dominance") {
  const auto a = SparseMatrix::from_dense({{2, -1}, {-1, 2}});
  CHECK(is_z_matrix(a));
  CHECK(is_diagonally_dominant(a, true));
  const auto b = SparseMatrix::from_dense({{1, 0.5}, {0, 1}});
  CHECK_FALSE(is_z_matrix(b));
}

TEST_CASE("in-place updates keep the shared pattern") {
  const Q1Space space(StructuredQuadMesh(Rectangle{}, 2));
  SparseMatrix m = assemble_mass(space);
  const auto k = assemble_stiffness(space);
  const auto* before = m.pattern_ptr().get();
  m.add(0.5, k).scale(2.0);
  CHECK(m.pattern_ptr().get() == before);
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t q = m.pattern().row_begin(i); q < m.pattern().row_end(i); ++q) {
      CHECK(m.pattern().find(m.pattern().col(q), i) != npos);
    }
  }
}
