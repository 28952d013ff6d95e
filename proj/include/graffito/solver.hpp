#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "graffito/sparse.hpp"

namespace graffito {

class SolverError : public std::runtime_error {
 public:
  enum class Kind { Singular, NotConverged, Residual };
  SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class SolverKind { Auto, Direct, Iterative };

std::string_view to_string(SolverKind kind);
SolverKind solver_kind_from_string(std::string_view name);

struct SolverOptions {
  SolverKind kind = SolverKind::Auto;
  /// Relative residual target: ||Ax - b|| <= tol * max(||b||, 1e-300).
  double tolerance = 1e-12;
  /// The direct path refines towards `tolerance` but only fails above this bound.
  double direct_residual_limit = 1e-8;
  int max_iterations = 2000;
  /// Auto picks the direct path up to this many unknowns.
  std::size_t direct_limit = 50000;
  /// A pivot below pivot_threshold * max|A| is treated as singular.
  double pivot_threshold = 1e-14;
};

/// Banded LU with partial pivoting. The band is taken from the pattern, so the
/// lexicographic numbering of a structured grid gives bandwidth n_per_side + 1.
class BandedLU {
 public:
  BandedLU() = default;
  void factorize(const SparseMatrix& a, double pivot_threshold = 1e-14);
  /// Solves in place.
  void solve_in_place(std::span<double> b) const;
  std::size_t n() const { return n_; }
  bool factorized() const { return n_ > 0; }

 private:
  double& at(std::size_t i, std::size_t j) { return band_[i * width_ + (j + lower_ - i)]; }
  double at(std::size_t i, std::size_t j) const { return band_[i * width_ + (j + lower_ - i)]; }

  std::size_t n_ = 0;
  std::size_t lower_ = 0;
  std::size_t upper_ = 0;  // after pivoting fill: lower + original upper
  std::size_t width_ = 0;
  std::vector<double> band_;
  std::vector<std::size_t> pivots_;
};

/// Result statistics of the last solve.
struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Factor-once, solve-many front end choosing between BandedLU and
/// Jacobi-preconditioned BiCGSTAB.
class LinearSolver {
 public:
  explicit LinearSolver(SolverOptions options = {}) : options_(options) {}

  /// Takes a copy of the matrix (needed for residual checks and the Krylov path).
  void factorize(const SparseMatrix& a);
  std::vector<double> solve(std::span<const double> b) const;
  void solve(std::span<const double> b, std::span<double> x) const;

  bool uses_direct() const { return direct_; }
  const SolveStats& last_stats() const { return stats_; }
  const SolverOptions& options() const { return options_; }

 private:
  void bicgstab(std::span<const double> b, std::span<double> x) const;

  SolverOptions options_;
  SparseMatrix matrix_;
  BandedLU lu_;
  std::vector<double> inv_diag_;
  bool direct_ = true;
  mutable SolveStats stats_;
};

/// One-shot solve of A x = b.
std::vector<double> solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options = {});

}  // namespace graffito
