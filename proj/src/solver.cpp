#include "graffito/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace graffito {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Auto: return "auto";
    case SolverKind::Direct: return "direct";
    case SolverKind::Iterative: return "iterative";
  }
  return "auto";
}

SolverKind solver_kind_from_string(std::string_view name) {
  if (name == "auto") return SolverKind::Auto;
  if (name == "direct") return SolverKind::Direct;
  if (name == "iterative") return SolverKind::Iterative;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "' (expected auto, direct or iterative)");
}

namespace {

std::string sci(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void residual(const SparseMatrix& a, std::span<const double> b, std::span<const double> x, std::span<double> r) {
  matvec(a, x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

}  // namespace

// ---------------------------------------------------------------------------

void BandedLU::factorize(const SparseMatrix& a, double pivot_threshold) {
  const auto& p = a.pattern();
  n_ = a.n();
  lower_ = p.bandwidth();
  upper_ = 2 * p.bandwidth();
  width_ = lower_ + upper_ + 1;
  band_.assign(n_ * width_, 0.0);
  pivots_.assign(n_, 0);
  for (std::size_t k = 0; k < p.nnz(); ++k) at(p.row_of(k), p.col(k)) = a.values()[k];

  const double scale = a.max_abs();
  const double tiny = pivot_threshold * scale;
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    n_ = 0;
    throw SolverError(SolverError::Kind::Singular, "matrix is zero or non-finite");
  }

  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last_row = std::min(n_ - 1, k + lower_);
    const std::size_t last_col = std::min(n_ - 1, k + upper_);

    std::size_t piv = k;
    double best = std::abs(at(k, k));
    for (std::size_t r = k + 1; r <= last_row; ++r) {
      const double v = std::abs(at(r, k));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (!(best >= tiny) || best == 0.0) {
      n_ = 0;
      throw SolverError(SolverError::Kind::Singular,
                        "singular matrix: pivot " + sci(best) + " at column " + std::to_string(k));
    }
    pivots_[k] = piv;
    if (piv != k) {
      for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(piv, j));
    }

    const double inv = 1.0 / at(k, k);
    const double* pivot_row = &band_[k * width_ + (k + lower_ - k)];
    for (std::size_t r = k + 1; r <= last_row; ++r) {
      double& lrk = at(r, k);
      if (lrk == 0.0) continue;
      lrk *= inv;
      const double l = lrk;
      double* row = &band_[r * width_ + (k + lower_ - r)];
      // row[j - k] addresses (r, j); pivot_row[j - k] addresses (k, j).
      for (std::size_t off = 1; off <= last_col - k; ++off) row[off] -= l * pivot_row[off];
    }
  }
}

void BandedLU::solve_in_place(std::span<double> b) const {
  if (b.size() != n_) throw std::invalid_argument("BandedLU: right-hand side dimension mismatch");
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t piv = pivots_[k];
    if (piv != k) std::swap(b[k], b[piv]);
    const double bk = b[k];
    if (bk == 0.0) continue;
    const std::size_t last_row = std::min(n_ - 1, k + lower_);
    for (std::size_t r = k + 1; r <= last_row; ++r) b[r] -= at(r, k) * bk;
  }
  for (std::size_t kk = n_; kk-- > 0;) {
    const std::size_t last_col = std::min(n_ - 1, kk + upper_);
    double s = b[kk];
    const double* row = &band_[kk * width_ + lower_];
    for (std::size_t off = 1; off <= last_col - kk; ++off) s -= row[off] * b[kk + off];
    b[kk] = s / row[0];
  }
}

// ---------------------------------------------------------------------------

void LinearSolver::factorize(const SparseMatrix& a) {
  matrix_ = a;
  direct_ = options_.kind == SolverKind::Direct ||
            (options_.kind == SolverKind::Auto && a.n() <= options_.direct_limit);
  if (direct_) {
    lu_.factorize(matrix_, options_.pivot_threshold);
  } else {
    const double scale = a.max_abs();
    inv_diag_.resize(a.n());
    for (std::size_t i = 0; i < a.n(); ++i) {
      const double d = a.diagonal(i);
      if (!(std::abs(d) > options_.pivot_threshold * scale)) {
        throw SolverError(SolverError::Kind::Singular,
                          "zero diagonal at row " + std::to_string(i) + " in Jacobi preconditioner");
      }
      inv_diag_[i] = 1.0 / d;
    }
  }
}

std::vector<double> LinearSolver::solve(std::span<const double> b) const {
  std::vector<double> x(b.size(), 0.0);
  solve(b, x);
  return x;
}

void LinearSolver::solve(std::span<const double> b, std::span<double> x) const {
  const std::size_t n = matrix_.n();
  if (b.size() != n || x.size() != n) throw std::invalid_argument("LinearSolver: dimension mismatch");
  const double target = options_.tolerance * std::max(norm2(b), 1e-300);
  if (!direct_) {
    bicgstab(b, x);
    return;
  }
  std::copy(b.begin(), b.end(), x.begin());
  lu_.solve_in_place(x);
  std::vector<double> r(n);
  residual(matrix_, b, x, r);
  double rn = norm2(r);
  // A few steps of iterative refinement absorb the growth factor of pivoting.
  int steps = 0;
  while (rn > target && steps < 3 && std::isfinite(rn)) {
    lu_.solve_in_place(r);
    for (std::size_t i = 0; i < n; ++i) x[i] += r[i];
    residual(matrix_, b, x, r);
    rn = norm2(r);
    ++steps;
  }
  stats_ = {steps, rn / std::max(norm2(b), 1e-300)};
  if (!(rn <= options_.direct_residual_limit * std::max(norm2(b), 1e-300))) {
    throw SolverError(SolverError::Kind::Residual,
                      "direct solve residual " + sci(stats_.relative_residual) + " above tolerance");
  }
}

void LinearSolver::bicgstab(std::span<const double> b, std::span<double> x) const {
  const std::size_t n = matrix_.n();
  const double bnorm = std::max(norm2(b), 1e-300);
  const double target = options_.tolerance * bnorm;
  std::vector<double> r(n), r_hat(n), p(n, 0.0), v(n, 0.0), s(n), t(n), y(n), zvec(n);

  // Start from the Jacobi guess.
  for (std::size_t i = 0; i < n; ++i) x[i] = inv_diag_[i] * b[i];
  residual(matrix_, b, x, r);
  double rn = norm2(r);
  stats_ = {0, rn / bnorm};
  if (rn <= target) return;
  r_hat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 1; it <= options_.max_iterations; ++it) {
    const double rho_new = dot(r_hat, r);
    if (rho_new == 0.0 || !std::isfinite(rho_new)) {
      // Breakdown: restart from the current iterate.
      r_hat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      continue;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    for (std::size_t i = 0; i < n; ++i) y[i] = inv_diag_[i] * p[i];
    matvec(matrix_, y, v);
    alpha = rho / dot(r_hat, v);
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm2(s) <= target) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
      residual(matrix_, b, x, r);
      rn = norm2(r);
      stats_ = {it, rn / bnorm};
      if (rn <= target) return;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) zvec[i] = inv_diag_[i] * s[i];
    matvec(matrix_, zvec, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i] + omega * zvec[i];
    for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    rn = norm2(r);
    stats_ = {it, rn / bnorm};
    if (rn <= target) {
      // Confirm with the true residual.
      residual(matrix_, b, x, r);
      rn = norm2(r);
      stats_.relative_residual = rn / bnorm;
      if (rn <= target) return;
    }
    if (!std::isfinite(rn)) break;
    if (omega == 0.0) {
      r_hat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
    }
  }
  throw SolverError(SolverError::Kind::NotConverged,
                    "BiCGSTAB did not converge in " + std::to_string(options_.max_iterations) +
                        " iterations (relative residual " + sci(stats_.relative_residual) + ")");
}

std::vector<double> solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options) {
  LinearSolver s(options);
  s.factorize(a);
  return s.solve(b);
}

}  // namespace graffito
