#include "graffito/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "graffito/kernels.hpp"

namespace graffito {

PatternPtr SparsityPattern::from_rows(const std::vector<std::vector<std::size_t>>& rows, bool symmetrize) {
  const std::size_t n = rows.size();
  std::vector<std::vector<std::size_t>> cols(n);
  for (std::size_t i = 0; i < n; ++i) {
    cols[i] = rows[i];
    cols[i].push_back(i);
    for (const std::size_t j : rows[i]) {
      if (j >= n) throw std::out_of_range("column index " + std::to_string(j) + " out of range");
    }
  }
  if (symmetrize) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const std::size_t j : rows[i]) cols[j].push_back(i);
    }
  }
  for (auto& c : cols) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }

  std::shared_ptr<SparsityPattern> p(new SparsityPattern());
  p->n_ = n;
  p->offsets_.resize(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) p->offsets_[i + 1] = p->offsets_[i] + cols[i].size();
  p->cols_.reserve(p->offsets_[n]);
  p->rows_.reserve(p->offsets_[n]);
  for (std::size_t i = 0; i < n; ++i) {
    for (const std::size_t j : cols[i]) {
      p->cols_.push_back(j);
      p->rows_.push_back(i);
      p->bandwidth_ = std::max(p->bandwidth_, i > j ? i - j : j - i);
    }
  }

  p->diag_.resize(n);
  for (std::size_t i = 0; i < n; ++i) p->diag_[i] = p->find(i, i);

  p->transpose_.resize(p->nnz());
  p->entry_edge_.assign(p->nnz(), npos);
  for (std::size_t k = 0; k < p->nnz(); ++k) {
    const std::size_t t = p->find(p->cols_[k], p->rows_[k]);
    if (t == npos) {
      throw std::invalid_argument("sparsity pattern is not structurally symmetric at (" +
                                  std::to_string(p->rows_[k]) + ", " + std::to_string(p->cols_[k]) + ")");
    }
    p->transpose_[k] = t;
  }
  for (std::size_t k = 0; k < p->nnz(); ++k) {
    const std::size_t i = p->rows_[k];
    const std::size_t j = p->cols_[k];
    if (i < j) {
      const std::size_t e = p->edge_lo_.size();
      p->edge_lo_.push_back(i);
      p->edge_hi_.push_back(j);
      p->edge_upper_.push_back(k);
      p->entry_edge_[k] = e;
      p->entry_edge_[p->transpose_[k]] = e;
    }
  }
  return p;
}

std::size_t SparsityPattern::find(std::size_t i, std::size_t j) const {
  if (i >= n_) return npos;
  const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return npos;
  return static_cast<std::size_t>(it - cols_.begin());
}

// ---------------------------------------------------------------------------

SparseMatrix::SparseMatrix(PatternPtr pattern) : pattern_(std::move(pattern)) {
  if (!pattern_) throw std::invalid_argument("null sparsity pattern");
  values_.assign(pattern_->nnz(), 0.0);
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<double>>& dense) {
  const std::size_t n = dense.size();
  std::vector<std::vector<std::size_t>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (dense[i].size() != n) throw std::invalid_argument("dense matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (dense[i][j] != 0.0) rows[i].push_back(j);
    }
  }
  SparseMatrix m(SparsityPattern::from_rows(rows, true));
  for (std::size_t k = 0; k < m.pattern().nnz(); ++k) {
    m.values_[k] = dense[m.pattern().row_of(k)][m.pattern().col(k)];
  }
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(SparsityPattern::from_rows(std::vector<std::vector<std::size_t>>(n)));
  std::fill(m.values_.begin(), m.values_.end(), 1.0);
  return m;
}

double SparseMatrix::operator()(std::size_t i, std::size_t j) const {
  const std::size_t k = pattern_->find(i, j);
  return k == npos ? 0.0 : values_[k];
}

double& SparseMatrix::at(std::size_t i, std::size_t j) {
  const std::size_t k = pattern_->find(i, j);
  if (k == npos) {
    throw std::out_of_range("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") not in pattern");
  }
  return values_[k];
}

void SparseMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

SparseMatrix& SparseMatrix::add(double alpha, const SparseMatrix& other) {
  if (other.pattern_ != pattern_) throw std::invalid_argument("matrix addition requires a shared pattern");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * other.values_[k];
  return *this;
}

SparseMatrix& SparseMatrix::scale(double alpha) {
  for (double& v : values_) v *= alpha;
  return *this;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (const double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool SparseMatrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<std::vector<double>> SparseMatrix::to_dense() const {
  std::vector<std::vector<double>> d(n(), std::vector<double>(n(), 0.0));
  for (std::size_t k = 0; k < values_.size(); ++k) d[pattern_->row_of(k)][pattern_->col(k)] = values_[k];
  return d;
}

// ---------------------------------------------------------------------------

void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.n() || y.size() != a.n()) {
    throw std::invalid_argument("matvec dimension mismatch: matrix " + std::to_string(a.n()) + ", x " +
                                std::to_string(x.size()) + ", y " + std::to_string(y.size()));
  }
  kernels::parallel::spmv(a.pattern(), a.values(), x, y);
}

std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.n());
  matvec(a, x, y);
  return y;
}

double row_sum(const SparseMatrix& a, std::size_t i) {
  if (i >= a.n()) throw std::out_of_range("row index " + std::to_string(i) + " out of range");
  double s = 0.0;
  const auto& p = a.pattern();
  for (std::size_t k = p.row_begin(i); k < p.row_end(i); ++k) s += a.values()[k];
  return s;
}

std::vector<double> row_sums(const SparseMatrix& a) {
  std::vector<double> s(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) s[i] = row_sum(a, i);
  return s;
}

std::vector<double> column_sums(const SparseMatrix& a) {
  std::vector<double> s(a.n(), 0.0);
  const auto& p = a.pattern();
  for (std::size_t k = 0; k < p.nnz(); ++k) s[p.col(k)] += a.values()[k];
  return s;
}

bool is_z_matrix(const SparseMatrix& a, double tol) {
  const auto& p = a.pattern();
  for (std::size_t k = 0; k < p.nnz(); ++k) {
    if (p.row_of(k) != p.col(k) && a.values()[k] > tol) return false;
  }
  return true;
}

bool is_diagonally_dominant(const SparseMatrix& a, bool strict) {
  const auto& p = a.pattern();
  for (std::size_t i = 0; i < a.n(); ++i) {
    double off = 0.0;
    for (std::size_t k = p.row_begin(i); k < p.row_end(i); ++k) {
      if (p.col(k) != i) off += std::abs(a.values()[k]);
    }
    const double diag = std::abs(a.diagonal(i));
    if (strict ? !(diag > off) : !(diag >= off)) return false;
  }
  return true;
}

void write_coordinate(const SparseMatrix& a, std::ostream& out) {
  const auto& p = a.pattern();
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < p.nnz(); ++k) {
    out << p.row_of(k) << ' ' << p.col(k) << ' ' << a.values()[k] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace graffito
