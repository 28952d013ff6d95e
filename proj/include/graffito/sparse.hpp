#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace graffito {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Structurally symmetric CSR pattern with every diagonal entry present.
///
/// Besides the CSR arrays it indexes each unordered off-diagonal pair {i, j},
/// i < j, as an "edge"; edge-based quantities (fluxes, limiter coefficients)
/// are stored once per edge and read back with a sign for the reverse direction.
class SparsityPattern {
 public:
  /// Builds from per-row column lists. Missing diagonal entries are added;
  /// with `symmetrize`, the transpose structure is merged in, otherwise an
  /// asymmetric structure is rejected.
  static std::shared_ptr<const SparsityPattern> from_rows(
      const std::vector<std::vector<std::size_t>>& rows, bool symmetrize = false);

  std::size_t n() const { return n_; }
  std::size_t nnz() const { return cols_.size(); }
  std::size_t row_begin(std::size_t i) const { return offsets_[i]; }
  std::size_t row_end(std::size_t i) const { return offsets_[i + 1]; }
  std::size_t col(std::size_t k) const { return cols_[k]; }
  std::size_t row_of(std::size_t k) const { return rows_[k]; }
  std::span<const std::size_t> row_offsets() const { return offsets_; }
  std::span<const std::size_t> column_indices() const { return cols_; }

  std::size_t diagonal_position(std::size_t i) const { return diag_[i]; }
  /// Position of (j, i) given the position of (i, j).
  std::size_t transpose_position(std::size_t k) const { return transpose_[k]; }
  /// Position of (i, j) or npos.
  std::size_t find(std::size_t i, std::size_t j) const;

  std::size_t n_edges() const { return edge_lo_.size(); }
  std::size_t edge_lo(std::size_t e) const { return edge_lo_[e]; }
  std::size_t edge_hi(std::size_t e) const { return edge_hi_[e]; }
  /// Position of (lo, hi) and (hi, lo) respectively.
  std::size_t edge_upper(std::size_t e) const { return edge_upper_[e]; }
  std::size_t edge_lower(std::size_t e) const { return transpose_[edge_upper_[e]]; }
  /// Edge of an off-diagonal entry, npos on the diagonal.
  std::size_t entry_edge(std::size_t k) const { return entry_edge_[k]; }

  /// Maximum |i - j| over stored entries.
  std::size_t bandwidth() const { return bandwidth_; }

 private:
  SparsityPattern() = default;

  std::size_t n_ = 0;
  std::size_t bandwidth_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> cols_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> diag_;
  std::vector<std::size_t> transpose_;
  std::vector<std::size_t> edge_lo_;
  std::vector<std::size_t> edge_hi_;
  std::vector<std::size_t> edge_upper_;
  std::vector<std::size_t> entry_edge_;
};

using PatternPtr = std::shared_ptr<const SparsityPattern>;

/// Values over a shared, immutable pattern.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(PatternPtr pattern);

  /// Dense input; stored structure is the symmetric closure of the nonzeros plus the diagonal.
  static SparseMatrix from_dense(const std::vector<std::vector<double>>& dense);
  static SparseMatrix identity(std::size_t n);

  const SparsityPattern& pattern() const { return *pattern_; }
  const PatternPtr& pattern_ptr() const { return pattern_; }
  std::size_t n() const { return pattern_ ? pattern_->n() : 0; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Entry (i, j); zero when not stored.
  double operator()(std::size_t i, std::size_t j) const;
  /// Reference to a stored entry; throws std::out_of_range if (i, j) is not in the pattern.
  double& at(std::size_t i, std::size_t j);
  double diagonal(std::size_t i) const { return values_[pattern_->diagonal_position(i)]; }

  void set_zero();
  /// this += alpha * other (same pattern object required).
  SparseMatrix& add(double alpha, const SparseMatrix& other);
  SparseMatrix& scale(double alpha);
  double max_abs() const;
  bool all_finite() const;

  std::vector<std::vector<double>> to_dense() const;

 private:
  PatternPtr pattern_;
  std::vector<double> values_;
};

/// y = A x.
std::vector<double> matvec(const SparseMatrix& a, std::span<const double> x);
void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

double row_sum(const SparseMatrix& a, std::size_t i);
std::vector<double> row_sums(const SparseMatrix& a);
std::vector<double> column_sums(const SparseMatrix& a);

/// All stored off-diagonal entries <= tol.
bool is_z_matrix(const SparseMatrix& a, double tol = 1e-14);

/// Row-wise diagonal dominance |a_ii| >= sum_{j != i} |a_ij| (strict: > in every row).
bool is_diagonally_dominant(const SparseMatrix& a, bool strict = false);

/// Coordinate text dump: one "row col value" line per stored entry, 0-based.
void write_coordinate(const SparseMatrix& a, std::ostream& out);

}  // namespace graffito
