#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace graffito {

/// Axis-aligned rectangle [x_min, x_max] x [y_min, y_max].
struct Rectangle {
  double x_min = -6.0;
  double x_max = 6.0;
  double y_min = -6.0;
  double y_max = 6.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool is_square() const { return x_min == y_min && x_max == y_max; }

  /// Throws std::invalid_argument for degenerate or non-finite rectangles.
  void validate() const;

  bool operator==(const Rectangle&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Cell = std::array<std::size_t, 4>;

/// Uniformly refined tensor-product quadrilateral mesh.
///
/// Level L splits each side into 2^L intervals. Nodes are numbered
/// lexicographically with the x index running fastest; cell c = (cx, cy)
/// lists its nodes counterclockwise starting at the lower-left corner.
class StructuredQuadMesh {
 public:
  StructuredQuadMesh(const Rectangle& domain, int refinement_level);

  const Rectangle& domain() const { return domain_; }
  int refinement_level() const { return level_; }
  std::size_t n_per_side() const { return n_per_side_; }
  std::size_t cells_per_side() const { return n_per_side_ - 1; }
  std::size_t n_nodes() const { return nodes_.size(); }
  std::size_t n_cells() const { return cells_.size(); }
  double hx() const { return hx_; }
  double hy() const { return hy_; }

  std::size_t node_index(std::size_t ix, std::size_t iy) const { return iy * n_per_side_ + ix; }
  std::size_t node_ix(std::size_t node) const { return node % n_per_side_; }
  std::size_t node_iy(std::size_t node) const { return node / n_per_side_; }
  std::size_t cell_index(std::size_t cx, std::size_t cy) const { return cy * cells_per_side() + cx; }

  const Point& node(std::size_t i) const { return nodes_[i]; }
  const Cell& cell(std::size_t c) const { return cells_[c]; }
  std::span<const Point> nodes() const { return nodes_; }
  std::span<const Cell> cells() const { return cells_; }

  /// Cells containing node i together with the local vertex index (0..3) of i
  /// in each. At most four entries; unused slots have cell == n_cells().
  struct Incidence {
    std::size_t cell;
    int local;
  };
  std::array<Incidence, 4> node_cells(std::size_t i) const;
  int node_cell_count(std::size_t i) const;

  double cell_area(std::size_t) const { return hx_ * hy_; }

 private:
  Rectangle domain_;
  int level_;
  std::size_t n_per_side_;
  double hx_;
  double hy_;
  std::vector<Point> nodes_;
  std::vector<Cell> cells_;
};

inline constexpr int kMaxRefinementLevel = 12;

StructuredQuadMesh build_mesh(const Rectangle& domain, int refinement_level);

/// Nodes on the line y = x ordered by increasing coordinate. Requires a square domain.
std::vector<std::size_t> diagonal_nodes(const StructuredQuadMesh& mesh);

/// All nodes other than i sharing a cell with i (the 9-point stencil), ascending.
std::vector<std::size_t> node_neighbors(const StructuredQuadMesh& mesh, std::size_t i);

}  // namespace graffito
