#include "graffito/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace graffito {

void Rectangle::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
      !std::isfinite(y_max)) {
    throw std::invalid_argument("rectangle has non-finite coordinates");
  }
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw std::invalid_argument("degenerate rectangle: require x_min < x_max and y_min < y_max");
  }
}

StructuredQuadMesh::StructuredQuadMesh(const Rectangle& domain, int refinement_level)
    : domain_(domain), level_(refinement_level) {
  domain_.validate();
  if (refinement_level < 0 || refinement_level > kMaxRefinementLevel) {
    throw std::invalid_argument("refinement level must lie in [0, " +
                                std::to_string(kMaxRefinementLevel) + "], got " +
                                std::to_string(refinement_level));
  }
  const std::size_t intervals = std::size_t{1} << refinement_level;
  n_per_side_ = intervals + 1;
  hx_ = domain_.width() / static_cast<double>(intervals);
  hy_ = domain_.height() / static_cast<double>(intervals);

  nodes_.resize(n_per_side_ * n_per_side_);
  for (std::size_t iy = 0; iy < n_per_side_; ++iy) {
    // The last row/column is pinned to the exact boundary coordinate.
    const double y = iy == intervals ? domain_.y_max : domain_.y_min + static_cast<double>(iy) * hy_;
    for (std::size_t ix = 0; ix < n_per_side_; ++ix) {
      const double x =
          ix == intervals ? domain_.x_max : domain_.x_min + static_cast<double>(ix) * hx_;
      nodes_[node_index(ix, iy)] = {x, y};
    }
  }

  cells_.resize(intervals * intervals);
  for (std::size_t cy = 0; cy < intervals; ++cy) {
    for (std::size_t cx = 0; cx < intervals; ++cx) {
      cells_[cell_index(cx, cy)] = {node_index(cx, cy), node_index(cx + 1, cy),
                                    node_index(cx + 1, cy + 1), node_index(cx, cy + 1)};
    }
  }
}

std::array<StructuredQuadMesh::Incidence, 4> StructuredQuadMesh::node_cells(std::size_t i) const {
  std::array<Incidence, 4> out;
  out.fill({n_cells(), -1});
  const std::size_t ix = node_ix(i);
  const std::size_t iy = node_iy(i);
  const std::size_t nc = cells_per_side();
  int slot = 0;
  // Local vertex of node (ix, iy) in cell (cx, cy): 0 = (cx, cy), 1 = (cx+1, cy),
  // 2 = (cx+1, cy+1), 3 = (cx, cy+1).
  if (ix > 0 && iy > 0) out[slot++] = {cell_index(ix - 1, iy - 1), 2};
  if (ix < nc && iy > 0) out[slot++] = {cell_index(ix, iy - 1), 3};
  if (ix > 0 && iy < nc) out[slot++] = {cell_index(ix - 1, iy), 1};
  if (ix < nc && iy < nc) out[slot++] = {cell_index(ix, iy), 0};
  return out;
}

int StructuredQuadMesh::node_cell_count(std::size_t i) const {
  const std::size_t ix = node_ix(i);
  const std::size_t iy = node_iy(i);
  const std::size_t nc = cells_per_side();
  const int cx = (ix > 0 ? 1 : 0) + (ix < nc ? 1 : 0);
  const int cy = (iy > 0 ? 1 : 0) + (iy < nc ? 1 : 0);
  return cx * cy;
}

StructuredQuadMesh build_mesh(const Rectangle& domain, int refinement_level) {
  return StructuredQuadMesh(domain, refinement_level);
}

std::vector<std::size_t> diagonal_nodes(const StructuredQuadMesh& mesh) {
  if (!mesh.domain().is_square()) {
    throw std::invalid_argument("diagonal_nodes requires a square domain with x_min = y_min and x_max = y_max");
  }
  std::vector<std::size_t> out(mesh.n_per_side());
  for (std::size_t k = 0; k < mesh.n_per_side(); ++k) out[k] = mesh.node_index(k, k);
  return out;
}

std::vector<std::size_t> node_neighbors(const StructuredQuadMesh& mesh, std::size_t i) {
  if (i >= mesh.n_nodes()) {
    throw std::out_of_range("node index " + std::to_string(i) + " out of range");
  }
  const auto n = static_cast<long>(mesh.n_per_side());
  const auto ix = static_cast<long>(mesh.node_ix(i));
  const auto iy = static_cast<long>(mesh.node_iy(i));
  std::vector<std::size_t> out;
  out.reserve(8);
  for (long dy = -1; dy <= 1; ++dy) {
    for (long dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const long jx = ix + dx;
      const long jy = iy + dy;
      if (jx < 0 || jy < 0 || jx >= n || jy >= n) continue;
      out.push_back(mesh.node_index(static_cast<std::size_t>(jx), static_cast<std::size_t>(jy)));
    }
  }
  return out;
}

}  // namespace graffito
