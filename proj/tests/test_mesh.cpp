#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "graffito/mesh.hpp"

using namespace graffito;

TEST_CASE("mesh sizes") {
  const StructuredQuadMesh l5(Rectangle{}, 5);
  CHECK(l5.n_nodes() == 1089);
  CHECK(l5.n_cells() == 1024);
  const StructuredQuadMesh unit(Rectangle{0, 1, 0, 1}, 0);
  CHECK(unit.n_nodes() == 4);
  CHECK(unit.n_cells() == 1);
  const StructuredQuadMesh l3(Rectangle{}, 3);
  CHECK(l3.n_nodes() == 81);
  CHECK(l3.hx() == 1.5);
  CHECK(l3.hy() == 1.5);
}

TEST_CASE("mesh numbering and cells") {
  const StructuredQuadMesh m(Rectangle{}, 2);
  CHECK(m.node(0).x == -6.0);
  CHECK(m.node(0).y == -6.0);
  CHECK(m.node(m.n_nodes() - 1).x == 6.0);
  CHECK(m.node(1).x == -3.0);
  CHECK(m.node(m.node_index(0, 1)).y == -3.0);
  const Cell& c = m.cell(0);
  CHECK(c[0] == 0);
  CHECK(c[1] == 1);
  CHECK(c[2] == m.node_index(1, 1));
  CHECK(c[3] == m.node_index(0, 1));
  double area = 0.0;
  for (std::size_t k = 0; k < m.n_cells(); ++k) area += m.cell_area(k);
  CHECK(std::abs(area - 144.0) <= 1e-12 * 144.0);
}

TEST_CASE("invalid meshes are rejected") {
  CHECK_THROWS(StructuredQuadMesh(Rectangle{0, 0, 0, 1}, 1));
  CHECK_THROWS(StructuredQuadMesh(Rectangle{}, -1));
  CHECK_THROWS(StructuredQuadMesh(Rectangle{}, kMaxRefinementLevel + 1));
}

TEST_CASE("diagonal nodes") {
  const StructuredQuadMesh unit(Rectangle{0, 1, 0, 1}, 0);
  const auto d0 = diagonal_nodes(unit);
  REQUIRE(d0.size() == 2);
  CHECK(d0[0] == unit.node_index(0, 0));
  CHECK(d0[1] == unit.node_index(1, 1));
  const StructuredQuadMesh l1(Rectangle{0, 1, 0, 1}, 1);
  const auto d1 = diagonal_nodes(l1);
  REQUIRE(d1.size() == 3);
  CHECK(l1.node(d1[1]).x == 0.5);
  CHECK(l1.node(d1[1]).y == 0.5);
  const StructuredQuadMesh l5(Rectangle{}, 5);
  const auto d5 = diagonal_nodes(l5);
  REQUIRE(d5.size() == 33);
  CHECK(l5.node(d5[0]).x == -6.0);
  for (const auto i : d5) CHECK(l5.node(i).x == l5.node(i).y);
  CHECK_THROWS(diagonal_nodes(StructuredQuadMesh(Rectangle{0, 2, 0, 1}, 1)));
}

TEST_CASE("neighbor counts") {
  const StructuredQuadMesh m(Rectangle{}, 2);
  CHECK(node_neighbors(m, m.node_index(2, 2)).size() == 8);
  CHECK(node_neighbors(m, 0).size() == 3);
  CHECK(node_neighbors(m, m.node_index(2, 0)).size() == 5);
  const StructuredQuadMesh one(Rectangle{0, 1, 0, 1}, 0);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto nb = node_neighbors(one, i);
    CHECK(nb.size() == 3);
    CHECK(std::find(nb.begin(), nb.end(), i) == nb.end());
  }
}

TEST_CASE("neighbor relation is symmetric up to L = 6") {
  for (int level = 0; level <= 6; ++level) {
    const StructuredQuadMesh m(Rectangle{}, level);
    std::vector<std::vector<std::size_t>> nb(m.n_nodes());
    for (std::size_t i = 0; i < m.n_nodes(); ++i) nb[i] = node_neighbors(m, i);
    bool symmetric = true;
    for (std::size_t i = 0; i < m.n_nodes(); ++i) {
      for (const auto j : nb[i]) symmetric = symmetric && std::binary_search(nb[j].begin(), nb[j].end(), i);
    }
    CHECK(symmetric);
  }
}

TEST_CASE("node to cell incidence") {
  const StructuredQuadMesh m(Rectangle{}, 2);
  CHECK(m.node_cell_count(0) == 1);
  CHECK(m.node_cell_count(m.node_index(2, 2)) == 4);
  for (std::size_t i = 0; i < m.n_nodes(); ++i) {
    for (const auto& inc : m.node_cells(i)) {
      if (inc.cell == m.n_cells()) continue;
      CHECK(m.cell(inc.cell)[inc.local] == i);
    }
  }
}
