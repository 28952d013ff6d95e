#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "graffito/fem.hpp"

using namespace graffito;

namespace {
const Rectangle kUnit{0, 1, 0, 1};

double total(const SparseMatrix& a) {
  double s = 0.0;
  for (const double v : a.values()) s += v;
  return s;
}
}  // namespace

TEST_CASE("element mass matrix on the unit cell") {
  const Q1Space space(StructuredQuadMesh(kUnit, 0));
  const auto m = assemble_mass(space);
  // Nodes 0 (0,0), 1 (1,0), 2 (0,1), 3 (1,1).
  CHECK(m(0, 0) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(m(0, 1) == doctest::Approx(1.0 / 18.0).epsilon(1e-14));
  CHECK(m(0, 2) == doctest::Approx(1.0 / 18.0).epsilon(1e-14));
  CHECK(m(0, 3) == doctest::Approx(1.0 / 36.0).epsilon(1e-14));
  for (const double mi : lump_mass(m)) CHECK(mi == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("mass matrix totals and lumping") {
  const StructuredQuadMesh mesh(Rectangle{}, 3);
  const Q1Space space(mesh);
  const auto m = assemble_mass(space);
  CHECK(std::abs(total(m) - 144.0) < 1e-12 * 144.0);
  const auto ml = lump_mass(m);
  const double h = mesh.hx();
  CHECK(ml[mesh.node_index(4, 4)] == doctest::Approx(h * h).epsilon(1e-14));
  CHECK(ml[0] == doctest::Approx(h * h / 4.0).epsilon(1e-14));
  CHECK(assemble_mass(Q1Space(StructuredQuadMesh(Rectangle{}, 5))).n() == 1089);
}

TEST_CASE("element stiffness matrix on the unit cell") {
  const Q1Space space(StructuredQuadMesh(kUnit, 0));
  const FeFunction zero{&space.mesh(), std::vector<double>(4, 0.0)};
  const auto a = assemble_transport(space, 1.0, 0.0, zero);
  CHECK(a(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(a(0, 1) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  CHECK(a(0, 2) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  CHECK(a(0, 3) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("convection by a constant field vanishes") {
  const Q1Space space(StructuredQuadMesh(Rectangle{}, 2));
  const FeFunction c{&space.mesh(), std::vector<double>(space.n_dofs(), 0.7)};
  const auto a = assemble_transport(space, 0.25, 3.0, c);
  const auto k = assemble_stiffness(space);
  for (std::size_t q = 0; q < a.values().size(); ++q) {
    CHECK(std::abs(a.values()[q] - 0.25 * k.values()[q]) < 1e-14);
  }
}

TEST_CASE("transport columns sum to zero") {
  const Q1Space space(StructuredQuadMesh(Rectangle{}, 3));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    FeFunction s{&space.mesh(), std::vector<double>(space.n_dofs())};
    for (auto& x : s.coefficients) x = uni(rng);
    const auto a = assemble_transport(space, 0.25, 3.0, s);
    double worst = 0.0;
    for (const double c : column_sums(a)) worst = std::max(worst, std::abs(c));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("Laplacian patch test") {
  const StructuredQuadMesh mesh(Rectangle{}, 3);
  const Q1Space space(mesh);
  const auto k = assemble_stiffness(space);
  std::vector<double> lin(space.n_dofs());
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = 0.3 * mesh.node(i).x - 1.2 * mesh.node(i).y + 2.0;
  const auto r = matvec(k, lin);
  const std::size_t n = mesh.n_per_side();
  for (std::size_t iy = 1; iy + 1 < n; ++iy) {
    for (std::size_t ix = 1; ix + 1 < n; ++ix) CHECK(std::abs(r[mesh.node_index(ix, iy)]) < 1e-12);
  }
}

TEST_CASE("rate loads") {
  const Q1Space unit(StructuredQuadMesh(kUnit, 0));
  const RateFunction sat{RateKind::Saturating};
  const FeFunction zero{&unit.mesh(), std::vector<double>(4, 0.0)};
  for (const double g : assemble_rate_load(unit, sat, zero)) CHECK(g == 0.0);
  const FeFunction one{&unit.mesh(), std::vector<double>(4, 1.0)};
  for (const double g : assemble_rate_load(unit, sat, one)) CHECK(g == doctest::Approx(0.125).epsilon(1e-14));

  const Q1Space space(StructuredQuadMesh(Rectangle{}, 3));
  const auto m = assemble_mass(space);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  FeFunction f{&space.mesh(), std::vector<double>(space.n_dofs())};
  for (auto& x : f.coefficients) x = uni(rng);
  const auto g = assemble_rate_load(space, RateFunction{RateKind::Identity}, f);
  const auto mf = matvec(m, f.coefficients);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(g[i] - mf[i]) < 1e-12);
}

TEST_CASE("rate load evaluation modes") {
  const Q1Space unit(StructuredQuadMesh(kUnit, 0));
  const RateFunction sat{RateKind::Saturating};
  const FeFunction neg{&unit.mesh(), {-0.5, 0.2, 0.2, 0.2}};
  CHECK_THROWS_AS(assemble_rate_load(unit, sat, neg, RateEvaluation::Checked), std::domain_error);
  CHECK_NOTHROW(assemble_rate_load(unit, sat, neg, RateEvaluation::Clamped));
  const auto ext = assemble_rate_load(unit, sat, neg, RateEvaluation::Extended);
  const auto clamp = assemble_rate_load(unit, sat, neg, RateEvaluation::Clamped);
  CHECK(ext[0] < clamp[0]);
}

TEST_CASE("gradients at quadrature points") {
  const StructuredQuadMesh unit(kUnit, 0);
  FeFunction x{&unit, {0, 1, 0, 1}};
  const auto gx = evaluate_gradient_at_quad(unit, x, 0, {0.3, -0.6});
  CHECK(gx[0] == doctest::Approx(1.0));
  CHECK(gx[1] == doctest::Approx(0.0));
  FeFunction c{&unit, {2, 2, 2, 2}};
  const auto gc = evaluate_gradient_at_quad(unit, c, 0, {0.5, 0.5});
  CHECK(gc[0] == 0.0);
  CHECK(gc[1] == 0.0);
  FeFunction xy{&unit, {0, 0, 0, 1}};
  const auto g = evaluate_gradient_at_quad(unit, xy, 0, {0.0, 0.0});
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == doctest::Approx(0.5));
}

TEST_CASE("quadrature rule") {
  const auto q = QuadratureRule::gauss(2);
  CHECK(q.size() == 4);
  double w = 0.0;
  for (const double x : q.weights) w += x;
  CHECK(w == doctest::Approx(4.0));
}
