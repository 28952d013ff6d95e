#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "graffito/diagnostics.hpp"
#include "graffito/fem.hpp"

using namespace graffito;

namespace {

struct Ops {
  StructuredQuadMesh mesh;
  Q1Space space{mesh};
  SparseMatrix mass = assemble_mass(space);
  SparseMatrix stiffness = assemble_stiffness(space);
  std::vector<double> lumped = lump_mass(mass);
  explicit Ops(int level) : mesh(Rectangle{}, level) {}
};

StateFields constant_state(std::size_t n, double u, double v, double w, double z, double t = 0.0) {
  StateFields s = StateFields::zeros(n, t);
  std::fill(s.u.begin(), s.u.end(), u);
  std::fill(s.v.begin(), s.v.end(), v);
  std::fill(s.w.begin(), s.w.end(), w);
  std::fill(s.z.begin(), s.z.end(), z);
  return s;
}

}  // namespace

TEST_CASE("total mass") {
  const Ops ops(3);
  const auto one = constant_state(ops.mesh.n_nodes(), 1.0, 0.0, 0.0, 0.0);
  CHECK(total_mass(one, ops.mass).u == doctest::Approx(144.0).epsilon(1e-14));
  CHECK(total_mass(one, ops.lumped).u == doctest::Approx(144.0).epsilon(1e-14));
  CHECK(total_mass(one, ops.mass).v == 0.0);
  const Ops l5(5);
  const auto ic = InitialCondition::offset_gaussians().interpolate(l5.mesh);
  CHECK(std::abs(total_mass(ic, l5.mass).u - 17.5417) < 1e-3);
}

TEST_CASE("extrema") {
  StateFields s = constant_state(3, 1.0, 2.0, 3.0, 4.0);
  s.w[1] = -0.5;
  const auto e = extrema(s);
  CHECK(e.min[2] == -0.5);
  CHECK(e.max[3] == 4.0);
  CHECK(e.overall_min() == -0.5);
}

TEST_CASE("classification cutoff") {
  StateFields s = StateFields::zeros(4);
  s.u = {0.1 + 5e-7, 0.1 + 1e-3, 0.1, 0.1};
  s.v = {0.1, 0.1, 0.1 + 2e-6, 0.1};
  s.z = {0.0, 0.0, 0.0, 0.0};
  s.w = {0.0, 0.0, 0.0, 2e-6};
  const auto g = classify(s);
  CHECK(g.gang_class[0] == GangClass::PurpleTie);
  CHECK(g.gang_class[1] == GangClass::RedU);
  CHECK(g.gang_class[2] == GangClass::BlueV);
  CHECK(g.graffiti_class[3] == GraffitiClass::LightBlueW);
  CHECK(g.graffiti_class[0] == GraffitiClass::LightPurpleTie);
  CHECK(g.count(GangClass::PurpleTie) == 2);
  CHECK(static_cast<int>(GangClass::RedU) == 1);
  CHECK(static_cast<int>(GraffitiClass::OrangeZ) == 1);
}

TEST_CASE("classification ignores a common shift") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  StateFields s = StateFields::zeros(50);
  for (std::size_t i = 0; i < 50; ++i) {
    s.u[i] = uni(rng);
    s.v[i] = uni(rng);
  }
  StateFields t = s;
  for (std::size_t i = 0; i < 50; ++i) {
    t.u[i] += 0.25;
    t.v[i] += 0.25;
  }
  CHECK(classify(s).gang_class == classify(t).gang_class);
}

TEST_CASE("diagonal snapshots") {
  const StructuredQuadMesh unit(Rectangle{0, 1, 0, 1}, 0);
  const auto c = diagonal_snapshot(constant_state(4, 0.3, 0.3, 0.3, 0.3), unit);
  REQUIRE(c.size() == 2);
  CHECK(c[1].u == 0.3);
  CHECK(c[1].z == 0.3);
  const StructuredQuadMesh l5(Rectangle{}, 5);
  const auto d = diagonal_snapshot(InitialCondition::offset_gaussians().interpolate(l5), l5);
  REQUIRE(d.size() == 33);
  CHECK(d.front().s == 0.0);
  CHECK(d.back().s == doctest::Approx(12.0 * std::sqrt(2.0)).epsilon(1e-14));
  for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k].s > d[k - 1].s);
  CHECK(d[16].u == doctest::Approx(0.1 + std::exp(-8.0)).epsilon(1e-12));
}

TEST_CASE("diagonal distances") {
  const StructuredQuadMesh m3(Rectangle{}, 3), m4(Rectangle{}, 4);
  const auto ic = InitialCondition::offset_gaussians();
  const auto a = diagonal_snapshot(ic.interpolate(m3), m3);
  const auto b = diagonal_snapshot(ic.interpolate(m4), m4);
  CHECK(diagonal_l2_difference(a, a) == 0.0);
  CHECK(diagonal_l2_difference(a, b) == doctest::Approx(0.0).epsilon(1e-14));
  auto c = a;
  for (auto& r : c) r.u += 0.1;
  const double ds = a[1].s - a[0].s;
  CHECK(diagonal_l2_difference(a, c) == doctest::Approx(0.1 * std::sqrt(ds * a.size())));
  const StructuredQuadMesh m(Rectangle{}, 2);
  auto odd = diagonal_snapshot(ic.interpolate(m), m);
  odd.pop_back();
  CHECK_THROWS(diagonal_l2_difference(odd, b));
}

TEST_CASE("Lyapunov functional") {
  const Ops ops(3);
  const Equilibrium eq{0.2, 0.3, 0.3 / 1.3, 0.2 / 1.2};
  const std::size_t n = ops.mesh.n_nodes();
  const auto at_eq = constant_state(n, eq.u_bar, eq.v_bar, eq.w_star, eq.z_star);
  CHECK(lyapunov(at_eq, eq, ops.mass, ops.stiffness).y == doctest::Approx(0.0));
  const double eps = 0.01, c = 2.5;
  const auto bumped = constant_state(n, eq.u_bar + eps, eq.v_bar, eq.w_star, eq.z_star);
  CHECK(lyapunov(bumped, eq, ops.mass, ops.stiffness, c).y == doctest::Approx(0.5 * c * eps * eps * 144.0));
  CHECK_THROWS(lyapunov(bumped, eq, ops.mass, ops.stiffness, 0.0));
}

TEST_CASE("Lyapunov functional is symmetric under relabeling") {
  const Ops ops(3);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const std::size_t n = ops.mesh.n_nodes();
  StateFields s = StateFields::zeros(n);
  for (auto* f : s.fields()) {
    for (auto& x : *f) x = uni(rng);
  }
  const Equilibrium eq{0.4, 0.6, 0.6 / 1.6, 0.4 / 1.4};
  StateFields r = s;
  std::swap(r.u, r.v);
  std::swap(r.w, r.z);
  const Equilibrium mirrored{eq.v_bar, eq.u_bar, eq.z_star, eq.w_star};
  CHECK(lyapunov(s, eq, ops.mass, ops.stiffness).y ==
        doctest::Approx(lyapunov(r, mirrored, ops.mass, ops.stiffness).y).epsilon(1e-13));
}

TEST_CASE("steady-state detector") {
  const Equilibrium eq{0.5, 0.5, 0.5 / 1.5, 0.5 / 1.5};
  SUBCASE("constant run converges at the first full window") {
    std::vector<StateFields> hist;
    for (int t = 0; t <= 150; ++t) hist.push_back(constant_state(4, 0.5, 0.5, eq.w_star, eq.z_star, t));
    const auto r = detect_steady_state(hist, eq);
    CHECK(r.converged);
    CHECK(r.stationary);
    CHECK(r.t_detect == 100.0);
    CHECK(r.max_deviation < 1e-12);
  }
  SUBCASE("a stationary nonconstant pattern is not converged") {
    std::vector<StateFields> hist;
    for (int t = 0; t <= 150; ++t) {
      auto s = constant_state(4, 0.5, 0.5, eq.w_star, eq.z_star, t);
      s.u[0] = 0.9;
      s.v[0] = 0.1;
      hist.push_back(s);
    }
    const auto r = detect_steady_state(hist, eq);
    CHECK(r.stationary);
    CHECK_FALSE(r.converged);
    CHECK(r.candidate.u[0] == 0.9);
    CHECK(r.max_deviation == doctest::Approx(0.4));
  }
  SUBCASE("a decaying run is detected once the change falls below the threshold") {
    SteadyStateDetector det(eq);
    for (int t = 0; t <= 400; ++t) {
      const double d = std::exp(-0.1 * t);
      det.push(constant_state(4, 0.5 + d, 0.5 - d, eq.w_star, eq.z_star, t));
    }
    const auto& r = det.report();
    CHECK(r.converged);
    CHECK(r.t_detect > 100.0);
    CHECK(r.t_detect < 300.0);
    CHECK(det.n_samples() == 401);
    CHECK(det.first_time() == 0.0);
  }
  SUBCASE("insufficient history") {
    std::vector<StateFields> hist{constant_state(4, 0.5, 0.5, 0.0, 0.0, 0.0)};
    CHECK_THROWS_AS(detect_steady_state(hist, eq), std::invalid_argument);
    hist.push_back(constant_state(4, 0.5, 0.5, 0.0, 0.0, 50.0));
    CHECK_THROWS_AS(detect_steady_state(hist, eq), std::invalid_argument);
  }
}

TEST_CASE("overlap measure") {
  const Ops ops(5);
  const std::size_t n = ops.mesh.n_nodes();
  StateFields s = StateFields::zeros(n);
  for (std::size_t i = 0; i < n; ++i) (i % 2 == 0 ? s.u : s.v)[i] = 1.0;
  CHECK(overlap_measure(s, ops.lumped) == doctest::Approx(0.0).epsilon(1e-12));
  const auto g = InitialCondition::offset_gaussians().interpolate(ops.mesh);
  StateFields same = g;
  same.v = same.u;
  CHECK(overlap_measure(same, ops.lumped) == doctest::Approx(total_mass(same, ops.lumped).u).epsilon(1e-14));
  const auto pure = InitialCondition::pure_gaussians().interpolate(ops.mesh);
  CHECK(overlap_measure(pure, ops.lumped) <= 1e-8);
  const auto m = total_mass(g, ops.lumped);
  CHECK(overlap_measure(g, ops.lumped) <= std::min(m.u, m.v));
}
