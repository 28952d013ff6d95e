#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "graffito/model.hpp"

using namespace graffito;

TEST_CASE("rate functions at sample points") {
  const RateFunction sat{RateKind::Saturating};
  const RateFunction id{RateKind::Identity};
  CHECK(evaluate_rate(sat, 0.0) == 0.0);
  CHECK(evaluate_rate(sat, 1.0) == doctest::Approx(0.5));
  CHECK(evaluate_rate(id, 0.25) == 0.25);
  CHECK(evaluate_rate_derivative(sat, 0.0) == doctest::Approx(1.0));
  CHECK(evaluate_rate_derivative(sat, 1.0) == doctest::Approx(0.25));
  CHECK(evaluate_rate_derivative(id, 7.0) == 1.0);
}

TEST_CASE("rate functions are monotone and match finite differences") {
  for (const RateKind kind : {RateKind::Saturating, RateKind::Identity}) {
    const RateFunction r{kind};
    CHECK(r(0.0) == 0.0);
    double prev = r(0.0);
    for (int k = 1; k <= 1000; ++k) {
      const double s = 100.0 * k / 1000.0;
      const double val = r(s);
      CHECK(val >= prev);
      prev = val;
      const double h = 1e-5 * std::max(1.0, s);
      const double fd = (r(s + h) - r(s - h)) / (2.0 * h);
      CHECK(std::abs(fd - r.derivative(s)) <= 1e-6 * std::abs(r.derivative(s)));
    }
  }
}

TEST_CASE("rate functions clamp round-off and reject negative input") {
  const RateFunction sat{RateKind::Saturating};
  CHECK(sat(-1e-13) == 0.0);
  CHECK_THROWS_AS(sat(-1e-6), std::domain_error);
  CHECK(sat.evaluate_extended(-0.5) == doctest::Approx(-1.0));
  CHECK(rate_kind_from_string("identity") == RateKind::Identity);
  CHECK(to_string(RateKind::Saturating) == "saturating");
  CHECK_THROWS(rate_kind_from_string("cubic"));
}

TEST_CASE("model parameters are validated") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.d_u = -1.0;
  CHECK_THROWS(p.validate());
}

TEST_CASE("homogeneous equilibrium of the offset Gaussians") {
  const ModelParams p;
  const auto eq = homogeneous_equilibrium(p, InitialCondition::offset_gaussians(), Rectangle{});
  CHECK(eq.u_bar == doctest::Approx(0.121817).epsilon(1e-5));
  CHECK(eq.v_bar == doctest::Approx(eq.u_bar).epsilon(1e-12));
  CHECK(eq.w_star == doctest::Approx(0.108588).epsilon(1e-5));
  CHECK(eq.z_star == doctest::Approx(0.108588).epsilon(1e-5));
  CHECK(std::abs(eq.u_bar - (0.1 + std::numbers::pi / 144.0)) < 1e-8);
}

TEST_CASE("homogeneous equilibrium of constant data is exact") {
  const ModelParams p;
  const auto eq = homogeneous_equilibrium(p, InitialCondition::constant(0.3, 0.3), Rectangle{0, 2, 0, 3});
  CHECK(eq.u_bar == 0.3);
  CHECK(eq.v_bar == 0.3);
  CHECK(eq.w_star == p.rate_f(0.3));
  CHECK(eq.z_star == p.rate_g(0.3));
  CHECK(eq.w_star == doctest::Approx(0.3 / 1.3));
}

TEST_CASE("initial conditions") {
  const auto ic = InitialCondition::offset_gaussians();
  const auto at0 = ic.evaluate(0.0, 0.0);
  CHECK(at0[0] == doctest::Approx(0.1 + std::exp(-8.0)));
  CHECK(at0[2] == 0.0);
  const auto peak = ic.evaluate(-2.0, -2.0);
  CHECK(peak[1] == doctest::Approx(1.1));
  const auto pure = InitialCondition::pure_gaussians().evaluate(3.0, 3.0);
  CHECK(pure[0] == doctest::Approx(1.0));
  CHECK(pure[1] == doctest::Approx(std::exp(-72.0)));
  const auto scaled = ic.scaled(1e-3).evaluate(2.0, 2.0);
  CHECK(scaled[0] == doctest::Approx(1.1e-3));
  const StructuredQuadMesh mesh(Rectangle{}, 2);
  const auto s = ic.interpolate(mesh);
  CHECK(s.size() == mesh.n_nodes());
  CHECK(s.t == 0.0);
}

TEST_CASE("scaling symmetry maps") {
  ModelParams p;
  p.rate_f = p.rate_g = RateFunction{RateKind::Identity};
  p.chi_u = p.chi_v = 3.0;
  StateFields s = StateFields::zeros(3);
  for (std::size_t i = 0; i < 3; ++i) {
    s.u[i] = 1.0 + i;
    s.v[i] = 2.0 + i;
    s.w[i] = 0.5 * i;
    s.z[i] = 0.25 * i;
  }
  SUBCASE("identity") {
    const auto [t, q] = apply_scaling(s, p, 1.0, 1.0);
    CHECK(t.u == s.u);
    CHECK(t.z == s.z);
    CHECK(q == p);
  }
  SUBCASE("A = 2, B = 1") {
    const auto [t, q] = apply_scaling(s, p, 2.0, 1.0);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(t.u[i] == 2.0 * s.u[i]);
      CHECK(t.v[i] == s.v[i]);
      CHECK(t.w[i] == s.w[i]);
      CHECK(t.z[i] == 2.0 * s.z[i]);
    }
    CHECK(q.chi_u == 3.0);
    CHECK(q.chi_v == 1.5);
  }
  SUBCASE("A = 1, B = 0.5") {
    ModelParams p4 = p;
    p4.chi_u = 4.0;
    CHECK(apply_scaling(s, p4, 1.0, 0.5).second.chi_u == 8.0);
  }
  SUBCASE("inverse") {
    const auto [t, q] = apply_scaling(s, p, 2.0, 0.5);
    const auto [r, back] = apply_scaling(t, q, 0.5, 2.0);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(r.u[i] - s.u[i]) <= 1e-15 * std::abs(s.u[i]));
      CHECK(std::abs(r.v[i] - s.v[i]) <= 1e-15 * std::abs(s.v[i]));
    }
    CHECK(back.chi_u == doctest::Approx(p.chi_u).epsilon(1e-15));
  }
  SUBCASE("saturating rates are rejected") {
    CHECK_THROWS(apply_scaling(s, ModelParams{}, 2.0, 0.5));
  }
}
