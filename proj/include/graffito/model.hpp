#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graffito/mesh.hpp"

namespace graffito {

/// Graffiti spray rate as a function of the spraying gang's density.
enum class RateKind { Saturating, Identity };

std::string_view to_string(RateKind kind);
RateKind rate_kind_from_string(std::string_view name);

/// Inputs in [-kNegativeTolerance, 0) are treated as round-off and clamped to 0.
inline constexpr double kNegativeTolerance = 1e-12;

struct RateFunction {
  RateKind kind = RateKind::Saturating;

  /// s/(1+s) or s. Throws std::domain_error for s < -kNegativeTolerance.
  double operator()(double s) const;
  double derivative(double s) const;

  /// The same formula without clamping or domain checks; the Galerkin scheme
  /// produces negative densities and needs the continuation of the formula.
  double evaluate_extended(double s) const noexcept {
    return kind == RateKind::Saturating ? s / (1.0 + s) : s;
  }

  bool operator==(const RateFunction&) const = default;
};

double evaluate_rate(const RateFunction& r, double s);
double evaluate_rate_derivative(const RateFunction& r, double s);

/// Physical coefficients. u is repelled by w (sprayed by v at rate f(v)); v is
/// repelled by z (sprayed by u at rate g(u)).
struct ModelParams {
  double d_u = 0.25;
  double d_v = 0.25;
  double chi_u = 0.25;
  double chi_v = 0.25;
  RateFunction rate_f{};
  RateFunction rate_g{};

  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

/// Nodal coefficient vectors of the four fields at one time level.
struct StateFields {
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> w;
  std::vector<double> z;
  double t = 0.0;

  std::size_t size() const { return u.size(); }
  static StateFields zeros(std::size_t n, double t = 0.0) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
            std::vector<double>(n, 0.0), t};
  }
  std::array<const std::vector<double>*, 4> fields() const { return {&u, &v, &w, &z}; }
  std::array<std::vector<double>*, 4> fields() { return {&u, &v, &w, &z}; }
};

class InitialCondition {
 public:
  enum class Kind { OffsetGaussians, PureGaussians, Constant, Custom };
  using ScalarField = std::function<double(double, double)>;

  /// u0 = 0.1 + exp(-(x-2)^2-(y-2)^2), v0 mirrored at (-2,-2), w0 = z0 = 0.
  static InitialCondition offset_gaussians();
  /// u0 = exp(-(x-3)^2-(y-3)^2), v0 mirrored at (-3,-3), w0 = z0 = 0.
  static InitialCondition pure_gaussians();
  static InitialCondition constant(double c_u, double c_v);
  static InitialCondition custom(ScalarField u, ScalarField v, ScalarField w, ScalarField z);

  Kind kind() const { return kind_; }
  double c_u() const { return c_u_; }
  double c_v() const { return c_v_; }

  /// (u0, v0, w0, z0) at a point.
  std::array<double, 4> evaluate(double x, double y) const;

  /// Returns a copy whose four fields are multiplied by `factor`.
  InitialCondition scaled(double factor) const;

  /// Nodal interpolant on a mesh at t = 0.
  StateFields interpolate(const StructuredQuadMesh& mesh) const;

 private:
  Kind kind_ = Kind::OffsetGaussians;
  double c_u_ = 0.0;
  double c_v_ = 0.0;
  double scale_ = 1.0;
  ScalarField u_, v_, w_, z_;
};

std::string_view to_string(InitialCondition::Kind kind);

struct Equilibrium {
  double u_bar = 0.0;
  double v_bar = 0.0;
  double w_star = 0.0;
  double z_star = 0.0;
};

/// The constant steady state fixed by the initial spatial averages:
/// (mean u0, mean v0, f(mean v0), g(mean u0)). Means are computed by composite
/// Gauss quadrature independent of any simulation mesh.
Equilibrium homogeneous_equilibrium(const ModelParams& params, const InitialCondition& ic,
                                    const Rectangle& domain);

/// (u, v, w, z) -> (A u, B v, B w, A z) with (chi_u, chi_v) -> (chi_u / B, chi_v / A).
/// Only valid for Identity rates.
std::pair<StateFields, ModelParams> apply_scaling(const StateFields& state, const ModelParams& params,
                                                  double a, double b);

}  // namespace graffito
