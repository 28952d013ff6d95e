#include "graffito/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace graffito {

std::string_view to_string(RateKind kind) {
  return kind == RateKind::Saturating ? "saturating" : "identity";
}

RateKind rate_kind_from_string(std::string_view name) {
  if (name == "saturating") return RateKind::Saturating;
  if (name == "identity") return RateKind::Identity;
  throw std::invalid_argument("unknown rate function '" + std::string(name) +
                              "' (expected saturating or identity)");
}

namespace {

double checked_input(double s) {
  if (std::isnan(s)) throw std::domain_error("rate function evaluated at NaN");
  if (s < 0.0) {
    if (s < -kNegativeTolerance) {
      throw std::domain_error("rate function evaluated at negative density " + std::to_string(s));
    }
    return 0.0;
  }
  return s;
}

}  // namespace

double RateFunction::operator()(double s) const {
  s = checked_input(s);
  return kind == RateKind::Saturating ? s / (1.0 + s) : s;
}

double RateFunction::derivative(double s) const {
  s = checked_input(s);
  if (kind == RateKind::Identity) return 1.0;
  const double d = 1.0 + s;
  return 1.0 / (d * d);
}

double evaluate_rate(const RateFunction& r, double s) { return r(s); }
double evaluate_rate_derivative(const RateFunction& r, double s) { return r.derivative(s); }

void ModelParams::validate() const {
  if (!(d_u > 0.0) || !(d_v > 0.0)) throw std::invalid_argument("diffusion coefficients must be positive");
  if (!(chi_u >= 0.0) || !(chi_v >= 0.0)) {
    throw std::invalid_argument("taxis sensitivities must be nonnegative");
  }
  if (!std::isfinite(d_u) || !std::isfinite(d_v) || !std::isfinite(chi_u) || !std::isfinite(chi_v)) {
    throw std::invalid_argument("model coefficients must be finite");
  }
}

// ---------------------------------------------------------------------------

std::string_view to_string(InitialCondition::Kind kind) {
  switch (kind) {
    case InitialCondition::Kind::OffsetGaussians: return "offset_gaussians";
    case InitialCondition::Kind::PureGaussians: return "pure_gaussians";
    case InitialCondition::Kind::Constant: return "constant";
    case InitialCondition::Kind::Custom: return "custom";
  }
  return "custom";
}

InitialCondition InitialCondition::offset_gaussians() {
  InitialCondition ic;
  ic.kind_ = Kind::OffsetGaussians;
  return ic;
}

InitialCondition InitialCondition::pure_gaussians() {
  InitialCondition ic;
  ic.kind_ = Kind::PureGaussians;
  return ic;
}

InitialCondition InitialCondition::constant(double c_u, double c_v) {
  if (!(c_u >= 0.0) || !(c_v >= 0.0)) throw std::invalid_argument("constant initial densities must be nonnegative");
  InitialCondition ic;
  ic.kind_ = Kind::Constant;
  ic.c_u_ = c_u;
  ic.c_v_ = c_v;
  return ic;
}

InitialCondition InitialCondition::custom(ScalarField u, ScalarField v, ScalarField w, ScalarField z) {
  if (!u || !v || !w || !z) throw std::invalid_argument("custom initial condition needs all four fields");
  InitialCondition ic;
  ic.kind_ = Kind::Custom;
  ic.u_ = std::move(u);
  ic.v_ = std::move(v);
  ic.w_ = std::move(w);
  ic.z_ = std::move(z);
  return ic;
}

InitialCondition InitialCondition::scaled(double factor) const {
  if (!(factor >= 0.0)) throw std::invalid_argument("initial-condition scale must be nonnegative");
  InitialCondition ic = *this;
  ic.scale_ *= factor;
  return ic;
}

std::array<double, 4> InitialCondition::evaluate(double x, double y) const {
  std::array<double, 4> out{};
  switch (kind_) {
    case Kind::OffsetGaussians: {
      const double gu = std::exp(-(x - 2.0) * (x - 2.0) - (y - 2.0) * (y - 2.0));
      const double gv = std::exp(-(x + 2.0) * (x + 2.0) - (y + 2.0) * (y + 2.0));
      out = {0.1 + gu, 0.1 + gv, 0.0, 0.0};
      break;
    }
    case Kind::PureGaussians: {
      const double gu = std::exp(-(x - 3.0) * (x - 3.0) - (y - 3.0) * (y - 3.0));
      const double gv = std::exp(-(x + 3.0) * (x + 3.0) - (y + 3.0) * (y + 3.0));
      out = {gu, gv, 0.0, 0.0};
      break;
    }
    case Kind::Constant:
      out = {c_u_, c_v_, 0.0, 0.0};
      break;
    case Kind::Custom:
      out = {u_(x, y), v_(x, y), w_(x, y), z_(x, y)};
      break;
  }
  if (scale_ != 1.0) {
    for (double& value : out) value *= scale_;
  }
  return out;
}

StateFields InitialCondition::interpolate(const StructuredQuadMesh& mesh) const {
  StateFields s = StateFields::zeros(mesh.n_nodes(), 0.0);
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    const auto [x, y] = mesh.node(i);
    const auto values = evaluate(x, y);
    s.u[i] = values[0];
    s.v[i] = values[1];
    s.w[i] = values[2];
    s.z[i] = values[3];
  }
  return s;
}

// ---------------------------------------------------------------------------

Equilibrium homogeneous_equilibrium(const ModelParams& params, const InitialCondition& ic,
                                    const Rectangle& domain) {
  domain.validate();
  double mean_u = 0.0;
  double mean_v = 0.0;
  if (ic.kind() == InitialCondition::Kind::Constant) {
    const auto values = ic.evaluate(domain.x_min, domain.y_min);
    mean_u = values[0];
    mean_v = values[1];
  } else {
    // 256 x 256 virtual cells, each split into 2 x 2 panels carrying a 2-point
    // Gauss rule per direction.
    constexpr int kCells = 256;
    constexpr int kPanels = 2 * kCells;
    const double gauss = 0.5 / std::sqrt(3.0);
    const double px = domain.width() / kPanels;
    const double py = domain.height() / kPanels;
    const double weight = 0.25 * px * py;
    double sum_u = 0.0;
    double sum_v = 0.0;
    for (int j = 0; j < kPanels; ++j) {
      const double yc = domain.y_min + (j + 0.5) * py;
      double row_u = 0.0;
      double row_v = 0.0;
      for (int i = 0; i < kPanels; ++i) {
        const double xc = domain.x_min + (i + 0.5) * px;
        for (const double gy : {-gauss, gauss}) {
          for (const double gx : {-gauss, gauss}) {
            const auto values = ic.evaluate(xc + gx * px, yc + gy * py);
            row_u += values[0];
            row_v += values[1];
          }
        }
      }
      sum_u += row_u * weight;
      sum_v += row_v * weight;
    }
    mean_u = sum_u / domain.area();
    mean_v = sum_v / domain.area();
  }
  return {mean_u, mean_v, params.rate_f(mean_v), params.rate_g(mean_u)};
}

std::pair<StateFields, ModelParams> apply_scaling(const StateFields& state, const ModelParams& params,
                                                  double a, double b) {
  if (params.rate_f.kind != RateKind::Identity || params.rate_g.kind != RateKind::Identity) {
    throw std::invalid_argument("the scaling symmetry requires identity rate functions");
  }
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("scaling factors must be positive");
  StateFields out = state;
  for (double& x : out.u) x *= a;
  for (double& x : out.v) x *= b;
  for (double& x : out.w) x *= b;
  for (double& x : out.z) x *= a;
  ModelParams p = params;
  p.chi_u = params.chi_u / b;
  p.chi_v = params.chi_v / a;
  return {std::move(out), p};
}

}  // namespace graffito
