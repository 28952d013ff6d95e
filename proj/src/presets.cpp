#include "graffito/presets.hpp"

#include <stdexcept>

namespace graffito {

namespace {

RunConfig base(double d, double chi_u, double chi_v, Scheme scheme, std::vector<double> samples) {
  RunConfig c;
  c.params.d_u = c.params.d_v = d;
  c.params.chi_u = chi_u;
  c.params.chi_v = chi_v;
  c.time.scheme = scheme;
  c.sample_times = std::move(samples);
  return c;
}

std::vector<ExperimentPreset> build() {
  std::vector<ExperimentPreset> out;
  out.push_back({"fig1_baseline", "Galerkin, D = chi = 0.25: convergence to the constant steady state",
                 base(0.25, 0.25, 0.25, Scheme::Galerkin, {0, 400, 500, 600, 700, 1000})});
  out.push_back({"fig2_diffusion_dominated", "Galerkin, D = 3, chi = 0.25: fast convergence to constants",
                 base(3.0, 0.25, 0.25, Scheme::Galerkin, {0, 50, 75, 100, 200, 1000})});

  RunConfig fig3 = base(0.25, 3.0, 3.0, Scheme::Galerkin, {0, 5, 35});
  fig3.time.t_end = 50.0;
  fig3.expected_blowup_by = 50.0;
  out.push_back({"fig3_galerkin_blowup", "Galerkin, D = 0.25, chi = 3: oscillations and blow-up", fig3});

  out.push_back({"fig4_chi3", "FCT, D = 0.25, chi = 3: partial segregation",
                 base(0.25, 3.0, 3.0, Scheme::FCT, {0, 5, 50, 100, 500, 1000})});
  out.push_back({"fig5_chi10", "FCT, D = 0.25, chi = 10: stronger segregation",
                 base(0.25, 10.0, 10.0, Scheme::FCT, {0, 5, 50, 100, 500, 1000})});
  out.push_back({"fig6_asymmetric", "FCT, D = 0.25, chi_u = 2, chi_v = 4: v clusters in small patches",
                 base(0.25, 2.0, 4.0, Scheme::FCT, {0, 50, 100, 200, 400, 1000})});

  RunConfig fig7 = base(0.01, 3.0, 3.0, Scheme::FCT, {0, 50, 75, 200, 500, 1000});
  fig7.initial = InitialPreset::PureGaussians;
  out.push_back({"fig7_complete_segregation", "FCT, D = 0.01, chi = 3, disjoint Gaussians: complete segregation",
                 fig7});

  RunConfig mesh = base(0.25, 3.0, 3.0, Scheme::FCT, {0, 1, 50, 100, 500});
  mesh.time.t_end = 500.0;
  mesh.study_levels = {3, 4, 5, 6, 7};
  out.push_back({"mesh_study", "FCT, fig4 parameters, T = 500 on refinement levels 3..7", mesh});

  RunConfig dt = base(0.25, 3.0, 3.0, Scheme::FCT, {0, 1, 50, 100, 500});
  dt.time.t_end = 500.0;
  dt.study_dts = {1.0, 0.5, 0.25, 0.125, 0.0625};
  out.push_back({"dt_study", "FCT, fig4 parameters, T = 500 with dt = 1 ... 0.0625", dt});

  for (auto& p : out) p.config.output_dir = "output/" + p.name;
  return out;
}

}  // namespace

const std::vector<ExperimentPreset>& presets() {
  static const std::vector<ExperimentPreset> table = build();
  return table;
}

const ExperimentPreset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace graffito
