#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "graffito/config.hpp"
#include "graffito/experiment.hpp"
#include "graffito/output.hpp"
#include "graffito/presets.hpp"

using namespace graffito;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("graffito_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("empty config gives the baseline defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.params.d_u == 0.25);
  CHECK(c.params.d_v == 0.25);
  CHECK(c.params.chi_u == 0.25);
  CHECK(c.params.chi_v == 0.25);
  CHECK(c.refinement_level == 5);
  CHECK(c.time.dt == 1.0);
  CHECK(c.time.theta == 0.5);
  CHECK(c.time.t_end == 1000.0);
  CHECK(c.time.scheme == Scheme::Galerkin);
  CHECK(c.domain == Rectangle{-6, 6, -6, 6});
  CHECK(c.params == find_preset("fig1_baseline").config.params);
  CHECK(c.time == find_preset("fig1_baseline").config.time);
}

TEST_CASE("config validation names the key") {
  try {
    parse_config("[time]\ntheta = 1.5\n");
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "time.theta");
  }
}

TEST_CASE("config parse errors carry positions") {
  try {
    parse_config("[model]\nd_u = 0.5\n  bogus = 1\n");
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
  try {
    parse_config("[model]\ndt = 0.5\n");
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[time]") != std::string::npos);
  }
  try {
    parse_config("[time]\ndt = abc\n");
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 6);
  }
  CHECK_THROWS_AS(parse_config("[time]\ndt = 1\ndt = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nowhere]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[time\n"), ConfigError);
}

TEST_CASE("config reproduces the strong-convection preset") {
  const RunConfig a = parse_config("[time]\nscheme = FCT\n[model]\nchi_u = 10\nchi_v = 10\n");
  const RunConfig b = parse_config("scheme = fct   # keys before a header resolve by name\nchi = 10\n");
  const RunConfig& fig5 = find_preset("fig5_chi10").config;
  CHECK(a.params == fig5.params);
  CHECK(a.time == fig5.time);
  CHECK(b.params == fig5.params);
  CHECK(b.time == fig5.time);
}

TEST_CASE("every preset round-trips through the config text") {
  for (const auto& p : presets()) {
    CAPTURE(p.name);
    CHECK_NOTHROW(p.config.validate());
    const RunConfig back = parse_config(render_config(p.config));
    CHECK(back == p.config);
  }
}

TEST_CASE("preset table") {
  CHECK(presets().size() == 9);
  const auto& fig6 = find_preset("fig6_asymmetric").config;
  CHECK(fig6.params.d_u == 0.25);
  CHECK(fig6.params.chi_u == 2.0);
  CHECK(fig6.params.chi_v == 4.0);
  CHECK(find_preset("fig1_baseline").config.sample_times == std::vector<double>{0, 400, 500, 600, 700, 1000});
  CHECK(find_preset("fig2_diffusion_dominated").config.sample_times ==
        std::vector<double>{0, 50, 75, 100, 200, 1000});
  CHECK(find_preset("dt_study").config.study_dts == std::vector<double>{1.0, 0.5, 0.25, 0.125, 0.0625});
  CHECK(find_preset("fig7_complete_segregation").config.initial == InitialPreset::PureGaussians);
  CHECK_THROWS_AS(find_preset("fig8"), std::invalid_argument);
}

TEST_CASE("overrides") {
  RunConfig c = find_preset("fig4_chi3").config;
  apply_override(c, "output.sample_times", "0, 10, 20");
  apply_override(c, "time.t_end", "20");
  apply_override(c, "refinement", "2");
  CHECK(c.time.t_end == 20.0);
  CHECK(c.sample_times == std::vector<double>{0, 10, 20});
  CHECK(c.refinement_level == 2);
  CHECK_THROWS_AS(apply_override(c, "time.nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "theta", "2"), ConfigError);
}

TEST_CASE("VTK layout") {
  const StructuredQuadMesh unit(Rectangle{0, 1, 0, 1}, 0);
  StateFields s = InitialCondition::constant(0.5, 0.25).interpolate(unit);
  std::ostringstream out;
  write_fields_vtk(s, unit, out);
  const std::string text = out.str();
  CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(text.find("POINTS 4 double\n") != std::string::npos);
  CHECK(text.find("CELLS 1 5\n4 0 1 3 2\n") != std::string::npos);
  CHECK(text.find("CELL_TYPES 1\n9\n") != std::string::npos);
  CHECK(text.find("SCALARS gang_class int 1\nLOOKUP_TABLE default\n1\n") != std::string::npos);
  for (const char* name : {"u", "v", "w", "z"}) {
    CHECK(text.find("SCALARS " + std::string(name) + " double 1") != std::string::npos);
  }

  const StructuredQuadMesh l5(Rectangle{}, 5);
  std::ostringstream big;
  write_fields_vtk(InitialCondition::offset_gaussians().interpolate(l5), l5, big);
  std::istringstream in(big.str());
  std::string line;
  std::size_t points = 0;
  while (std::getline(in, line)) {
    if (line.rfind("POINTS ", 0) == 0) points = std::stoul(line.substr(7));
  }
  CHECK(points == 1089);
}

TEST_CASE("diagonal CSV layout") {
  const StructuredQuadMesh unit(Rectangle{0, 1, 0, 1}, 0);
  std::ostringstream small;
  write_diagonal_csv(diagonal_snapshot(InitialCondition::constant(0.5, 0.5).interpolate(unit), unit), small);
  CHECK(small.str().rfind("s,u,v,w,z\n0,0.5,0.5,0,0\n", 0) == 0);
  CHECK(count_lines(small.str()) == 3);

  const StructuredQuadMesh l5(Rectangle{}, 5);
  std::ostringstream out;
  write_diagonal_csv(diagonal_snapshot(InitialCondition::offset_gaussians().interpolate(l5), l5), out);
  CHECK(count_lines(out.str()) == 34);
  CHECK(format_exact(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_exact(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("experiment output is complete and byte-stable") {
  RunConfig c = find_preset("fig4_chi3").config;
  c.refinement_level = 2;
  c.time.t_end = 6.0;
  c.sample_times = {0.0, 3.0, 6.0};
  const fs::path dir = scratch("run");
  c.output_dir = dir.string();
  const std::vector<std::string> files{"fields_t0.vtk",  "fields_t3.vtk", "fields_t6.vtk", "diagonal_t6.csv",
                                       "classes_t3.csv", "lyapunov.csv",  "config.ini",    "summary.json"};
  const auto first = run_experiment(c, "small");
  CHECK(first.exit_code == 0);
  std::vector<std::string> before;
  for (const auto& f : files) {
    CAPTURE(f);
    REQUIRE(fs::exists(dir / f));
    before.push_back(slurp(dir / f));
  }
  run_experiment(c, "small");
  for (std::size_t k = 0; k < files.size(); ++k) {
    CAPTURE(files[k]);
    CHECK(slurp(dir / files[k]) == before[k]);
  }
  const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(s["mass"]["self_check_passed"] == true);
  CHECK(s["fixed_point"]["iterations"].size() == 6);
  CHECK(s["timestep_condition"]["per_step"].size() == 6);
  CHECK(s["history"]["min_u"].size() == 7);
  CHECK(s["steady_state"].contains("limit_u"));
  CHECK(s["files"].size() == 12);
  CHECK(parse_config(slurp(dir / "config.ini")) == c);
  fs::remove_all(dir);
}

TEST_CASE("studies write one directory per run") {
  RunConfig c = find_preset("dt_study").config;
  c.refinement_level = 2;
  c.time.t_end = 2.0;
  c.study_dts = {1.0, 0.5};
  c.sample_times = {0.0, 2.0};
  const fs::path dir = scratch("study");
  c.output_dir = dir.string();
  const auto o = run_experiment(c, "dt_study");
  CHECK(o.runs.size() == 2);
  CHECK(fs::exists(dir / "dt_1" / "summary.json"));
  CHECK(fs::exists(dir / "dt_0.5" / "summary.json"));
  const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(s["runs"].size() == 2);
  CHECK(s["diagonal_l2_differences"].size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("an expected blow-up that does not happen fails the run") {
  RunConfig c = find_preset("fig4_chi3").config;
  c.refinement_level = 1;
  c.time.t_end = 2.0;
  c.sample_times = {0.0};
  c.expected_blowup_by = 2.0;
  ExperimentOptions opt;
  opt.write_files = false;
  const auto o = run_experiment(c, "no_blowup", opt);
  CHECK(o.exit_code == 1);
  CHECK(o.summary["blowup_detected_at"].is_null());
}
