#include "graffito/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include "graffito/fem.hpp"
#include "graffito/output.hpp"
#include "graffito/presets.hpp"

namespace graffito {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json mass_entry(double initial, double final) {
  const double delta = final - initial;
  return {{"initial", initial},
          {"final", final},
          {"delta", delta},
          {"relative_delta", initial != 0.0 ? std::abs(delta) / std::abs(initial) : std::abs(delta)}};
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("error while writing '" + path.string() + "'");
}

void write_classes_csv(const StateFields& state, const StructuredQuadMesh& mesh, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const auto classes = classify(state);
  out << "node,x,y,gang_class,graffiti_class\n";
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    out << i << ',' << format_exact(mesh.node(i).x) << ',' << format_exact(mesh.node(i).y) << ','
        << static_cast<int>(classes.gang_class[i]) << ',' << static_cast<int>(classes.graffiti_class[i]) << '\n';
  }
}

RunRecord simulate(const RunConfig& config, const std::string& name, const std::string& label, const fs::path& dir,
                   const ExperimentOptions& options) {
  config.validate();
  RunRecord rec;
  rec.label = label;
  rec.config = config;

  const StructuredQuadMesh mesh(config.domain, config.refinement_level);
  const Q1Space space(mesh);
  const SparseMatrix mass = assemble_mass(space);
  const SparseMatrix stiffness = assemble_stiffness(space);
  const std::vector<double> lumped = lump_mass(mass);
  const bool lumped_mass_scheme = config.time.scheme != Scheme::Galerkin;
  const auto masses = [&](const StateFields& s) {
    return lumped_mass_scheme ? total_mass(s, lumped) : total_mass(s, mass);
  };

  const InitialCondition ic = config.initial_condition();
  rec.equilibrium = homogeneous_equilibrium(config.params, ic, config.domain);
  StateFields initial = ic.interpolate(mesh);
  rec.initial_mass = masses(initial);

  const bool files = options.write_files;
  if (files) fs::create_directories(dir);
  std::vector<std::string> written;
  const std::string tag = name + (label.empty() ? "" : "/" + label);

  SteadyStateDetector detector(rec.equilibrium, {config.steady_threshold, config.steady_window});
  const std::size_t stride =
      config.time.dt < 1.0 ? static_cast<std::size_t>(std::llround(1.0 / config.time.dt)) : std::size_t{1};
  std::size_t step_count = 0;

  json history = {{"t", json::array()}};
  for (const char* f : {"min_u", "min_v", "min_w", "min_z", "max_u", "max_v", "max_w", "max_z"}) {
    history[f] = json::array();
  }
  rec.run_min.fill(std::numeric_limits<double>::infinity());
  rec.run_max.fill(-std::numeric_limits<double>::infinity());
  const auto track = [&](const StateFields& s) {
    const auto e = extrema(s);
    history["t"].push_back(s.t);
    static constexpr const char* kMin[] = {"min_u", "min_v", "min_w", "min_z"};
    static constexpr const char* kMax[] = {"max_u", "max_v", "max_w", "max_z"};
    for (int f = 0; f < 4; ++f) {
      rec.run_min[f] = std::min(rec.run_min[f], e.min[f]);
      rec.run_max[f] = std::max(rec.run_max[f], e.max[f]);
      history[kMin[f]].push_back(e.min[f]);
      history[kMax[f]].push_back(e.max[f]);
    }
  };
  const auto observe_slow = [&](const StateFields& s) {
    detector.push(s);
    rec.lyapunov.push_back(lyapunov(s, rec.equilibrium, mass, stiffness, config.lyapunov_c));
  };

  RunObservers obs;
  obs.sample_times = config.sample_times;
  obs.on_sample = [&](const StateFields& s) {
    if (s.t == 0.0) {
      track(s);
      observe_slow(s);
    }
    const bool scheduled = std::any_of(config.sample_times.begin(), config.sample_times.end(), [&](double t) {
      return std::abs(t - s.t) <= 0.5 * config.time.dt;
    });
    if (!scheduled) return;
    const auto diag = diagonal_snapshot(s, mesh);
    rec.diagonals.emplace_back(s.t, diag);
    if (options.log != nullptr) {
      const auto e = extrema(s);
      *options.log << "[" << tag << "] t=" << time_label(s.t) << " min(u,v)=" << std::min(e.min[0], e.min[1])
                   << " max(u,v)=" << std::max(e.max[0], e.max[1]) << '\n';
    }
    if (!files) return;
    const std::string t = time_label(s.t);
    if (config.outputs.fields) {
      write_fields_vtk(s, mesh, (dir / ("fields_t" + t + ".vtk")).string());
      written.push_back("fields_t" + t + ".vtk");
    }
    if (config.outputs.diagonal) {
      write_diagonal_csv(diag, (dir / ("diagonal_t" + t + ".csv")).string());
      written.push_back("diagonal_t" + t + ".csv");
    }
    if (config.outputs.classification) {
      write_classes_csv(s, mesh, dir / ("classes_t" + t + ".csv"));
      written.push_back("classes_t" + t + ".csv");
    }
  };
  obs.on_step = [&](const StateFields& s, const StepReport&) {
    ++step_count;
    track(s);
    if (step_count % stride == 0) observe_slow(s);
  };

  rec.result = run(std::move(initial), config.params, mesh, config.time, obs);
  const StateFields& final_state = rec.result.final_state;
  rec.final_mass = masses(final_state);
  rec.steady = detector.report();
  rec.final_classes = classify(final_state);
  rec.final_overlap = overlap_measure(final_state, lumped);

  const auto rel = [](double a, double b) { return a != 0.0 ? std::abs(b - a) / std::abs(a) : std::abs(b - a); };
  const bool completed = !rec.result.diverged();
  rec.mass_ok = rel(rec.initial_mass.u, rec.final_mass.u) <= kMassSelfCheck &&
                rel(rec.initial_mass.v, rec.final_mass.v) <= kMassSelfCheck;

  if (config.expected_blowup_by > 0.0) {
    rec.exit_code = rec.result.diverged() && *rec.result.divergence_time <= config.expected_blowup_by ? 0 : 1;
  } else if (!completed) {
    rec.exit_code = 2;
  } else if (!rec.mass_ok) {
    rec.exit_code = 3;
  }

  // ---- summary ----
  json& j = rec.summary;
  j["name"] = name;
  if (!label.empty()) j["label"] = label;
  j["scheme"] = std::string(to_string(config.time.scheme));
  j["refinement"] = config.refinement_level;
  j["n_dofs"] = mesh.n_nodes();
  j["dt"] = config.time.dt;
  j["t_end"] = config.time.t_end;
  j["t_reached"] = final_state.t;
  j["completed"] = completed;
  j["mass"] = {{"u", mass_entry(rec.initial_mass.u, rec.final_mass.u)},
               {"v", mass_entry(rec.initial_mass.v, rec.final_mass.v)},
               {"lumped", lumped_mass_scheme},
               {"self_check_limit", kMassSelfCheck},
               {"self_check_passed", rec.mass_ok}};
  j["extrema"] = {
      {"min", {{"u", rec.run_min[0]}, {"v", rec.run_min[1]}, {"w", rec.run_min[2]}, {"z", rec.run_min[3]}}},
      {"max", {{"u", rec.run_max[0]}, {"v", rec.run_max[1]}, {"w", rec.run_max[2]}, {"z", rec.run_max[3]}}}};
  j["history"] = std::move(history);
  const auto& ss = rec.steady;
  j["steady_state"] = {{"converged", ss.converged},
                       {"stationary", ss.stationary},
                       {"t_detect", number_or_null(ss.t_detect)},
                       {"t_stationary", number_or_null(ss.t_stationary)},
                       {"limit_u", ss.limit_values.u_bar},
                       {"limit_v", ss.limit_values.v_bar},
                       {"limit_w", ss.limit_values.w_star},
                       {"limit_z", ss.limit_values.z_star},
                       {"max_deviation", ss.max_deviation},
                       {"last_window_change", number_or_null(ss.last_window_change)},
                       {"threshold", config.steady_threshold},
                       {"window", config.steady_window}};
  json flags = json::array();
  json iterations = json::array();
  std::size_t violating = 0;
  std::size_t nonconverged = 0;
  int max_iter = 0;
  double sum_iter = 0.0;
  for (const auto& r : rec.result.reports) {
    flags.push_back(r.timestep_condition_ok);
    iterations.push_back(r.fp_iterations);
    violating += r.timestep_condition_ok ? 0 : 1;
    nonconverged += r.fp_converged ? 0 : 1;
    max_iter = std::max(max_iter, r.fp_iterations);
    sum_iter += r.fp_iterations;
  }
  const std::size_t n_reports = rec.result.reports.size();
  j["timestep_condition"] = {
      {"all_steps_ok", violating == 0}, {"violating_steps", violating}, {"per_step", std::move(flags)}};
  j["fixed_point"] = {{"tolerance", config.time.fp_tolerance},
                      {"max_iter", config.time.fp_max_iter},
                      {"max", max_iter},
                      {"mean", n_reports > 0 ? sum_iter / static_cast<double>(n_reports) : 0.0},
                      {"nonconverged_steps", nonconverged},
                      {"iterations", std::move(iterations)}};
  j["classification"] = {{"t", final_state.t},
                         {"cutoff", rec.final_classes.cutoff},
                         {"red_u", rec.final_classes.count(GangClass::RedU)},
                         {"blue_v", rec.final_classes.count(GangClass::BlueV)},
                         {"purple_tie", rec.final_classes.count(GangClass::PurpleTie)},
                         {"orange_z", rec.final_classes.count(GraffitiClass::OrangeZ)},
                         {"light_blue_w", rec.final_classes.count(GraffitiClass::LightBlueW)},
                         {"light_purple_tie", rec.final_classes.count(GraffitiClass::LightPurpleTie)}};
  j["overlap_final"] = rec.final_overlap;
  if (!rec.lyapunov.empty()) {
    j["lyapunov"] = {{"c", config.lyapunov_c},
                     {"y_initial", rec.lyapunov.front().y},
                     {"y_final", rec.lyapunov.back().y}};
  }
  if (rec.result.diverged()) {
    j["divergence"] = {{"t", *rec.result.divergence_time}, {"message", rec.result.divergence_message}};
  } else {
    j["divergence"] = nullptr;
  }
  if (config.expected_blowup_by > 0.0) {
    j["blowup_expected_by"] = config.expected_blowup_by;
    j["blowup_detected_at"] = rec.result.diverged() ? json(*rec.result.divergence_time) : json(nullptr);
  }

  if (files) {
    if (rec.result.diverged() && config.outputs.fields) {
      write_fields_vtk(final_state, mesh, (dir / "fields_last_finite.vtk").string());
      written.push_back("fields_last_finite.vtk");
    }
    if (config.outputs.lyapunov) {
      write_lyapunov_csv(rec.lyapunov, (dir / "lyapunov.csv").string());
      written.push_back("lyapunov.csv");
    }
    std::ofstream cfg(dir / "config.ini", std::ios::binary | std::ios::trunc);
    cfg << render_config(config);
    written.push_back("config.ini");
    if (config.outputs.summary) written.push_back("summary.json");
    j["files"] = written;
  }
  j["exit_code"] = rec.exit_code;
  if (files && config.outputs.summary) write_json(j, dir / "summary.json");

  if (options.log != nullptr) {
    *options.log << "[" << tag << "] "
                 << (completed ? "completed" : rec.result.divergence_message) << ", exit code " << rec.exit_code
                 << '\n';
  }
  return rec;
}

}  // namespace

ExperimentOutcome run_experiment(const RunConfig& config, std::string_view name, const ExperimentOptions& options) {
  config.validate();
  ExperimentOutcome out;
  out.name = std::string(name);
  const fs::path root(config.output_dir);

  std::vector<std::pair<std::string, RunConfig>> jobs;
  if (!config.study_levels.empty()) {
    for (const int level : config.study_levels) {
      RunConfig c = config;
      c.study_levels.clear();
      c.refinement_level = level;
      jobs.emplace_back("level_" + std::to_string(level), c);
    }
  } else if (!config.study_dts.empty()) {
    for (const double dt : config.study_dts) {
      RunConfig c = config;
      c.study_dts.clear();
      c.time.dt = dt;
      jobs.emplace_back("dt_" + time_label(dt), c);
    }
  } else {
    jobs.emplace_back("", config);
  }

  for (auto& [label, c] : jobs) {
    if (!label.empty()) c.output_dir = (root / label).string();
    out.runs.push_back(simulate(c, out.name, label, label.empty() ? root : root / label, options));
    out.exit_code = std::max(out.exit_code, out.runs.back().exit_code);
  }

  if (jobs.size() == 1 && jobs.front().first.empty()) {
    out.summary = out.runs.front().summary;
    return out;
  }

  json& j = out.summary;
  j["name"] = out.name;
  j["study"] = config.study_levels.empty() ? "time_step" : "mesh";
  j["runs"] = json::array();
  for (const auto& r : out.runs) {
    j["runs"].push_back({{"label", r.label},
                         {"refinement", r.config.refinement_level},
                         {"dt", r.config.time.dt},
                         {"completed", !r.result.diverged()},
                         {"exit_code", r.exit_code},
                         {"min_u", r.run_min[0]},
                         {"min_v", r.run_min[1]}});
  }
  // Final-time diagonal distances between consecutive runs.
  j["diagonal_l2_differences"] = json::array();
  for (std::size_t k = 0; k + 1 < out.runs.size(); ++k) {
    const auto& a = out.runs[k];
    const auto& b = out.runs[k + 1];
    if (a.result.diverged() || b.result.diverged() || a.diagonals.empty() || b.diagonals.empty()) continue;
    const auto& da = a.diagonals.back();
    const auto& db = b.diagonals.back();
    if (std::abs(da.first - db.first) > 1e-9) continue;
    j["diagonal_l2_differences"].push_back(
        {{"a", a.label}, {"b", b.label}, {"t", da.first}, {"value", diagonal_l2_difference(da.second, db.second)}});
  }
  j["exit_code"] = out.exit_code;
  if (options.write_files) {
    fs::create_directories(root);
    write_json(j, root / "summary.json");
  }
  return out;
}

ExperimentOutcome run_preset(std::string_view name, const std::vector<std::pair<std::string, std::string>>& overrides,
                             const ExperimentOptions& options) {
  RunConfig config = find_preset(name).config;
  for (const auto& [key, value] : overrides) apply_override(config, key, value);
  return run_experiment(config, name, options);
}

}  // namespace graffito
