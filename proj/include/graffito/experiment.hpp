#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graffito/config.hpp"
#include "graffito/diagnostics.hpp"
#include "graffito/stepper.hpp"

namespace graffito {

struct ExperimentOptions {
  bool write_files = true;
  /// Progress lines go here; nullptr keeps the run quiet.
  std::ostream* log = nullptr;
};

/// Everything observed during one simulation.
struct RunRecord {
  std::string label;
  RunConfig config;
  RunResult result;
  Equilibrium equilibrium;
  Masses initial_mass;
  Masses final_mass;
  SteadyStateReport steady;
  /// Extrema over all stored levels (t = 0 included).
  std::array<double, 4> run_min{};
  std::array<double, 4> run_max{};
  std::vector<std::pair<double, DiagonalSnapshot>> diagonals;
  /// One sample per time unit (per step when dt > 1).
  std::vector<LyapunovSample> lyapunov;
  ClassificationGrid final_classes;
  double final_overlap = 0.0;
  bool mass_ok = true;
  int exit_code = 0;
  nlohmann::json summary;
};

struct ExperimentOutcome {
  std::string name;
  std::vector<RunRecord> runs;
  nlohmann::json summary;
  int exit_code = 0;
};

/// Relative mass drift allowed before a completed run fails its self-check.
inline constexpr double kMassSelfCheck = 1e-6;

/// Exit codes: 0 ok, 1 expected blow-up did not happen in time, 2 unexpected
/// divergence, 3 mass self-check failed. Studies report the largest code.
ExperimentOutcome run_experiment(const RunConfig& config, std::string_view name, const ExperimentOptions& options = {});

/// Applies "key=value" overrides to the named preset, then runs it.
ExperimentOutcome run_preset(std::string_view name, const std::vector<std::pair<std::string, std::string>>& overrides,
                             const ExperimentOptions& options = {});

}  // namespace graffito
