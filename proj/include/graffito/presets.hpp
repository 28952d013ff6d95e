#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "graffito/config.hpp"

namespace graffito {

struct ExperimentPreset {
  std::string name;
  std::string description;
  RunConfig config;
};

/// fig1_baseline ... fig7_complete_segregation, mesh_study, dt_study.
const std::vector<ExperimentPreset>& presets();
/// Throws std::invalid_argument listing the known names.
const ExperimentPreset& find_preset(std::string_view name);

}  // namespace graffito
