#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "graffito/mesh.hpp"
#include "graffito/model.hpp"
#include "graffito/stepper.hpp"

namespace graffito {

enum class InitialPreset { OffsetGaussians, PureGaussians, Constant };

std::string_view to_string(InitialPreset p);
InitialPreset initial_preset_from_string(std::string_view name);

struct OutputToggles {
  bool fields = true;
  bool diagonal = true;
  bool classification = true;
  bool lyapunov = true;
  bool summary = true;
  bool operator==(const OutputToggles&) const = default;
};

/// Everything needed to reproduce one run (or one study of runs).
struct RunConfig {
  Rectangle domain{};
  int refinement_level = 5;
  /// Non-empty: run once per listed level (mesh study).
  std::vector<int> study_levels;

  ModelParams params{};
  InitialPreset initial = InitialPreset::OffsetGaussians;
  double initial_scale = 1.0;
  double constant_u = 0.0;
  double constant_v = 0.0;

  TimeConfig time{};
  /// Non-empty: run once per listed time step (time-step study).
  std::vector<double> study_dts;

  std::string output_dir = "output";
  std::vector<double> sample_times{0.0, 400.0, 500.0, 600.0, 700.0, 1000.0};
  OutputToggles outputs{};
  double lyapunov_c = 1.0;
  double steady_threshold = 1e-6;
  double steady_window = 100.0;
  /// Positive: divergence at or before this time is the expected outcome.
  double expected_blowup_by = 0.0;

  InitialCondition initial_condition() const;
  /// Throws ConfigError naming the offending key.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  /// line/column are 1-based; 0 when the error is not tied to a position.
  ConfigError(const std::string& message, std::size_t line = 0, std::size_t column = 0, std::string key = {});
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string key_;
};

/// Parses the key = value format described in docs/formats.md. Unknown keys
/// are errors; missing keys keep the RunConfig defaults.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Sets one key; `key` may be "section.key" or a bare key. Used for
/// command-line overrides.
void apply_override(RunConfig& config, std::string_view key, std::string_view value);

/// Canonical text with every key; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

}  // namespace graffito
