// Command-line driver: run a config file, run a named preset, or list presets.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "graffito/config.hpp"
#include "graffito/experiment.hpp"
#include "graffito/presets.hpp"

namespace {

struct CommonFlags {
  std::optional<std::string> output_dir;
  std::optional<std::string> scheme;
  std::optional<int> refinement;
  std::optional<double> dt;
  bool quiet = false;
};

void add_common(CLI::App& app, CommonFlags& f) {
  app.add_option("--output-dir", f.output_dir, "Directory for all emitted files");
  app.add_option("--scheme", f.scheme, "galerkin, low_order or fct");
  app.add_option("--refinement", f.refinement, "Uniform refinement level (replaces a mesh study)");
  app.add_option("--dt", f.dt, "Time step (replaces a time-step study)");
  app.add_flag("--quiet", f.quiet, "Suppress progress output");
}

// Flags are applied last, so they win over both the file and --override.
void apply_flags(graffito::RunConfig& c, const CommonFlags& f) {
  if (f.output_dir) c.output_dir = *f.output_dir;
  if (f.scheme) graffito::apply_override(c, "time.scheme", *f.scheme);
  if (f.refinement) {
    c.study_levels.clear();
    graffito::apply_override(c, "mesh.refinement", std::to_string(*f.refinement));
  }
  if (f.dt) {
    c.study_dts.clear();
    c.time.dt = *f.dt;
    c.validate();
  }
}

int execute(const graffito::RunConfig& config, const std::string& name, const CommonFlags& f) {
  graffito::ExperimentOptions options;
  options.log = f.quiet ? nullptr : &std::cout;
  const auto outcome = graffito::run_experiment(config, name, options);
  if (!f.quiet) {
    std::cout << name << ": exit code " << outcome.exit_code << ", output in " << config.output_dir << '\n';
  }
  return outcome.exit_code;
}

std::pair<std::string, std::string> split_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw graffito::ConfigError("override '" + kv + "' is not of the form key=value");
  }
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graffito: finite element simulator of the two-gang territoriality model"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  add_common(*run, run_flags);

  CommonFlags preset_flags;
  std::string preset_name;
  std::vector<std::string> overrides;
  auto* preset = app.add_subcommand("preset", "Run a named preset");
  preset->add_option("name", preset_name, "Preset name (see list-presets)")->required();
  preset->add_option("--override", overrides, "section.key=value, repeatable")->take_all();
  add_common(*preset, preset_flags);

  auto* list = app.add_subcommand("list-presets", "List the available presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& p : graffito::presets()) std::cout << p.name << "\t" << p.description << '\n';
      return 0;
    }
    if (run->parsed()) {
      graffito::RunConfig config = graffito::load_config(config_path);
      apply_flags(config, run_flags);
      std::string name = std::filesystem::path(config_path).stem().string();
      return execute(config, name, run_flags);
    }
    graffito::RunConfig config = graffito::find_preset(preset_name).config;
    for (const auto& kv : overrides) {
      const auto [key, value] = split_override(kv);
      graffito::apply_override(config, key, value);
    }
    apply_flags(config, preset_flags);
    return execute(config, preset_name, preset_flags);
  } catch (const graffito::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 70;
  }
}
