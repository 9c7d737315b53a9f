#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "apsense/cli/commands.hpp"
#include "apsense/cli/config.hpp"
#include "apsense/common/error.hpp"

namespace {

int exit_code_for(apsense::ErrorKind kind) {
  switch (kind) {
    case apsense::ErrorKind::invalid_input: return 2;
    case apsense::ErrorKind::config: return 3;
    case apsense::ErrorKind::io: return 4;
    case apsense::ErrorKind::http: return 5;
    case apsense::ErrorKind::numeric: return 6;
  }
  return 1;
}

void print_error(const std::string& kind, const std::string& message) {
  const nlohmann::json err{{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Accident-hotspot imagery toolkit: cluster collisions, build a "
      "street-view dataset, train and explain the classifier, and drive "
      "the windshield notification geometry."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON run configuration (defaults used when omitted)");
  app.add_option("--set", overrides, "Override one config key, e.g. --set train.epochs=3")
      ->expected(-1);

  app.add_subcommand("cluster", "Cluster collision records into hotspots (CSV + GeoJSON)");
  app.add_subcommand("fetch", "Plan and fetch street-view imagery into a dataset manifest");
  app.add_subcommand("train", "Train the attention classifier on a manifest");
  app.add_subcommand("explain", "Render heatmaps, masks and driver-facing contours");
  app.add_subcommand("evaluate", "Score classification and explanation-faithfulness metrics");
  app.add_subcommand("simulate", "Sweep windshield patch positions from a scenario plan");
  app.add_subcommand("monitor", "Replay a GPS trace and emit mode-switch events");

  CLI11_PARSE(app, argc, argv);

  try {
    apsense::cli::RunConfig cfg = config_path.empty()
                                      ? apsense::cli::RunConfig()
                                      : apsense::cli::RunConfig::from_file(config_path);
    for (const auto& assignment : overrides) cfg.set_override(assignment);

    const std::string name = app.get_subcommands().front()->get_name();
    const apsense::cli::CommandResult result = apsense::cli::run_command(name, cfg);
    for (const auto& path : result.outputs) std::cout << path << '\n';
    return 0;
  } catch (const apsense::Error& e) {
    print_error(e.kind_name(), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
