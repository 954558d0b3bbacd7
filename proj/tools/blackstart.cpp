#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

#include "blackstart/cli/commands.hpp"

namespace cli = blackstart::cli;

namespace {

void add_run_options(CLI::App& app, cli::RunConfig& config) {
  app.add_option("--dt", config.dt_s, "Time step [s]");
  app.add_option("--duration", config.duration_s, "Simulated time [s]");
  app.add_option("--decimate", config.decimation, "Keep every n-th step in timeseries.csv");
  app.add_flag("--no-saturation", config.no_saturation, "Linear transformer cores");
  app.add_flag("--current-limiter", config.current_limiter, "Enable the BESS current limiter");
  app.add_flag("--enable-resync", config.enable_resync, "Add the grid equivalent and arm the synchrocheck");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-start EMT simulator for an offshore wind farm island"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cli::version()));

  cli::RunConfig run_config;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write its outputs");
  run->add_option("--scenario", run_config.scenario, "Built-in name or scenario file")
      ->capture_default_str();
  run->add_option("--out", run_config.out_dir, "Output directory")->capture_default_str();
  add_run_options(*run, run_config);

  cli::RunConfig compare_config;
  std::vector<std::string> compare_scenarios{"hard-switch", "default-blackstart"};
  std::filesystem::path compare_out = "out/compare";
  auto* compare = app.add_subcommand("compare", "Run two scenarios side by side and compare them");
  compare->add_option("--scenario", compare_scenarios, "Two scenarios, A then B")
      ->expected(2)
      ->capture_default_str();
  compare->add_option("--out", compare_out, "Output directory")->capture_default_str();
  add_run_options(*compare, compare_config);

  std::string print_scenario = "default-blackstart";
  auto* print = app.add_subcommand("print-case", "Write a scenario in file form to stdout");
  print->add_option("--scenario", print_scenario, "Built-in name or scenario file")->capture_default_str();

  std::string validate_scenario;
  auto* validate = app.add_subcommand("validate", "Parse and check a scenario without running it");
  validate->add_option("--scenario", validate_scenario, "Built-in name or scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitFailure;
  }

  if (run->parsed()) return cli::run(run_config, std::cerr);

  if (compare->parsed()) {
    cli::RunConfig a = compare_config;
    cli::RunConfig b = compare_config;
    a.scenario = compare_scenarios.at(0);
    b.scenario = compare_scenarios.at(1);
    return cli::compare_runs(a, b, compare_out, std::cerr);
  }

  try {
    if (print->parsed()) {
      std::cout << cli::serialize_scenario(cli::load_scenario(print_scenario));
      return cli::kExitClean;
    }
    const auto s = cli::load_scenario(validate_scenario);
    std::cout << fmt::format("{}: ok, {} nodes, {} elements, {} turbines, {} events\n", s.definition.name,
                             s.definition.nodes.size(), s.definition.elements.size(), s.definition.wts.size(),
                             s.schedule.events.size());
    return cli::kExitClean;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailure;
  }
}
