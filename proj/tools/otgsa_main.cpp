#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "otgsa/pipeline/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitPartialFailure = 3;
constexpr int kExitAnalysisError = 4;

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string scenario;
  std::string solver;
  std::int64_t seed = -1;
  int jobs = 0;
  std::string qoi = "emissions";
};

std::string default_config_path() {
  if (const char* env = std::getenv("OTGSA_CONFIG")) return env;
  return "config/default.json";
}

otgsa::pipeline::ExperimentConfig resolve_config(const CliOptions& cli) {
  auto config = otgsa::pipeline::load_config(
      cli.config_path.empty() ? default_config_path() : cli.config_path);
  if (!cli.scenario.empty()) config.scenario_id = cli.scenario;
  if (!cli.solver.empty())
    config.solver = otgsa::gsa::solver_from_string(cli.solver);
  if (cli.seed >= 0) config.seed = static_cast<std::uint64_t>(cli.seed);
  if (cli.jobs > 0) config.jobs = cli.jobs;
  if (!cli.out_dir.empty()) {
    std::filesystem::path out = cli.out_dir;
    if (const char* root = std::getenv("OTGSA_OUT_ROOT");
        root && out.is_relative())
      out = std::filesystem::path(root) / out;
    config.out_dir = out;
  }
  const auto errors = config.validation_errors();
  if (!errors.empty()) {
    std::cerr << "configuration errors:\n";
    for (const auto& error : errors) std::cerr << "  - " << error << '\n';
    std::exit(kExitConfigError);
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal-transport sensitivity analysis for a multi-region "
               "direct-air-capture deployment model"};
  app.require_subcommand(1);

  CliOptions cli;
  app.add_option("--config", cli.config_path,
                 "Config bundle (default: config/default.json or $OTGSA_CONFIG)");
  app.add_option("--out", cli.out_dir,
                 "Output directory (joined with $OTGSA_OUT_ROOT if relative)");
  app.add_option("--scenario", cli.scenario, "Scenario id: ndc or lts")
      ->check(CLI::IsMember({"ndc", "lts"}));
  app.add_option("--seed", cli.seed, "Experiment seed");
  app.add_option("--solver", cli.solver, "Transport solver for the indices")
      ->check(CLI::IsMember({"exact", "sinkhorn", "wb"}));
  app.add_option("--jobs", cli.jobs, "Worker threads (0 = runtime default)");

  auto* cmd_sample = app.add_subcommand("sample", "Draw the input design");
  auto* cmd_layout =
      app.add_subcommand("layout", "Cluster and order the design");
  auto* cmd_run = app.add_subcommand("run", "Simulate every design point");
  auto* cmd_analyze =
      app.add_subcommand("analyze", "Sensitivity indices and summaries");
  cmd_analyze->add_option("--qoi", cli.qoi, "Quantity of interest")
      ->check(CLI::IsMember({"emissions", "gains_gdp", "gains_consumption",
                             "total_subsidies"}));
  auto* cmd_plotdata =
      app.add_subcommand("plotdata", "Tidy CSVs for external plotting");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = resolve_config(cli);
    if (cmd_sample->parsed()) {
      const auto stats = otgsa::pipeline::run_sample(config);
      std::cout << "sample: " << stats.executed << " drawn, " << stats.skipped
                << " already present\n";
    } else if (cmd_layout->parsed()) {
      const auto stats = otgsa::pipeline::run_layout(config);
      std::cout << (stats.executed ? "layout: written\n"
                                   : "layout: already present\n");
    } else if (cmd_run->parsed()) {
      const auto stats = otgsa::pipeline::run_simulations(config);
      std::cout << "run: " << stats.executed << " simulated, " << stats.skipped
                << " resumed, " << stats.failed << " failed\n";
      if (stats.failed > 0) return kExitPartialFailure;
    } else if (cmd_analyze->parsed()) {
      try {
        otgsa::pipeline::run_analyze(config, cli.qoi);
        std::cout << "analyze: reports written for " << cli.qoi << '\n';
      } catch (const std::exception& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return kExitAnalysisError;
      }
    } else if (cmd_plotdata->parsed()) {
      try {
        otgsa::pipeline::run_plotdata(config);
        std::cout << "plotdata: files written\n";
      } catch (const std::exception& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return kExitAnalysisError;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitOk;
}
