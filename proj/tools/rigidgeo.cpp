#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rigidgeo/scenarios.hpp"

namespace sc = rigidgeo::scenarios;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

int list_command() {
  for (const auto& s : sc::list_scenarios()) std::cout << s.name << "\t" << s.description << "\n";
  return kExitPass;
}

int run_command(const std::string& scenario, const std::string& config_path, const std::string& out_path,
                std::optional<std::uint64_t> seed, std::optional<double> tolerance, bool timing) {
  sc::Report report;
  try {
    const sc::Json config = config_path.empty() ? sc::Json::object() : sc::load_config(config_path);
    report = sc::run(scenario, config, {seed, tolerance});
  } catch (const sc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::cout << report.to_text();
  if (!timing) report.wall_seconds.reset();

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write report to '" << out_path << "'\n";
      return kExitUsage;
    }
    out << report.to_json().dump(2) << "\n";
  }
  return report.passed() ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numeric checks for invariant geometric structures"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the scenarios");

  auto* run = app.add_subcommand("run", "Run one scenario");
  std::string scenario, config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  bool timing = false;
  run->add_option("scenario", scenario, "Scenario name (see `list`)")->required();
  run->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "Write the JSON report here");
  run->add_option("--seed", seed, "Seed for randomized checks");
  run->add_option("--tolerance", tolerance, "Numeric tolerance")->check(CLI::PositiveNumber);
  run->add_flag("--timing", timing, "Record wall time in the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (list->parsed()) return list_command();
  return run_command(scenario, config_path, out_path, seed, tolerance, timing);
}
