#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "isoflow/scenario.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int run(const std::string& config, std::optional<double> tol, const std::string& out_path) {
  std::vector<isoflow::Scenario> scenarios = isoflow::load_scenarios(config);
  if (scenarios.empty()) throw isoflow::ConfigError("config '" + config + "' has no scenarios");
  for (auto& s : scenarios) {
    if (tol) s.tol.resid_abs = *tol;
    isoflow::validate_scenario(s);
  }
  std::vector<isoflow::ScenarioReport> reports;
  bool pass = true;
  for (const auto& s : scenarios) {
    reports.push_back(isoflow::run_scenario(s));
    pass = pass && reports.back().pass();
  }
  const std::string text = isoflow::format_reports(reports);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw isoflow::ConfigError("cannot write '" + out_path + "'");
    out << text;
  }
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-window verification of isometric semigroup pairs"};
  app.set_version_flag("--version", std::string(isoflow::kToolVersion));
  app.require_subcommand(1);

  std::string config;
  std::string out_path;
  double tol_value = 0.0;
  CLI::App* run_cmd = app.add_subcommand("run", "Run every scenario in a config file");
  run_cmd->add_option("config", config, "Scenario config file")->required();
  CLI::Option* tol_opt =
      run_cmd->add_option("--tol", tol_value, "Override the absolute residual tolerance")
          ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_subcommand("list", "List the construction catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  // ISOFLOW_SEED is deliberately ignored: no computation draws random numbers.
  try {
    if (app.got_subcommand("list")) {
      std::cout << isoflow::list_catalog();
      return kExitPass;
    }
    const std::optional<double> tol =
        tol_opt->count() > 0 ? std::optional<double>(tol_value) : std::nullopt;
    return run(config, tol, out_path);
  } catch (const isoflow::ConfigError& e) {
    std::cerr << "isoflow: " << e.what() << "\n";
    return kExitUsage;
  } catch (const isoflow::Error& e) {
    std::cerr << "isoflow: " << e.what() << "\n";
    return kExitUsage;
  }
}
