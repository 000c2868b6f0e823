#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "switchopt/errors.hpp"
#include "switchopt/io.hpp"
#include "switchopt/runner.hpp"

namespace {

// Exit codes: 0 success, 1 usage/config error, 2 data/validation error,
// 3 solver failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "switchopt: Pareto-optimal placement of sectionalizing switches and "
      "maneuver points on radial distribution feeders"};
  app.require_subcommand(1);

  std::string config_path;
  std::string feeder_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool with_oracle = false;
  int max_bits = 16;
  std::string ds_bits, dt_bits;

  auto* solve = app.add_subcommand("solve", "run the multi-objective search");
  solve->add_option("--config", config_path, "run configuration file")
      ->required();
  solve->add_option("--seed", seed, "override ga.seed from the config");
  solve->add_option("--threads", threads, "override ga.threads");
  solve->add_flag("--oracle", with_oracle,
                  "also enumerate the exact front (small instances)");
  solve->add_option("--max-bits", max_bits,
                    "candidate-count cap for --oracle enumeration");

  auto* powerflow =
      app.add_subcommand("powerflow", "solve the normal-state load flow");
  powerflow->add_option("--config", config_path, "run configuration file")
      ->required();

  auto* reliability = app.add_subcommand(
      "reliability", "evaluate one plan's reliability (FMEA)");
  reliability->add_option("--config", config_path, "run configuration file")
      ->required();
  reliability->add_option("--ds", ds_bits,
                          "switch decisions as a 0/1 string in candidate-id "
                          "order (empty: none installed)");
  reliability->add_option("--dt", dt_bits,
                          "maneuver decisions as a 0/1 string (empty: none)");

  auto* oracle = app.add_subcommand(
      "oracle", "enumerate the exact Pareto front of a small instance");
  oracle->add_option("--config", config_path, "run configuration file")
      ->required();
  oracle->add_option("--max-bits", max_bits, "candidate-count cap");

  auto* validate =
      app.add_subcommand("validate", "check a feeder file's invariants");
  auto* vcfg = validate->add_option("--config", config_path,
                                    "run configuration file naming the feeder");
  validate->add_option("--feeder", feeder_path, "feeder file (bypasses config)")
      ->excludes(vcfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints message/help
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    switchopt::RunConfig cfg;
    if (validate->parsed() && !feeder_path.empty()) {
      cfg.feeder_file = feeder_path;
    } else {
      if (config_path.empty())
        throw switchopt::UsageError("--config (or --feeder) is required");
      cfg = switchopt::load_config(config_path);
    }

    if (solve->parsed()) {
      switchopt::SolveOptions options;
      options.seed_override = seed;
      options.threads_override = threads;
      options.with_oracle = with_oracle;
      options.oracle_max_bits = max_bits;
      switchopt::run_solve(cfg, options, std::cout);
    } else if (powerflow->parsed()) {
      switchopt::run_powerflow(cfg, std::cout);
    } else if (reliability->parsed()) {
      switchopt::run_reliability(cfg, ds_bits, dt_bits, std::cout);
    } else if (oracle->parsed()) {
      switchopt::run_oracle(cfg, max_bits, std::cout);
    } else if (validate->parsed()) {
      switchopt::run_validate(cfg, std::cout);
    }
    return kExitOk;
  } catch (const switchopt::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const switchopt::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const switchopt::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
