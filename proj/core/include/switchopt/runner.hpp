#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "switchopt/io.hpp"
#include "switchopt/placement.hpp"

namespace switchopt {

/// CLI-facing orchestration. Every run_* function writes its artifacts into
/// config.output_dir, removes partial outputs on failure, and throws
/// UsageError / DataError / SolverError for the caller to map to exit codes
/// (1 / 2 / 3).

struct SolveOptions {
  std::optional<std::uint64_t> seed_override;
  std::optional<int> threads_override;
  bool with_oracle = false;  // also write true_front.csv when small enough
  int oracle_max_bits = 16;
};

/// Effective switch cost: config override, else the uniform build cost of
/// the feeder's switch candidates, else the built-in default. Throws
/// DataError when the file carries non-uniform switch costs and the config
/// does not decide.
CostParams effective_cost_params(const Network& net, const RunConfig& cfg);

/// Prints the validation report; throws DataError if any violation exists.
void run_validate(const RunConfig& cfg, std::ostream& log);

/// Solves the normal-state power flow and writes voltages.csv, losses.csv.
void run_powerflow(const RunConfig& cfg, std::ostream& log);

/// Evaluates one plan's reliability and writes ens.csv. The bitstrings use
/// candidate-id order; empty strings mean "nothing installed".
void run_reliability(const RunConfig& cfg, const std::string& ds_bits,
                     const std::string& dt_bits, std::ostream& log);

/// Full optimization: writes pareto.csv, pareto.json, stats.csv,
/// compromise.txt, ens.csv (for the compromise plan) and pareto.svg;
/// true_front.csv as well when with_oracle is set and the instance is
/// small enough.
void run_solve(const RunConfig& cfg, const SolveOptions& options,
               std::ostream& log);

/// Exhaustive enumeration only: writes true_front.csv.
void run_oracle(const RunConfig& cfg, int max_bits, std::ostream& log);

}  // namespace switchopt
