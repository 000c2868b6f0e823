#pragma once

#include <filesystem>
#include <optional>

#include "switchopt/cost_model.hpp"
#include "switchopt/moo.hpp"
#include "switchopt/network.hpp"
#include "switchopt/power_flow.hpp"
#include "switchopt/reliability.hpp"

namespace switchopt {

/// Parses a feeder file (JSON, schema in docs/feeder_format.md) into the
/// raw record. Throws DataError with file/field context on any problem.
NetworkData load_network_data(const std::filesystem::path& path);

/// Parse + validate + build. Validation failures are listed exhaustively
/// in the thrown DataError.
Network load_network(const std::filesystem::path& path);

/// Writes the normalized form of a network: arrays sorted by id, every
/// field explicit, branches in their reoriented direction. Loading the
/// emitted file reproduces an identical network.
void save_network(const Network& net, const std::filesystem::path& path);

struct VoltageLimits {
  double v_min = 0.95;
  double v_max = 1.05;
};

struct RunConfig {
  std::filesystem::path feeder_file;
  std::filesystem::path output_dir = "out";
  CostParams cost;
  /// Set when the config file carries cost.switch_cost explicitly;
  /// otherwise a uniform switch-candidate build cost from the feeder file
  /// takes precedence over the built-in default.
  std::optional<double> switch_cost_from_config;
  ReliabilityParams reliability;
  PowerFlowSettings powerflow;
  VoltageLimits limits;
  GAParams ga;
};

/// Parses a run configuration (JSON, schema in docs/config_format.md).
/// Relative paths are resolved against the config file's directory.
/// Invariant violations (odd population size, non-positive tolerance, ...)
/// throw UsageError before any computation.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace switchopt
