#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "switchopt/network.hpp"

namespace switchopt {

struct PowerFlowSettings {
  double tolerance = 1e-6;  // per-unit voltage change between sweeps
  int max_iterations = 100;
  /// Fixed source voltage (per-unit). When unset, each feeder source uses
  /// its node's nominal_voltage.
  std::optional<double> source_voltage;
};

struct PowerFlowState {
  std::vector<std::complex<double>> node_voltage;   // per node index, pu
  std::vector<std::complex<double>> node_current;   // load draw per node, pu
  std::vector<std::complex<double>> branch_current;  // per branch index, pu
  std::vector<double> branch_loss_kw;                // per branch index
  double total_loss_kw = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Max voltage change seen on each sweep, for convergence diagnostics.
  std::vector<double> iteration_deltas;
};

/// Complex kW + j kvar demand per load point (load_points() order).
std::vector<std::complex<double>> mean_loads(const Network& net);

/// Backward-forward sweep over every feeder. Loads are constant-PQ, taken
/// per load point in kW/kvar and converted on the network power base.
/// Non-convergence is reported through converged=false; a vanishing node
/// voltage during the current update throws SolverError.
PowerFlowState solve_power_flow(const Network& net,
                                std::span<const std::complex<double>> loads_kw,
                                const PowerFlowSettings& settings);

/// Active loss per branch, kW. Requires a converged state.
std::vector<double> branch_losses(const PowerFlowState& state,
                                  const Network& net);

/// Total active power entering all feeders from their sources, kW.
double total_source_injection_kw(const Network& net,
                                 const PowerFlowState& state);

}  // namespace switchopt
