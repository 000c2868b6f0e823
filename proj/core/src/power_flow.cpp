#include "switchopt/power_flow.hpp"

#include <algorithm>
#include <cmath>

#include "switchopt/errors.hpp"

namespace switchopt {

std::vector<std::complex<double>> mean_loads(const Network& net) {
  std::vector<std::complex<double>> out;
  out.reserve(net.load_points().size());
  for (const auto& lp : net.load_points())
    out.emplace_back(lp.mean_active, lp.mean_reactive);
  return out;
}

PowerFlowState solve_power_flow(const Network& net,
                                std::span<const std::complex<double>> loads_kw,
                                const PowerFlowSettings& settings) {
  if (loads_kw.size() != net.load_points().size())
    throw UsageError("loads vector does not match load point count");
  if (settings.tolerance <= 0.0)
    throw UsageError("power flow tolerance must be > 0");
  if (settings.max_iterations < 1)
    throw UsageError("max_iterations must be >= 1");

  const int n_nodes = net.node_count();
  const int n_branches = net.branch_count();

  // Aggregate per-node complex demand in per-unit.
  std::vector<std::complex<double>> node_power(n_nodes, 0.0);
  const auto& lp_nodes = net.load_point_nodes();
  for (std::size_t li = 0; li < loads_kw.size(); ++li)
    node_power[lp_nodes[li]] += loads_kw[li] / net.s_base_kva();

  std::vector<std::complex<double>> impedance(n_branches);
  for (int bi = 0; bi < n_branches; ++bi)
    impedance[bi] = {net.branches()[bi].resistance,
                     net.branches()[bi].reactance};

  PowerFlowState state;
  state.node_voltage.assign(n_nodes, 0.0);
  state.node_current.assign(n_nodes, 0.0);
  state.branch_current.assign(n_branches, 0.0);
  state.branch_loss_kw.assign(n_branches, 0.0);

  auto source_voltage = [&](int feeder) {
    return settings.source_voltage.value_or(
        net.nodes()[net.feeder_source(feeder)].nominal_voltage);
  };

  // Flat start: every node at its feeder's source voltage.
  for (int f = 0; f < net.feeder_count(); ++f) {
    const std::complex<double> vs{source_voltage(f), 0.0};
    for (int node : net.feeder_nodes(f)) state.node_voltage[node] = vs;
  }

  auto& node_current = state.node_current;
  auto update_node_current = [&](int node) {
    const auto s = node_power[node];
    if (s == std::complex<double>(0.0, 0.0)) {
      node_current[node] = 0.0;
      return;
    }
    const auto v = state.node_voltage[node];
    if (std::abs(v) < 1e-9)
      throw SolverError("zero voltage at node '" + net.nodes()[node].id +
                        "' during current update");
    node_current[node] = std::conj(s / v);
  };

  std::vector<std::complex<double>> prev(state.node_voltage);
  for (int it = 1; it <= settings.max_iterations; ++it) {
    // Backward: node currents at present voltages, then branch currents
    // accumulated from the feeder ends toward the source.
    for (int f = 0; f < net.feeder_count(); ++f) {
      const auto& order = net.feeder_branches(f);
      for (int node : net.feeder_nodes(f)) update_node_current(node);
      for (auto rit = order.rbegin(); rit != order.rend(); ++rit) {
        const int bi = *rit;
        const int to = net.node_index(net.branches()[bi].to_node);
        std::complex<double> acc = node_current[to];
        for (int child : net.child_branches(to)) acc += state.branch_current[child];
        state.branch_current[bi] = acc;
      }
      // Forward: voltage drop from the fixed source outward.
      const int src = net.feeder_source(f);
      state.node_voltage[src] = {source_voltage(f), 0.0};
      for (int bi : order) {
        const auto& b = net.branches()[bi];
        state.node_voltage[net.node_index(b.to_node)] =
            state.node_voltage[net.node_index(b.from_node)] -
            impedance[bi] * state.branch_current[bi];
      }
    }

    double delta = 0.0;
    for (int node = 0; node < n_nodes; ++node)
      delta = std::max(delta, std::abs(state.node_voltage[node] - prev[node]));
    state.iteration_deltas.push_back(delta);
    state.iterations = it;
    prev = state.node_voltage;
    if (delta < settings.tolerance) {
      state.converged = true;
      break;
    }
  }

  // Make stored currents consistent with the final voltages so that KCL
  // (Eq. 2 style accumulation) holds exactly on the returned state.
  for (int f = 0; f < net.feeder_count(); ++f) {
    for (int node : net.feeder_nodes(f)) update_node_current(node);
    const auto& order = net.feeder_branches(f);
    for (auto rit = order.rbegin(); rit != order.rend(); ++rit) {
      const int bi = *rit;
      const int to = net.node_index(net.branches()[bi].to_node);
      std::complex<double> acc = node_current[to];
      for (int child : net.child_branches(to)) acc += state.branch_current[child];
      state.branch_current[bi] = acc;
    }
  }

  state.total_loss_kw = 0.0;
  for (int bi = 0; bi < n_branches; ++bi) {
    const double loss_pu =
        net.branches()[bi].resistance * std::norm(state.branch_current[bi]);
    state.branch_loss_kw[bi] = loss_pu * net.s_base_kva();
    state.total_loss_kw += state.branch_loss_kw[bi];
  }
  return state;
}

std::vector<double> branch_losses(const PowerFlowState& state,
                                  const Network& net) {
  if (!state.converged)
    throw SolverError("branch losses requested on an unconverged power flow");
  std::vector<double> out(net.branch_count());
  for (int bi = 0; bi < net.branch_count(); ++bi)
    out[bi] = net.branches()[bi].resistance *
              std::norm(state.branch_current[bi]) * net.s_base_kva();
  return out;
}

double total_source_injection_kw(const Network& net,
                                 const PowerFlowState& state) {
  double total = 0.0;
  for (int f = 0; f < net.feeder_count(); ++f) {
    const int src = net.feeder_source(f);
    // Branch flows plus any demand attached directly at the source bus.
    std::complex<double> supplied = state.node_current[src];
    for (int bi : net.child_branches(src)) supplied += state.branch_current[bi];
    const auto v = state.node_voltage[src];
    total += (v * std::conj(supplied)).real() * net.s_base_kva();
  }
  return total;
}

}  // namespace switchopt
