#include "switchopt/reliability.hpp"

#include <algorithm>
#include <cmath>

#include "switchopt/errors.hpp"
#include "switchopt/random.hpp"

namespace switchopt {

const char* to_string(ImpactClass c) {
  switch (c) {
    case ImpactClass::in_zone_repair: return "in_zone_repair";
    case ImpactClass::upstream_switched: return "upstream_switched";
    case ImpactClass::backfed_switched: return "backfed_switched";
    case ImpactClass::unaffected: return "unaffected";
  }
  return "?";
}

int ZonePartition::zone_of_node(const Network& net, int node) const {
  const int pb = net.parent_branch(node);
  return pb < 0 ? bus_zone[net.feeder_of_node(node)] : zone_of_branch[pb];
}

ZonePartition build_zones(const Network& net, const SwitchPlan& plan) {
  check_plan_shape(net, plan);
  ZonePartition zp;
  zp.zone_of_branch.assign(net.branch_count(), -1);
  zp.bus_zone.assign(net.feeder_count(), -1);

  int next = 0;
  for (int f = 0; f < net.feeder_count(); ++f) {
    int root_zone = -1;  // shared by switchless branches leaving the bus
    for (int bi : net.feeder_branches(f)) {
      const int cand = net.switch_candidate_on_branch(bi);
      const bool switched = cand >= 0 && plan.switch_decisions[cand];
      if (switched) {
        zp.zone_of_branch[bi] = next++;
        continue;
      }
      const int from = net.node_index(net.branches()[bi].from_node);
      if (net.parent_branch(from) < 0) {
        if (root_zone < 0) root_zone = next++;
        zp.zone_of_branch[bi] = root_zone;
      } else {
        zp.zone_of_branch[bi] = zp.zone_of_branch[net.parent_branch(from)];
      }
    }
  }
  for (int f = 0; f < net.feeder_count(); ++f) zp.bus_zone[f] = next++;
  zp.zone_count = next;
  return zp;
}

namespace {

// Everything classification needs, built once per (network, plan).
struct ImpactContext {
  ZonePartition zones;
  std::vector<int> zone_root_branch;    // -1 for bus pseudo-zones
  std::vector<char> zone_root_switched;  // source-side boundary is an RCS
  std::vector<std::vector<int>> lp_paths;  // branch indices, distal first
  // Built maneuver endpoints as node indices.
  std::vector<std::pair<int, int>> ties;

  ImpactContext(const Network& net, const SwitchPlan& plan,
                const ReliabilityParams& params)
      : zones(build_zones(net, plan)), params_(params) {
    zone_root_branch.assign(zones.zone_count, -1);
    zone_root_switched.assign(zones.zone_count, 0);
    for (int f = 0; f < net.feeder_count(); ++f) {
      for (int bi : net.feeder_branches(f)) {
        const int z = zones.zone_of_branch[bi];
        if (zone_root_branch[z] >= 0) continue;  // topo order: first is root
        zone_root_branch[z] = bi;
        const int cand = net.switch_candidate_on_branch(bi);
        zone_root_switched[z] = cand >= 0 && plan.switch_decisions[cand];
      }
    }
    lp_paths.resize(net.load_points().size());
    for (std::size_t li = 0; li < net.load_points().size(); ++li) {
      int node = net.load_point_nodes()[li];
      while (net.parent_branch(node) >= 0) {
        const int pb = net.parent_branch(node);
        lp_paths[li].push_back(pb);
        node = net.node_index(net.branches()[pb].from_node);
      }
    }
    for (std::size_t j = 0; j < net.maneuver_candidates().size(); ++j) {
      if (!plan.maneuver_decisions[j]) continue;
      const auto& [a, b] = net.maneuver_candidates()[j].between;
      ties.emplace_back(net.node_index(a), net.node_index(b));
    }
  }

  bool head_switch_installed(const Network& net, const SwitchPlan& plan,
                             int branch) const {
    const int cand = net.switch_candidate_on_branch(branch);
    return cand >= 0 && plan.switch_decisions[cand];
  }

  // A built tie whose same-feeder endpoint lies inside the island hanging
  // from island_root reconnects that island to a live feeder.
  bool island_has_backfeed(const Network& net, int island_root) const {
    for (const auto& [a, b] : ties) {
      if (net.node_in_subtree(a, island_root)) return true;
      if (net.node_in_subtree(b, island_root)) return true;
    }
    return false;
  }

  std::pair<ImpactClass, double> classify(const Network& net,
                                          const SwitchPlan& plan,
                                          int failed_zone, int failed_feeder,
                                          double repair_time, int lp) const {
    const int lp_node = net.load_point_nodes()[lp];
    if (net.feeder_of_node(lp_node) != failed_feeder)
      return {ImpactClass::unaffected, 0.0};
    const int lp_zone = zones.zone_of_node(net, lp_node);
    if (lp_zone == failed_zone)
      return {ImpactClass::in_zone_repair, repair_time};

    const auto& path = lp_paths[lp];
    const bool bus_fault = failed_zone == zones.bus_zone[failed_feeder];
    int island_root = -1;
    if (bus_fault) {
      // The whole feeder hangs below the faulted bus.
      island_root = path.empty() ? -1 : path.back();
    } else {
      for (std::size_t i = 0; i < path.size(); ++i) {
        if (zones.zone_of_branch[path[i]] == failed_zone) {
          // i >= 1: the load point's own zone already compared unequal.
          island_root = path[i - 1];
          break;
        }
      }
      if (island_root < 0) {
        // Fault zone is not on the way to the source: the load point is
        // re-supplied from upstream once the zone is cut off.
        const double dur = zone_root_switched[failed_zone]
                               ? params_.remote_switch_time
                               : params_.manual_section_time;
        return {ImpactClass::upstream_switched, dur};
      }
    }
    if (island_root < 0)  // load point at the faulted bus with no path
      return {ImpactClass::in_zone_repair, repair_time};

    if (params_.include_maneuver_backfeed &&
        island_has_backfeed(net, island_root)) {
      const double dur = head_switch_installed(net, plan, island_root)
                             ? params_.remote_switch_time
                             : params_.manual_section_time;
      return {ImpactClass::backfed_switched, dur};
    }
    return {ImpactClass::in_zone_repair, repair_time};
  }

 private:
  ReliabilityParams params_;
};

struct FailureMode {
  int feeder = -1;
  int zone = -1;
  double rate = 0.0;
  double repair_time = 0.0;
};

std::vector<FailureMode> enumerate_failure_modes(const Network& net,
                                                 const ImpactContext& ctx) {
  std::vector<FailureMode> modes;
  modes.reserve(net.branches().size() + net.transformers().size());
  for (int bi = 0; bi < net.branch_count(); ++bi) {
    const auto& b = net.branches()[bi];
    const int from = net.node_index(b.from_node);
    modes.push_back({net.feeder_of_node(from), ctx.zones.zone_of_branch[bi],
                     b.failure_rate_per_km * b.length, b.repair_time});
  }
  for (const auto& t : net.transformers()) {
    const int node = net.node_index(t.at_node);
    modes.push_back({net.feeder_of_node(node),
                     ctx.zones.zone_of_node(net, node), t.failure_rate,
                     t.repair_time});
  }
  return modes;
}

LoadPointReliability accumulate_lp(const Network& net, const SwitchPlan& plan,
                                   const ImpactContext& ctx,
                                   const std::vector<FailureMode>& modes,
                                   int lp) {
  LoadPointReliability out;
  for (const auto& mode : modes) {
    if (mode.rate <= 0.0) continue;
    const auto [cls, dur] =
        ctx.classify(net, plan, mode.zone, mode.feeder, mode.repair_time, lp);
    if (cls == ImpactClass::unaffected) continue;
    out.lambda_s += mode.rate;
    out.u_s += mode.rate * dur;
  }
  out.r_s = out.lambda_s > 0.0 ? out.u_s / out.lambda_s : 0.0;
  out.ens = std::max(net.load_points()[lp].mean_active, 0.0) * out.u_s;
  return out;
}

}  // namespace

std::pair<ImpactClass, double> classify_impact(const Network& net,
                                               const SwitchPlan& plan,
                                               const std::string& failed_id,
                                               const std::string& lp_id,
                                               const ReliabilityParams& params) {
  check_plan_shape(net, plan);
  const int comp = net.component_index(failed_id);
  if (comp < 0)
    throw DataError("unknown component id '" + failed_id + "'");
  const int lp = net.load_point_index(lp_id);

  const ImpactContext ctx(net, plan, params);
  int feeder, zone;
  double repair;
  if (comp < net.branch_count()) {
    const auto& b = net.branches()[comp];
    feeder = net.feeder_of_node(net.node_index(b.from_node));
    zone = ctx.zones.zone_of_branch[comp];
    repair = b.repair_time;
  } else {
    const auto& t = net.transformers()[comp - net.branch_count()];
    const int node = net.node_index(t.at_node);
    feeder = net.feeder_of_node(node);
    zone = ctx.zones.zone_of_node(net, node);
    repair = t.repair_time;
  }
  return ctx.classify(net, plan, zone, feeder, repair, lp);
}

LoadPointReliability load_point_reliability(const Network& net,
                                            const SwitchPlan& plan,
                                            const std::string& lp_id,
                                            const ReliabilityParams& params) {
  check_plan_shape(net, plan);
  const int lp = net.load_point_index(lp_id);
  const ImpactContext ctx(net, plan, params);
  const auto modes = enumerate_failure_modes(net, ctx);
  return accumulate_lp(net, plan, ctx, modes, lp);
}

double interruption_cost_rate(const LoadPoint& lp) {
  double ic = 0.0;
  for (std::size_t c = 0; c < lp.class_mix.size(); ++c)
    ic += lp.class_interrupt_cost[c] * lp.class_mix[c];
  return ic;
}

EnsResult ens_objective(const Network& net, const SwitchPlan& plan,
                        const ReliabilityParams& params) {
  check_plan_shape(net, plan);
  const ImpactContext ctx(net, plan, params);
  const auto modes = enumerate_failure_modes(net, ctx);

  EnsResult out;
  out.rows.reserve(net.load_points().size());
  for (std::size_t li = 0; li < net.load_points().size(); ++li) {
    EnsBreakdownRow row;
    row.load_point = static_cast<int>(li);
    row.rel = accumulate_lp(net, plan, ctx, modes, static_cast<int>(li));
    row.ic = interruption_cost_rate(net.load_points()[li]);
    row.k = net.load_points()[li].importance;
    row.cost = row.ic * row.rel.ens * row.k;
    out.f2 += row.cost;
    out.total_ens_kwh += row.rel.ens;
    out.rows.push_back(row);
  }
  return out;
}

double sample_load(const LoadPoint& lp, double z) {
  const double x = lp.mean_active + lp.sigma_active * z;
  return lp.mean_active >= 0.0 ? std::max(0.0, x) : std::min(0.0, x);
}

MonteCarloResult monte_carlo_ens(const Network& net, const SwitchPlan& plan,
                                 const ReliabilityParams& params,
                                 std::uint64_t years, std::uint64_t seed,
                                 bool sample_loads) {
  check_plan_shape(net, plan);
  if (years < 1) throw UsageError("monte carlo horizon must be >= 1 year");

  const ImpactContext ctx(net, plan, params);
  const auto modes = enumerate_failure_modes(net, ctx);
  const std::size_t n_lp = net.load_points().size();

  // Static per-plan impact matrix: outage hours of (mode, load point).
  std::vector<std::vector<double>> hours(modes.size(),
                                         std::vector<double>(n_lp, 0.0));
  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    if (modes[mi].rate <= 0.0) continue;
    for (std::size_t li = 0; li < n_lp; ++li) {
      const auto [cls, dur] =
          ctx.classify(net, plan, modes[mi].zone, modes[mi].feeder,
                       modes[mi].repair_time, static_cast<int>(li));
      if (cls != ImpactClass::unaffected) hours[mi][li] = dur;
    }
  }

  const std::size_t n_batches =
      static_cast<std::size_t>(std::min<std::uint64_t>(years, 1000));
  const double batch_years = static_cast<double>(years) / n_batches;
  // ens_batch[li][b]: kWh accumulated in batch b for load point li.
  std::vector<std::vector<double>> ens_batch(
      n_lp, std::vector<double>(n_batches, 0.0));

  Rng rng(seed);
  MonteCarloResult out;
  const double horizon = static_cast<double>(years);
  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    const double rate = modes[mi].rate;
    if (rate <= 0.0) continue;
    for (double t = exponential_time(rng, rate); t < horizon;
         t += exponential_time(rng, rate)) {
      ++out.failure_events;
      const auto b = static_cast<std::size_t>(
          std::min<double>(t / horizon * n_batches, n_batches - 1));
      for (std::size_t li = 0; li < n_lp; ++li) {
        const double dur = hours[mi][li];
        if (dur <= 0.0) continue;
        const double p =
            sample_loads
                ? sample_load(net.load_points()[li], standard_normal(rng))
                : std::max(net.load_points()[li].mean_active, 0.0);
        ens_batch[li][b] += std::max(p, 0.0) * dur;
      }
    }
  }

  out.ens_mean.assign(n_lp, 0.0);
  out.ens_se.assign(n_lp, 0.0);
  for (std::size_t li = 0; li < n_lp; ++li) {
    double total = 0.0;
    for (double x : ens_batch[li]) total += x;
    out.ens_mean[li] = total / horizon;
    if (n_batches > 1) {
      const double mean_batch = total / n_batches;
      double ss = 0.0;
      for (double x : ens_batch[li]) ss += (x - mean_batch) * (x - mean_batch);
      const double sd_batch = std::sqrt(ss / (n_batches - 1));
      // Batch totals -> annual-rate standard error.
      out.ens_se[li] = sd_batch / (batch_years * std::sqrt(double(n_batches)));
    }
  }
  return out;
}

}  // namespace switchopt
