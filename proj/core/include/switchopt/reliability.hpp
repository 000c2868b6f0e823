#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "switchopt/network.hpp"
#include "switchopt/plan.hpp"

namespace switchopt {

struct ReliabilityParams {
  double remote_switch_time = 0.05;   // h, isolate/restore via installed RCS
  double manual_section_time = 1.0;   // h, sectionalizing without an RCS
  bool include_maneuver_backfeed = true;
};

/// How one component failure reaches one load point.
enum class ImpactClass {
  in_zone_repair,     // shares the fault's isolation zone: waits for repair
  upstream_switched,  // re-supplied from the source once the zone is isolated
  backfed_switched,   // re-supplied through a built maneuver point
  unaffected,
};

const char* to_string(ImpactClass c);

struct LoadPointReliability {
  double lambda_s = 0.0;  // failures / yr
  double u_s = 0.0;       // outage hours / yr
  double r_s = 0.0;       // hours / failure; 0 when lambda_s = 0
  double ens = 0.0;       // kWh / yr
};

/// Isolation-zone partition of all branches under a plan. Zone boundaries
/// are the installed switches (sitting at each branch's source end) and the
/// feeder breakers. Load points and transformers attached at a feeder
/// source carry the per-feeder bus pseudo-zone.
struct ZonePartition {
  std::vector<int> zone_of_branch;  // per branch index
  std::vector<int> bus_zone;        // per feeder: pseudo-zone id of the bus
  int zone_count = 0;
  int zone_of_node(const Network& net, int node) const;
};

ZonePartition build_zones(const Network& net, const SwitchPlan& plan);

/// Classifies the effect of failing `failed_id` (a branch or transformer id)
/// on load point `lp_id` and returns the outage duration in hours
/// (0 for unaffected).
std::pair<ImpactClass, double> classify_impact(const Network& net,
                                               const SwitchPlan& plan,
                                               const std::string& failed_id,
                                               const std::string& lp_id,
                                               const ReliabilityParams& params);

/// Failure-mode sums of Eqs. (8)-(11) for one load point. The per-mode
/// outage duration comes from classify_impact; branch rates are
/// failure_rate_per_km * length. ENS uses max(mean_active, 0) so embedded
/// generation modeled as negative demand contributes no negative ENS.
LoadPointReliability load_point_reliability(const Network& net,
                                            const SwitchPlan& plan,
                                            const std::string& lp_id,
                                            const ReliabilityParams& params);

/// Class-weighted interruption cost IC = sum AIC(c) * mix(c), $/kWh.
double interruption_cost_rate(const LoadPoint& lp);

struct EnsBreakdownRow {
  int load_point = 0;  // index into net.load_points()
  LoadPointReliability rel;
  double ic = 0.0;    // $/kWh
  double k = 1.0;     // importance factor
  double cost = 0.0;  // ic * ens * k, $/yr
};

struct EnsResult {
  double f2 = 0.0;             // monetized objective, $/yr
  double total_ens_kwh = 0.0;  // plain kWh/yr sum
  std::vector<EnsBreakdownRow> rows;
};

/// Second objective F2 = sum IC_i * ENS_i * K_i over all load points, with
/// the per-load-point breakdown used for section reports.
EnsResult ens_objective(const Network& net, const SwitchPlan& plan,
                        const ReliabilityParams& params);

struct MonteCarloResult {
  std::vector<double> ens_mean;  // kWh/yr per load point
  std::vector<double> ens_se;    // standard error of the mean
  std::uint64_t failure_events = 0;
};

/// Sequential Monte Carlo over `years` simulated years: exponential times
/// to failure per component, fixed repair/switching durations from the
/// same impact classification the analytical engine uses. Bit-reproducible
/// for a given seed. With sample_loads, each event draws the interrupted
/// demand from the load point's normal distribution instead of its mean.
MonteCarloResult monte_carlo_ens(const Network& net, const SwitchPlan& plan,
                                 const ReliabilityParams& params,
                                 std::uint64_t years, std::uint64_t seed,
                                 bool sample_loads = false);

/// Demand draw: mean_active + sigma_active * z for a standard normal z,
/// truncated at zero toward the mean's sign (consumption never goes
/// negative; embedded generation never turns into consumption).
double sample_load(const LoadPoint& lp, double z);

}  // namespace switchopt
