#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "switchopt/cost_model.hpp"
#include "switchopt/moo.hpp"
#include "switchopt/network.hpp"
#include "switchopt/plan.hpp"
#include "switchopt/power_flow.hpp"
#include "switchopt/reliability.hpp"

namespace switchopt {

/// Objective value assigned to both F1 and F2 when the power flow under a
/// plan's operating state cannot be solved. Documented in the result
/// schema; such plans are reported, never silently dropped.
inline constexpr double kPenaltyObjective = 1e15;

struct EvaluatedPlan {
  SwitchPlan plan;
  double f1 = 0.0;  // deployment/operating cost, $
  double f2 = 0.0;  // monetized ENS, $/yr
  CostBreakdown cost;
  double ens_kwh = 0.0;  // plain kWh/yr sum behind f2
};

/// Real-relaxation decoding: genes live in [0,1]; gene >= 0.5 selects the
/// candidate. The first n genes map to switch decisions, the last m to
/// maneuver decisions, both in candidate-id order.
SwitchPlan decode(std::span<const double> genotype, std::size_t n_switch,
                  std::size_t n_maneuver);
std::vector<double> encode(const SwitchPlan& plan);

/// Fills maneuver_costs from the network's candidate build costs when the
/// given params leave them empty; otherwise checks the length.
CostParams resolve_cost_params(const Network& net, CostParams params);

/// Binds a network and parameter set for repeated plan evaluation.
/// Normal-state power flow is plan-independent (installed switches are
/// closed, maneuver points are open), so losses are solved once and shared.
/// Thread-safe: evaluate() is const and pure.
class PlanEvaluator {
 public:
  PlanEvaluator(const Network& net, const CostParams& cost,
                const ReliabilityParams& rel, const PowerFlowSettings& pf);

  EvaluatedPlan evaluate(const SwitchPlan& plan) const;

  bool power_flow_ok() const { return pf_ok_; }
  const std::vector<double>& normal_losses_kw() const { return losses_; }
  const Network& network() const { return *net_; }
  const CostParams& cost_params() const { return cost_; }
  const ReliabilityParams& reliability_params() const { return rel_; }

 private:
  const Network* net_;
  CostParams cost_;
  ReliabilityParams rel_;
  std::vector<double> losses_;
  bool pf_ok_ = false;
};

/// One-shot evaluation pipeline: power flow at mean loads, losses into F1,
/// FMEA into F2.
EvaluatedPlan evaluate(const Network& net, const SwitchPlan& plan,
                       const CostParams& cost, const ReliabilityParams& rel,
                       const PowerFlowSettings& pf);

/// Exact Pareto set by full enumeration of all 2^(n+m) plans. Throws
/// UsageError when n+m exceeds max_bits. Results are in ascending
/// plan-index order (bit i of the index drives candidate i, switches
/// first). Parallelizes over indices with deterministic assembly.
std::vector<EvaluatedPlan> exhaustive_pareto(const Network& net,
                                             const CostParams& cost,
                                             const ReliabilityParams& rel,
                                             const PowerFlowSettings& pf,
                                             int max_bits = 16,
                                             int threads = 1);

/// Max-min membership rule over front-normalized objectives: each member
/// scores min_k (1 - normalized_k); the best score wins, ties broken by
/// lower F1, then by position.
std::size_t select_compromise_index(std::span<const EvaluatedPlan> front);
const EvaluatedPlan& select_compromise(std::span<const EvaluatedPlan> front);

struct PlacementRun {
  std::vector<EvaluatedPlan> front;  // archive front in discovery order
  std::vector<GenerationStats> stats;
};

/// Runs the evolutionary engine on the placement problem and maps the
/// returned genotype archive back to evaluated plans.
PlacementRun optimize_placement(const Network& net, const CostParams& cost,
                                const ReliabilityParams& rel,
                                const PowerFlowSettings& pf,
                                const GAParams& ga);

}  // namespace switchopt
