#include "switchopt/placement.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <thread>

#include "switchopt/errors.hpp"

namespace switchopt {

SwitchPlan decode(std::span<const double> genotype, std::size_t n_switch,
                  std::size_t n_maneuver) {
  if (genotype.size() != n_switch + n_maneuver)
    throw UsageError("genotype length " + std::to_string(genotype.size()) +
                     " does not match candidate count " +
                     std::to_string(n_switch + n_maneuver));
  SwitchPlan plan;
  plan.switch_decisions.reserve(n_switch);
  plan.maneuver_decisions.reserve(n_maneuver);
  for (std::size_t i = 0; i < n_switch; ++i)
    plan.switch_decisions.push_back(genotype[i] >= 0.5);
  for (std::size_t j = 0; j < n_maneuver; ++j)
    plan.maneuver_decisions.push_back(genotype[n_switch + j] >= 0.5);
  return plan;
}

std::vector<double> encode(const SwitchPlan& plan) {
  std::vector<double> g;
  g.reserve(plan.switch_decisions.size() + plan.maneuver_decisions.size());
  for (bool b : plan.switch_decisions) g.push_back(b ? 1.0 : 0.0);
  for (bool b : plan.maneuver_decisions) g.push_back(b ? 1.0 : 0.0);
  return g;
}

CostParams resolve_cost_params(const Network& net, CostParams params) {
  const std::size_t m = net.maneuver_candidates().size();
  if (params.maneuver_costs.empty() && m > 0) {
    params.maneuver_costs.reserve(m);
    for (const auto& cand : net.maneuver_candidates())
      params.maneuver_costs.push_back(cand.build_cost);
  } else if (params.maneuver_costs.size() != m) {
    throw UsageError("maneuver_costs length " +
                     std::to_string(params.maneuver_costs.size()) +
                     " does not match the network's " + std::to_string(m) +
                     " maneuver candidates");
  }
  return params;
}

PlanEvaluator::PlanEvaluator(const Network& net, const CostParams& cost,
                             const ReliabilityParams& rel,
                             const PowerFlowSettings& pf)
    : net_(&net), cost_(resolve_cost_params(net, cost)), rel_(rel) {
  try {
    const auto state = solve_power_flow(net, mean_loads(net), pf);
    if (state.converged) {
      losses_ = branch_losses(state, net);
      pf_ok_ = true;
    }
  } catch (const SolverError&) {
    pf_ok_ = false;  // plans get the penalty sentinel
  }
}

EvaluatedPlan PlanEvaluator::evaluate(const SwitchPlan& plan) const {
  check_plan_shape(*net_, plan);
  EvaluatedPlan out;
  out.plan = plan;
  if (!pf_ok_) {
    out.f1 = kPenaltyObjective;
    out.f2 = kPenaltyObjective;
    return out;
  }
  out.cost = placement_cost(plan, cost_, losses_);
  out.f1 = out.cost.total;
  const EnsResult ens = ens_objective(*net_, plan, rel_);
  out.f2 = ens.f2;
  out.ens_kwh = ens.total_ens_kwh;
  return out;
}

EvaluatedPlan evaluate(const Network& net, const SwitchPlan& plan,
                       const CostParams& cost, const ReliabilityParams& rel,
                       const PowerFlowSettings& pf) {
  return PlanEvaluator(net, cost, rel, pf).evaluate(plan);
}

namespace {

SwitchPlan plan_from_index(std::uint64_t index, std::size_t n,
                           std::size_t m) {
  SwitchPlan plan;
  plan.switch_decisions.resize(n);
  plan.maneuver_decisions.resize(m);
  for (std::size_t i = 0; i < n; ++i)
    plan.switch_decisions[i] = (index >> i) & 1;
  for (std::size_t j = 0; j < m; ++j)
    plan.maneuver_decisions[j] = (index >> (n + j)) & 1;
  return plan;
}

}  // namespace

std::vector<EvaluatedPlan> exhaustive_pareto(const Network& net,
                                             const CostParams& cost,
                                             const ReliabilityParams& rel,
                                             const PowerFlowSettings& pf,
                                             int max_bits, int threads) {
  const std::size_t n = net.switch_candidates().size();
  const std::size_t m = net.maneuver_candidates().size();
  const std::size_t bits = n + m;
  if (bits > static_cast<std::size_t>(max_bits))
    throw UsageError("exhaustive enumeration over " + std::to_string(bits) +
                     " candidates exceeds the cap of " +
                     std::to_string(max_bits) + " bits");

  const PlanEvaluator evaluator(net, cost, rel, pf);
  const std::uint64_t count = std::uint64_t{1} << bits;
  std::vector<EvaluatedPlan> all(count);
  auto run = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t idx = begin; idx < end; ++idx)
      all[idx] = evaluator.evaluate(plan_from_index(idx, n, m));
  };
  if (threads <= 1 || count < 64) {
    run(0, count);
  } else {
    const std::uint64_t workers = std::min<std::uint64_t>(threads, count);
    const std::uint64_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t b = w * chunk;
      if (b >= count) break;
      pool.emplace_back(run, b, std::min(count, b + chunk));
    }
    for (auto& t : pool) t.join();
  }

  // 2D skyline sweep; equal objective vectors are mutually non-dominated
  // and all kept.
  std::vector<std::uint64_t> order(count);
  for (std::uint64_t i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
    if (all[a].f1 != all[b].f1) return all[a].f1 < all[b].f1;
    if (all[a].f2 != all[b].f2) return all[a].f2 < all[b].f2;
    return a < b;
  });
  std::vector<std::uint64_t> kept;
  double best_f1 = 0.0, best_f2 = std::numeric_limits<double>::infinity();
  for (std::uint64_t idx : order) {
    const auto& p = all[idx];
    if (p.f2 < best_f2) {
      kept.push_back(idx);
      best_f1 = p.f1;
      best_f2 = p.f2;
    } else if (p.f2 == best_f2 && p.f1 == best_f1) {
      kept.push_back(idx);  // duplicate objective vector
    }
  }
  std::sort(kept.begin(), kept.end());
  std::vector<EvaluatedPlan> front;
  front.reserve(kept.size());
  for (std::uint64_t idx : kept) front.push_back(std::move(all[idx]));
  return front;
}

std::size_t select_compromise_index(std::span<const EvaluatedPlan> front) {
  if (front.empty())
    throw UsageError("compromise selection on an empty front");
  double min1 = front[0].f1, max1 = front[0].f1;
  double min2 = front[0].f2, max2 = front[0].f2;
  for (const auto& p : front) {
    min1 = std::min(min1, p.f1);
    max1 = std::max(max1, p.f1);
    min2 = std::min(min2, p.f2);
    max2 = std::max(max2, p.f2);
  }
  const double span1 = max1 - min1, span2 = max2 - min2;
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < front.size(); ++i) {
    const double n1 = span1 > 0.0 ? (front[i].f1 - min1) / span1 : 0.0;
    const double n2 = span2 > 0.0 ? (front[i].f2 - min2) / span2 : 0.0;
    const double score = std::min(1.0 - n1, 1.0 - n2);
    if (score > best_score ||
        (score == best_score && front[i].f1 < front[best].f1)) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

const EvaluatedPlan& select_compromise(std::span<const EvaluatedPlan> front) {
  return front[select_compromise_index(front)];
}

PlacementRun optimize_placement(const Network& net, const CostParams& cost,
                                const ReliabilityParams& rel,
                                const PowerFlowSettings& pf,
                                const GAParams& ga) {
  const std::size_t n = net.switch_candidates().size();
  const std::size_t m = net.maneuver_candidates().size();
  if (n + m == 0)
    throw UsageError("network has no candidate sites to optimize");

  const PlanEvaluator evaluator(net, cost, rel, pf);
  GeneBounds bounds{std::vector<double>(n + m, 0.0),
                    std::vector<double>(n + m, 1.0)};
  const Evaluator objective = [&](std::span<const double> genotype) {
    const EvaluatedPlan ep = evaluator.evaluate(decode(genotype, n, m));
    return std::vector<double>{ep.f1, ep.f2};
  };
  EvolveResult evo = evolve(objective, bounds, ga);

  PlacementRun run;
  run.stats = std::move(evo.stats);
  run.front.reserve(evo.archive.size());
  for (const auto& ind : evo.archive)
    run.front.push_back(evaluator.evaluate(decode(ind.genotype, n, m)));
  return run;
}

}  // namespace switchopt
