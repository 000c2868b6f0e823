#pragma once

#include <optional>
#include <span>
#include <vector>

#include "switchopt/plan.hpp"

namespace switchopt {

struct CostParams {
  double switch_cost = 4700.0;          // CS, $ per installed switch
  std::vector<double> maneuver_costs;   // CT_j, $ per maneuver candidate
  double maintenance_fraction = 0.02;   // annual maintenance as share of capital
  std::optional<double> fixed_maintenance;  // overrides the fraction when set
  double inflation = 0.0;               // Infr, per year
  double interest = 0.0;                // Intr, per year
  int horizon_years = 1;                // ny
  double loss_cost_rate = 0.0;          // K_Loss, $/kWh
  double hours_per_year = 8760.0;
};

/// One-year conversion factor P_w = (1 + Infr) / (1 + Intr).
double present_worth_factor(double inflation, double interest);

/// Sum of P_w^t for t = 1..horizon; the discount weight applied to every
/// annual recurring cost.
double present_worth_series(double inflation, double interest,
                            int horizon_years);

struct CostBreakdown {
  double capital = 0.0;         // switches + maneuver points
  double maintenance_pw = 0.0;  // discounted maintenance over the horizon
  double loss_pw = 0.0;         // discounted energy-loss cost over the horizon
  double total = 0.0;           // F1
};

/// Deployment objective F1: capital for the installed devices, discounted
/// maintenance, and the discounted cost of annual network losses.
/// `annual_loss_kw` is the per-branch active loss under normal operation.
CostBreakdown placement_cost(const SwitchPlan& plan, const CostParams& params,
                             std::span<const double> annual_loss_kw);

}  // namespace switchopt
