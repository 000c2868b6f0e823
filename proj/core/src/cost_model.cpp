#include "switchopt/cost_model.hpp"

#include "switchopt/errors.hpp"

namespace switchopt {

double present_worth_factor(double inflation, double interest) {
  if (interest == -1.0)
    throw UsageError("present worth factor undefined at interest = -1");
  return (1.0 + inflation) / (1.0 + interest);
}

double present_worth_series(double inflation, double interest,
                            int horizon_years) {
  const double pw = present_worth_factor(inflation, interest);
  double sum = 0.0, term = 1.0;
  for (int t = 1; t <= horizon_years; ++t) {
    term *= pw;
    sum += term;
  }
  return sum;
}

CostBreakdown placement_cost(const SwitchPlan& plan, const CostParams& params,
                             std::span<const double> annual_loss_kw) {
  if (plan.maneuver_decisions.size() != params.maneuver_costs.size())
    throw UsageError("maneuver cost vector does not match plan length");
  if (params.horizon_years < 1)
    throw UsageError("horizon_years must be >= 1");

  CostBreakdown out;
  out.capital =
      static_cast<double>(plan.installed_switches()) * params.switch_cost;
  for (std::size_t j = 0; j < plan.maneuver_decisions.size(); ++j)
    if (plan.maneuver_decisions[j]) out.capital += params.maneuver_costs[j];

  const double pw_sum = present_worth_series(params.inflation, params.interest,
                                             params.horizon_years);
  const double annual_maintenance = params.fixed_maintenance.value_or(
      params.maintenance_fraction * out.capital);
  out.maintenance_pw = pw_sum * annual_maintenance;

  double loss_kw = 0.0;
  for (double l : annual_loss_kw) loss_kw += l;
  out.loss_pw = loss_kw * params.hours_per_year * params.loss_cost_rate * pw_sum;

  out.total = out.capital + out.maintenance_pw + out.loss_pw;
  return out;
}

}  // namespace switchopt
