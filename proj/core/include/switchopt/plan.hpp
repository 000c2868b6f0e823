#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace switchopt {

class Network;

/// Binary placement decisions. Positions follow the network's canonical
/// candidate order (switch_candidates() / maneuver_candidates(), id-sorted):
/// switch_decisions[i] = DS_i, maneuver_decisions[j] = DT_j.
struct SwitchPlan {
  std::vector<bool> switch_decisions;
  std::vector<bool> maneuver_decisions;

  std::size_t installed_switches() const {
    std::size_t k = 0;
    for (bool b : switch_decisions) k += b;
    return k;
  }
  std::size_t built_maneuvers() const {
    std::size_t k = 0;
    for (bool b : maneuver_decisions) k += b;
    return k;
  }
  bool operator==(const SwitchPlan&) const = default;
};

/// All-false plan sized for the network's candidates.
SwitchPlan empty_plan(const Network& net);
/// All-true plan sized for the network's candidates.
SwitchPlan full_plan(const Network& net);

/// "0"/"1" strings in candidate-id order, as written to result files.
std::string to_bitstring(const std::vector<bool>& decisions);
std::vector<bool> parse_bitstring(const std::string& bits);

/// Throws UsageError unless the plan's vectors match the network's
/// candidate counts.
void check_plan_shape(const Network& net, const SwitchPlan& plan);

}  // namespace switchopt
