#include "switchopt/plan.hpp"

#include "switchopt/errors.hpp"
#include "switchopt/network.hpp"

namespace switchopt {

SwitchPlan empty_plan(const Network& net) {
  return {std::vector<bool>(net.switch_candidates().size(), false),
          std::vector<bool>(net.maneuver_candidates().size(), false)};
}

SwitchPlan full_plan(const Network& net) {
  return {std::vector<bool>(net.switch_candidates().size(), true),
          std::vector<bool>(net.maneuver_candidates().size(), true)};
}

std::string to_bitstring(const std::vector<bool>& decisions) {
  std::string s;
  s.reserve(decisions.size());
  for (bool b : decisions) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<bool> parse_bitstring(const std::string& bits) {
  std::vector<bool> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw DataError("plan bitstring may contain only 0 and 1, got '" +
                      bits + "'");
    out.push_back(c == '1');
  }
  return out;
}

void check_plan_shape(const Network& net, const SwitchPlan& plan) {
  if (plan.switch_decisions.size() != net.switch_candidates().size() ||
      plan.maneuver_decisions.size() != net.maneuver_candidates().size())
    throw UsageError("plan shape does not match the network's candidates (" +
                     std::to_string(plan.switch_decisions.size()) + "/" +
                     std::to_string(net.switch_candidates().size()) +
                     " switches, " +
                     std::to_string(plan.maneuver_decisions.size()) + "/" +
                     std::to_string(net.maneuver_candidates().size()) +
                     " maneuver points)");
}

}  // namespace switchopt
