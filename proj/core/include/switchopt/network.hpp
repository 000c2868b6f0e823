#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace switchopt {

enum class NodeKind { source, junction, load };
enum class Construction { overhead, underground };
enum class CandidateKind { sectionalizer, maneuver };

/// Customer classes of Eq. (7): residential, commercial, industrial,
/// agricultural, general.
enum class CustomerClass { res, com, ind, agr, gen };
inline constexpr std::array<CustomerClass, 5> kCustomerClasses = {
    CustomerClass::res, CustomerClass::com, CustomerClass::ind,
    CustomerClass::agr, CustomerClass::gen};

const char* to_string(NodeKind k);
const char* to_string(Construction c);
const char* to_string(CandidateKind k);
const char* to_string(CustomerClass c);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::junction;
  double nominal_voltage = 1.0;  // per-unit
};

struct Branch {
  std::string id;
  std::string from_node;  // source side after reorientation
  std::string to_node;
  double resistance = 0.0;  // per-unit
  double reactance = 0.0;   // per-unit
  double length = 0.0;      // km
  Construction construction = Construction::overhead;
  double failure_rate_per_km = 0.0;  // failures / yr / km
  double repair_time = 0.0;          // hours
};

struct TransformerUnit {
  std::string id;
  std::string at_node;
  double failure_rate = 0.0;  // failures / yr
  double repair_time = 0.0;   // hours
};

/// Per-class values are stored densely in kCustomerClasses order.
struct LoadPoint {
  std::string id;
  std::string at_node;
  double mean_active = 0.0;    // kW; negative models embedded generation
  double sigma_active = 0.0;   // kW
  double mean_reactive = 0.0;  // kvar
  std::array<double, 5> class_mix{};             // fractions, sum to 1
  std::array<double, 5> class_interrupt_cost{};  // $/kWh per class
  double importance = 1.0;                       // K_i
};

struct CandidateSite {
  std::string id;
  CandidateKind kind = CandidateKind::sectionalizer;
  std::string on_branch;                      // sectionalizer only
  std::pair<std::string, std::string> between;  // maneuver only
  double build_cost = 0.0;                    // $
};

/// Raw network record as ingested from a feeder file, before orientation
/// and index construction.
struct NetworkData {
  double s_base_kva = 1000.0;  // power base for kW <-> per-unit
  std::vector<Node> nodes;
  std::vector<Branch> branches;
  std::vector<TransformerUnit> transformers;
  std::vector<LoadPoint> load_points;
  std::vector<CandidateSite> candidates;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string joined() const;
};

/// Checks every structural invariant: unique ids, resolvable references,
/// one source per feeder, radiality (tree per feeder), reachability,
/// class-mix normalization, sign constraints, candidate placement rules.
/// Violations are data, not exceptions.
ValidationReport validate_network(const NetworkData& data);

/// Immutable, indexed radial network. Branches are reoriented during build
/// so that from_node is always the source side; all queries are by integer
/// index with id lookup helpers. Safe to share across threads.
class Network {
 public:
  /// Validates, reorients and indexes. Throws DataError listing every
  /// violation if validation fails.
  static Network build(NetworkData data);

  double s_base_kva() const { return data_.s_base_kva; }
  const std::vector<Node>& nodes() const { return data_.nodes; }
  const std::vector<Branch>& branches() const { return data_.branches; }
  const std::vector<TransformerUnit>& transformers() const {
    return data_.transformers;
  }
  const std::vector<LoadPoint>& load_points() const {
    return data_.load_points;
  }
  /// Candidates split by kind, each sorted by id. This order defines the
  /// DS / DT decision-vector positions everywhere (files, plans, reports).
  const std::vector<CandidateSite>& switch_candidates() const {
    return switch_candidates_;
  }
  const std::vector<CandidateSite>& maneuver_candidates() const {
    return maneuver_candidates_;
  }

  int node_index(const std::string& id) const;
  int branch_index(const std::string& id) const;
  int load_point_index(const std::string& id) const;
  /// -1 if the id names no branch/transformer. Branch indices come first:
  /// failure-mode index = branch index, or branches().size() + transformer
  /// index.
  int component_index(const std::string& id) const;

  int node_count() const { return static_cast<int>(data_.nodes.size()); }
  int branch_count() const { return static_cast<int>(data_.branches.size()); }

  /// Parent branch feeding the node; -1 for source nodes.
  int parent_branch(int node) const { return parent_branch_[node]; }
  /// Child branches leaving the node, ordered by branch id.
  const std::vector<int>& child_branches(int node) const {
    return child_branches_[node];
  }
  int feeder_of_node(int node) const { return feeder_of_node_[node]; }
  int feeder_count() const { return static_cast<int>(feeder_sources_.size()); }
  int feeder_source(int feeder) const { return feeder_sources_[feeder]; }
  /// Branches of one feeder in topological order (parents first).
  const std::vector<int>& feeder_branches(int feeder) const {
    return feeder_branches_[feeder];
  }
  const std::vector<int>& feeder_nodes(int feeder) const {
    return feeder_nodes_[feeder];
  }

  /// True iff `node` lies in the subtree hanging from `branch` (to-side).
  bool node_in_subtree(int node, int branch) const;

  /// Installed-switch candidate sitting on the branch, -1 if none.
  int switch_candidate_on_branch(int branch) const {
    return switch_on_branch_[branch];
  }
  /// Node indices of each load point, aligned with load_points().
  const std::vector<int>& load_point_nodes() const { return lp_node_; }

  /// Load points whose unique path to the source traverses the branch.
  /// Returned sorted by load-point id.
  std::vector<std::string> downstream_load_points(
      const std::string& branch_id) const;

  /// Branch ids from the node up to its feeder source, distal first.
  /// Empty for a source node. Throws DataError for unknown ids.
  std::vector<std::string> path_to_source(const std::string& node_id) const;

 private:
  Network() = default;

  NetworkData data_;
  std::vector<CandidateSite> switch_candidates_;
  std::vector<CandidateSite> maneuver_candidates_;

  std::unordered_map<std::string, int> node_by_id_;
  std::unordered_map<std::string, int> branch_by_id_;
  std::unordered_map<std::string, int> lp_by_id_;
  std::unordered_map<std::string, int> transformer_by_id_;

  std::vector<int> parent_branch_;              // per node
  std::vector<std::vector<int>> child_branches_;  // per node
  std::vector<int> feeder_of_node_;             // per node
  std::vector<int> feeder_sources_;             // per feeder
  std::vector<std::vector<int>> feeder_branches_;
  std::vector<std::vector<int>> feeder_nodes_;
  std::vector<int> tin_, tout_;       // DFS intervals for subtree tests
  std::vector<int> switch_on_branch_;  // per branch, candidate index or -1
  std::vector<int> lp_node_;           // per load point
};

}  // namespace switchopt
