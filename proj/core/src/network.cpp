#include "switchopt/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "switchopt/errors.hpp"

namespace switchopt {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::source: return "source";
    case NodeKind::junction: return "junction";
    case NodeKind::load: return "load";
  }
  return "?";
}

const char* to_string(Construction c) {
  return c == Construction::overhead ? "overhead" : "underground";
}

const char* to_string(CandidateKind k) {
  return k == CandidateKind::sectionalizer ? "switch" : "maneuver";
}

const char* to_string(CustomerClass c) {
  switch (c) {
    case CustomerClass::res: return "res";
    case CustomerClass::com: return "com";
    case CustomerClass::ind: return "ind";
    case CustomerClass::agr: return "agr";
    case CustomerClass::gen: return "gen";
  }
  return "?";
}

std::string ValidationReport::joined() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

namespace {

struct Adjacency {
  // node index -> list of (neighbor node, branch index)
  std::vector<std::vector<std::pair<int, int>>> edges;
};

template <typename T>
std::unordered_map<std::string, int> index_by_id(const std::vector<T>& items,
                                                 const char* what,
                                                 ValidationReport& report) {
  std::unordered_map<std::string, int> map;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto [it, inserted] = map.emplace(items[i].id, static_cast<int>(i));
    if (!inserted) {
      report.violations.push_back(std::string("duplicate ") + what + " id '" +
                                  items[i].id + "'");
    }
  }
  return map;
}

// Walks back along parent pointers to name the branches of one cycle.
std::vector<int> extract_cycle(int u, int v, int closing_branch,
                               const std::vector<int>& parent_node,
                               const std::vector<int>& parent_edge) {
  std::vector<int> path_u, path_v;
  std::vector<int> anc_u{u};
  for (int x = u; parent_node[x] >= 0; x = parent_node[x])
    anc_u.push_back(parent_node[x]);
  std::vector<bool> on_u(parent_node.size(), false);
  for (int x : anc_u) on_u[x] = true;
  int meet = v;
  while (!on_u[meet]) {
    path_v.push_back(parent_edge[meet]);
    meet = parent_node[meet];
  }
  for (int x = u; x != meet; x = parent_node[x]) path_u.push_back(parent_edge[x]);
  std::vector<int> cycle = path_u;
  cycle.insert(cycle.end(), path_v.rbegin(), path_v.rend());
  cycle.push_back(closing_branch);
  return cycle;
}

}  // namespace

ValidationReport validate_network(const NetworkData& data) {
  ValidationReport report;

  std::size_t graph_id_violations = report.violations.size();
  auto node_map = index_by_id(data.nodes, "node", report);
  auto branch_map = index_by_id(data.branches, "branch", report);
  bool graph_ids_ok = report.violations.size() == graph_id_violations;
  index_by_id(data.transformers, "transformer", report);
  auto lp_map = index_by_id(data.load_points, "load point", report);
  index_by_id(data.candidates, "candidate", report);

  if (data.s_base_kva <= 0.0)
    report.violations.push_back("s_base_kva must be positive");

  // Field-level invariants.
  for (const auto& b : data.branches) {
    if (b.resistance < 0.0)
      report.violations.push_back("branch '" + b.id + "': resistance < 0");
    if (b.reactance < 0.0)
      report.violations.push_back("branch '" + b.id + "': reactance < 0");
    if (b.length <= 0.0)
      report.violations.push_back("branch '" + b.id + "': length must be > 0");
    if (b.failure_rate_per_km < 0.0)
      report.violations.push_back("branch '" + b.id + "': failure rate < 0");
    if (b.repair_time < 0.0)
      report.violations.push_back("branch '" + b.id + "': repair time < 0");
    if (!node_map.count(b.from_node)) {
      report.violations.push_back("branch '" + b.id + "': unknown from_node '" +
                                  b.from_node + "'");
      graph_ids_ok = false;
    }
    if (!node_map.count(b.to_node)) {
      report.violations.push_back("branch '" + b.id + "': unknown to_node '" +
                                  b.to_node + "'");
      graph_ids_ok = false;
    }
    if (b.from_node == b.to_node) {
      report.violations.push_back("branch '" + b.id + "': self loop");
      graph_ids_ok = false;
    }
  }
  for (const auto& t : data.transformers) {
    if (t.failure_rate < 0.0)
      report.violations.push_back("transformer '" + t.id + "': failure rate < 0");
    if (t.repair_time <= 0.0)
      report.violations.push_back("transformer '" + t.id +
                                  "': repair time must be > 0");
    if (!node_map.count(t.at_node))
      report.violations.push_back("transformer '" + t.id +
                                  "': unknown at_node '" + t.at_node + "'");
  }
  for (const auto& lp : data.load_points) {
    if (!node_map.count(lp.at_node))
      report.violations.push_back("load point '" + lp.id +
                                  "': unknown at_node '" + lp.at_node + "'");
    if (lp.sigma_active < 0.0)
      report.violations.push_back("load point '" + lp.id + "': sigma < 0");
    double mix_sum = 0.0;
    for (std::size_t c = 0; c < lp.class_mix.size(); ++c) {
      const double f = lp.class_mix[c];
      if (f < 0.0 || f > 1.0)
        report.violations.push_back(
            "load point '" + lp.id + "': class_mix fraction for " +
            to_string(kCustomerClasses[c]) + " outside [0,1]");
      mix_sum += f;
    }
    if (std::abs(mix_sum - 1.0) > 1e-9)
      report.violations.push_back("load point '" + lp.id +
                                  "': class_mix sums to " +
                                  std::to_string(mix_sum) + ", expected 1");
    for (double c : lp.class_interrupt_cost)
      if (c < 0.0) {
        report.violations.push_back("load point '" + lp.id +
                                    "': negative interruption cost");
        break;
      }
    if (lp.importance < 0.0)
      report.violations.push_back("load point '" + lp.id + "': importance < 0");
  }

  // One sectionalizer per branch at most; two on one branch would be
  // indistinguishable in the zone model.
  std::unordered_map<std::string, std::string> seen_branch;
  for (const auto& cs : data.candidates) {
    if (cs.kind != CandidateKind::sectionalizer) continue;
    if (cs.build_cost < 0.0)
      report.violations.push_back("candidate '" + cs.id + "': build cost < 0");
    auto [it, inserted] = seen_branch.emplace(cs.on_branch, cs.id);
    if (!inserted)
      report.violations.push_back("candidates '" + it->second + "' and '" +
                                  cs.id + "' both target branch '" +
                                  cs.on_branch + "'");
  }

  // Graph analysis needs resolvable node/branch ids.
  if (!graph_ids_ok) return report;

  const int n_nodes = static_cast<int>(data.nodes.size());
  Adjacency adj;
  adj.edges.resize(n_nodes);
  for (std::size_t bi = 0; bi < data.branches.size(); ++bi) {
    const auto& b = data.branches[bi];
    const int u = node_map.at(b.from_node);
    const int v = node_map.at(b.to_node);
    adj.edges[u].push_back({v, static_cast<int>(bi)});
    adj.edges[v].push_back({u, static_cast<int>(bi)});
  }

  // Connected components; each must hold exactly one source and be a tree.
  std::vector<int> comp(n_nodes, -1);
  std::vector<int> parent_node(n_nodes, -1), parent_edge(n_nodes, -1);
  int n_comp = 0;
  bool cycle_reported = false;
  for (int start = 0; start < n_nodes; ++start) {
    if (comp[start] >= 0) continue;
    const int c = n_comp++;
    int comp_nodes = 0, comp_edges_twice = 0, sources = 0;
    std::vector<int> stack{start};
    comp[start] = c;
    std::vector<std::string> source_ids;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      ++comp_nodes;
      comp_edges_twice += static_cast<int>(adj.edges[u].size());
      if (data.nodes[u].kind == NodeKind::source) {
        ++sources;
        source_ids.push_back(data.nodes[u].id);
      }
      for (auto [v, e] : adj.edges[u]) {
        if (comp[v] < 0) {
          comp[v] = c;
          parent_node[v] = u;
          parent_edge[v] = e;
          stack.push_back(v);
        } else if (e != parent_edge[u] && !cycle_reported &&
                   parent_edge[v] != e) {
          // Non-tree edge: name the branches of the cycle it closes.
          auto cyc = extract_cycle(u, v, e, parent_node, parent_edge);
          std::string msg = "cycle through branches:";
          std::sort(cyc.begin(), cyc.end());
          cyc.erase(std::unique(cyc.begin(), cyc.end()), cyc.end());
          for (int be : cyc) msg += " '" + data.branches[be].id + "'";
          report.violations.push_back(msg);
          cycle_reported = true;
        }
      }
    }
    const int comp_edges = comp_edges_twice / 2;
    if (comp_edges != comp_nodes - 1 && !cycle_reported)
      report.violations.push_back("component containing node '" +
                                  data.nodes[start].id + "' is not a tree");
    if (sources == 0)
      report.violations.push_back("feeder containing node '" +
                                  data.nodes[start].id + "' has no source");
    if (sources > 1) {
      std::string msg = "feeder has multiple sources:";
      for (const auto& s : source_ids) msg += " '" + s + "'";
      report.violations.push_back(msg);
    }
  }

  // Candidate placement rules.
  for (const auto& cs : data.candidates) {
    if (cs.kind == CandidateKind::sectionalizer) {
      if (!branch_map.count(cs.on_branch))
        report.violations.push_back("candidate '" + cs.id +
                                    "': unknown branch '" + cs.on_branch + "'");
    } else {
      if (cs.build_cost < 0.0)
        report.violations.push_back("candidate '" + cs.id +
                                    "': build cost < 0");
      const auto& [a, b] = cs.between;
      if (!node_map.count(a) || !node_map.count(b)) {
        report.violations.push_back("candidate '" + cs.id +
                                    "': unknown maneuver endpoint");
      } else if (comp[node_map.at(a)] == comp[node_map.at(b)]) {
        report.violations.push_back("candidate '" + cs.id +
                                    "': maneuver endpoints '" + a + "' and '" +
                                    b + "' are already connected");
      }
    }
  }

  (void)lp_map;
  return report;
}

Network Network::build(NetworkData data) {
  ValidationReport report = validate_network(data);
  if (!report.ok())
    throw DataError("network validation failed: " + report.joined());

  Network net;
  net.data_ = std::move(data);
  auto& d = net.data_;

  for (std::size_t i = 0; i < d.nodes.size(); ++i)
    net.node_by_id_[d.nodes[i].id] = static_cast<int>(i);
  for (std::size_t i = 0; i < d.transformers.size(); ++i)
    net.transformer_by_id_[d.transformers[i].id] = static_cast<int>(i);
  for (std::size_t i = 0; i < d.load_points.size(); ++i)
    net.lp_by_id_[d.load_points[i].id] = static_cast<int>(i);

  const int n_nodes = static_cast<int>(d.nodes.size());
  const int n_branches = static_cast<int>(d.branches.size());

  std::vector<std::vector<std::pair<int, int>>> adj(n_nodes);
  // Temporary index on pre-reorientation ids.
  std::unordered_map<std::string, int> node_idx = net.node_by_id_;
  for (int bi = 0; bi < n_branches; ++bi) {
    const auto& b = d.branches[bi];
    const int u = node_idx.at(b.from_node);
    const int v = node_idx.at(b.to_node);
    adj[u].push_back({v, bi});
    adj[v].push_back({u, bi});
  }

  net.parent_branch_.assign(n_nodes, -1);
  net.feeder_of_node_.assign(n_nodes, -1);
  net.child_branches_.assign(n_nodes, {});
  net.tin_.assign(n_nodes, -1);
  net.tout_.assign(n_nodes, -1);

  // Collect sources ordered by node id so feeder numbering is canonical.
  std::vector<int> sources;
  for (int i = 0; i < n_nodes; ++i)
    if (d.nodes[i].kind == NodeKind::source) sources.push_back(i);
  std::sort(sources.begin(), sources.end(), [&](int a, int b) {
    return d.nodes[a].id < d.nodes[b].id;
  });

  int clock = 0;
  for (int src : sources) {
    const int feeder = static_cast<int>(net.feeder_sources_.size());
    net.feeder_sources_.push_back(src);
    net.feeder_branches_.emplace_back();
    net.feeder_nodes_.emplace_back();

    // Iterative DFS; children visited in branch-id order for determinism.
    struct Frame {
      int node;
      std::size_t next_child;
    };
    std::vector<Frame> stack;
    auto open_node = [&](int u, int via_branch) {
      net.feeder_of_node_[u] = feeder;
      net.parent_branch_[u] = via_branch;
      net.feeder_nodes_[feeder].push_back(u);
      net.tin_[u] = clock++;
      // Reorient and register child branches.
      auto& kids = net.child_branches_[u];
      for (auto [v, bi] : adj[u]) {
        if (net.feeder_of_node_[v] >= 0 || bi == via_branch) continue;
        kids.push_back(bi);
      }
      std::sort(kids.begin(), kids.end(), [&](int a, int b) {
        return d.branches[a].id < d.branches[b].id;
      });
      stack.push_back({u, 0});
    };
    open_node(src, -1);
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next_child >= net.child_branches_[f.node].size()) {
        net.tout_[f.node] = clock++;
        stack.pop_back();
        continue;
      }
      const int bi = net.child_branches_[f.node][f.next_child++];
      auto& b = d.branches[bi];
      // from_node must be the source side.
      if (node_idx.at(b.to_node) == f.node) std::swap(b.from_node, b.to_node);
      net.feeder_branches_[feeder].push_back(bi);
      open_node(node_idx.at(b.to_node), bi);
    }
  }

  for (std::size_t i = 0; i < d.branches.size(); ++i)
    net.branch_by_id_[d.branches[i].id] = static_cast<int>(i);

  // Split candidates by kind, canonical id order.
  for (const auto& cs : d.candidates)
    (cs.kind == CandidateKind::sectionalizer ? net.switch_candidates_
                                             : net.maneuver_candidates_)
        .push_back(cs);
  auto by_id = [](const CandidateSite& a, const CandidateSite& b) {
    return a.id < b.id;
  };
  std::sort(net.switch_candidates_.begin(), net.switch_candidates_.end(), by_id);
  std::sort(net.maneuver_candidates_.begin(), net.maneuver_candidates_.end(),
            by_id);

  net.switch_on_branch_.assign(n_branches, -1);
  for (std::size_t si = 0; si < net.switch_candidates_.size(); ++si)
    net.switch_on_branch_[net.branch_by_id_.at(
        net.switch_candidates_[si].on_branch)] = static_cast<int>(si);

  net.lp_node_.reserve(d.load_points.size());
  for (const auto& lp : d.load_points)
    net.lp_node_.push_back(net.node_by_id_.at(lp.at_node));

  return net;
}

namespace {
int lookup(const std::unordered_map<std::string, int>& map,
           const std::string& id, const char* what) {
  auto it = map.find(id);
  if (it == map.end())
    throw DataError(std::string("unknown ") + what + " id '" + id + "'");
  return it->second;
}
}  // namespace

int Network::node_index(const std::string& id) const {
  return lookup(node_by_id_, id, "node");
}

int Network::branch_index(const std::string& id) const {
  return lookup(branch_by_id_, id, "branch");
}

int Network::load_point_index(const std::string& id) const {
  return lookup(lp_by_id_, id, "load point");
}

int Network::component_index(const std::string& id) const {
  if (auto it = branch_by_id_.find(id); it != branch_by_id_.end())
    return it->second;
  if (auto it = transformer_by_id_.find(id); it != transformer_by_id_.end())
    return branch_count() + it->second;
  return -1;
}

bool Network::node_in_subtree(int node, int branch) const {
  const int root = node_by_id_.at(data_.branches[branch].to_node);
  return tin_[root] <= tin_[node] && tout_[node] <= tout_[root];
}

std::vector<std::string> Network::downstream_load_points(
    const std::string& branch_id) const {
  const int bi = branch_index(branch_id);
  std::vector<std::string> out;
  for (std::size_t li = 0; li < data_.load_points.size(); ++li)
    if (node_in_subtree(lp_node_[li], bi)) out.push_back(data_.load_points[li].id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Network::path_to_source(
    const std::string& node_id) const {
  int node = node_index(node_id);
  std::vector<std::string> out;
  while (parent_branch_[node] >= 0) {
    const auto& b = data_.branches[parent_branch_[node]];
    out.push_back(b.id);
    node = node_by_id_.at(b.from_node);
  }
  return out;
}

}  // namespace switchopt
