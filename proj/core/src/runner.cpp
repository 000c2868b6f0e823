#include "switchopt/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "switchopt/csv.hpp"
#include "switchopt/errors.hpp"

namespace switchopt {

namespace {

namespace fs = std::filesystem;

// Tracks files written by one run; removes them unless committed.
class OutputGuard {
 public:
  explicit OutputGuard(const fs::path& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec && !fs::is_directory(dir_))
      throw UsageError("cannot create output directory '" + dir_.string() +
                       "'");
  }
  ~OutputGuard() {
    if (committed_) return;
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
  std::ofstream open(const std::string& name) {
    const fs::path p = dir_ / name;
    written_.push_back(p);
    std::ofstream out(p);
    if (!out) throw UsageError("cannot write '" + p.string() + "'");
    return out;
  }
  fs::path path(const std::string& name) const { return dir_ / name; }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row.push_back(',');
    row += cells[i];
  }
  row.push_back('\n');
  return row;
}

void write_plan_records(std::ofstream& out,
                        const std::vector<EvaluatedPlan>& plans) {
  out << "ds,dt,f1,f2,capital,maintenance_pw,loss_pw,ens_kwh\n";
  for (const auto& p : plans)
    out << csv_row({to_bitstring(p.plan.switch_decisions),
                    to_bitstring(p.plan.maneuver_decisions),
                    format_double(p.f1), format_double(p.f2),
                    format_double(p.cost.capital),
                    format_double(p.cost.maintenance_pw),
                    format_double(p.cost.loss_pw), format_double(p.ens_kwh)});
}

void write_ens_breakdown(std::ofstream& out, const Network& net,
                         const EnsResult& ens) {
  out << "load_point_id,lambda_s,u_s,r_s,ens,ic,k,cost_contribution\n";
  for (const auto& row : ens.rows)
    out << csv_row({net.load_points()[row.load_point].id,
                    format_double(row.rel.lambda_s), format_double(row.rel.u_s),
                    format_double(row.rel.r_s), format_double(row.rel.ens),
                    format_double(row.ic), format_double(row.k),
                    format_double(row.cost)});
}

// Canonical record order for result files: by objectives, then bitstrings.
void sort_plans(std::vector<EvaluatedPlan>& plans) {
  std::sort(plans.begin(), plans.end(),
            [](const EvaluatedPlan& a, const EvaluatedPlan& b) {
              if (a.f1 != b.f1) return a.f1 < b.f1;
              if (a.f2 != b.f2) return a.f2 < b.f2;
              if (a.plan.switch_decisions != b.plan.switch_decisions)
                return a.plan.switch_decisions < b.plan.switch_decisions;
              return a.plan.maneuver_decisions < b.plan.maneuver_decisions;
            });
}

void write_front_svg(std::ofstream& out, const std::vector<EvaluatedPlan>& front,
                     std::size_t compromise) {
  const double width = 640, height = 480, margin = 60;
  double min1 = front[0].f1, max1 = front[0].f1;
  double min2 = front[0].f2, max2 = front[0].f2;
  for (const auto& p : front) {
    min1 = std::min(min1, p.f1);
    max1 = std::max(max1, p.f1);
    min2 = std::min(min2, p.f2);
    max2 = std::max(max2, p.f2);
  }
  const double span1 = max1 > min1 ? max1 - min1 : 1.0;
  const double span2 = max2 > min2 ? max2 - min2 : 1.0;
  auto sx = [&](double f1) {
    return margin + (f1 - min1) / span1 * (width - 2 * margin);
  };
  auto sy = [&](double f2) {
    return height - margin - (f2 - min2) / span2 * (height - 2 * margin);
  };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"" << height - margin
      << "\" x2=\"" << width - margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\""
      << margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "  <text x=\"" << width / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-size=\"14\">F1 (cost)</text>\n";
  out << "  <text x=\"18\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
      << height / 2 << ")\">F2 (monetized ENS)</text>\n";
  out << "  <text x=\"" << margin << "\" y=\"" << height - margin + 18
      << "\" font-size=\"11\">" << format_double(min1) << "</text>\n";
  out << "  <text x=\"" << width - margin << "\" y=\"" << height - margin + 18
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(max1)
      << "</text>\n";
  out << "  <text x=\"" << margin - 4 << "\" y=\"" << height - margin
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(min2)
      << "</text>\n";
  out << "  <text x=\"" << margin - 4 << "\" y=\"" << margin + 4
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(max2)
      << "</text>\n";
  for (std::size_t i = 0; i < front.size(); ++i) {
    if (i == compromise) continue;
    out << "  <circle cx=\"" << format_double(sx(front[i].f1)) << "\" cy=\""
        << format_double(sy(front[i].f2))
        << "\" r=\"4\" fill=\"none\" stroke=\"#d33\" stroke-width=\"1.5\"/>\n";
  }
  const auto& c = front[compromise];
  out << "  <rect x=\"" << format_double(sx(c.f1) - 5) << "\" y=\""
      << format_double(sy(c.f2) - 5)
      << "\" width=\"10\" height=\"10\" fill=\"#23d\"/>\n";
  out << "</svg>\n";
}

SwitchPlan plan_from_bits(const Network& net, const std::string& ds,
                          const std::string& dt) {
  SwitchPlan plan{parse_bitstring(ds), parse_bitstring(dt)};
  if (plan.switch_decisions.size() != net.switch_candidates().size() ||
      plan.maneuver_decisions.size() != net.maneuver_candidates().size())
    throw DataError(
        "plan bitstrings (" + std::to_string(plan.switch_decisions.size()) +
        "/" + std::to_string(plan.maneuver_decisions.size()) +
        ") do not match the network's candidates (" +
        std::to_string(net.switch_candidates().size()) + "/" +
        std::to_string(net.maneuver_candidates().size()) + ")");
  return plan;
}

}  // namespace

CostParams effective_cost_params(const Network& net, const RunConfig& cfg) {
  CostParams params = cfg.cost;
  if (!cfg.switch_cost_from_config && !net.switch_candidates().empty()) {
    const double first = net.switch_candidates().front().build_cost;
    for (const auto& cand : net.switch_candidates())
      if (cand.build_cost != first)
        throw DataError(
            "switch candidates carry non-uniform build costs; set "
            "cost.switch_cost in the run configuration to decide");
    params.switch_cost = first;
  }
  return resolve_cost_params(net, params);
}

void run_validate(const RunConfig& cfg, std::ostream& log) {
  const NetworkData data = load_network_data(cfg.feeder_file);
  const ValidationReport report = validate_network(data);
  if (report.ok()) {
    const Network net = Network::build(data);
    log << "ok: " << net.nodes().size() << " nodes, " << net.branches().size()
        << " branches, " << net.transformers().size() << " transformers, "
        << net.load_points().size() << " load points, "
        << net.switch_candidates().size() << " switch candidates, "
        << net.maneuver_candidates().size() << " maneuver candidates, "
        << net.feeder_count() << " feeder(s)\n";
    return;
  }
  for (const auto& v : report.violations) log << "violation: " << v << "\n";
  throw DataError("network validation failed with " +
                  std::to_string(report.violations.size()) + " violation(s)");
}

void run_powerflow(const RunConfig& cfg, std::ostream& log) {
  const Network net = load_network(cfg.feeder_file);
  OutputGuard guard(cfg.output_dir);
  const PowerFlowState state =
      solve_power_flow(net, mean_loads(net), cfg.powerflow);
  if (!state.converged)
    throw SolverError("power flow did not converge within " +
                      std::to_string(cfg.powerflow.max_iterations) +
                      " iterations");
  {
    auto out = guard.open("voltages.csv");
    out << "node_id,v_real,v_imag,v_mag,in_limits\n";
    for (std::size_t ni = 0; ni < net.nodes().size(); ++ni) {
      const auto v = state.node_voltage[ni];
      const double mag = std::abs(v);
      const bool ok = mag >= cfg.limits.v_min && mag <= cfg.limits.v_max;
      out << csv_row({net.nodes()[ni].id, format_double(v.real()),
                      format_double(v.imag()), format_double(mag),
                      ok ? "1" : "0"});
    }
  }
  {
    auto out = guard.open("losses.csv");
    out << "branch_id,i_mag,loss_kw\n";
    for (int bi = 0; bi < net.branch_count(); ++bi)
      out << csv_row({net.branches()[bi].id,
                      format_double(std::abs(state.branch_current[bi])),
                      format_double(state.branch_loss_kw[bi])});
  }
  guard.commit();
  log << "converged in " << state.iterations << " iteration(s), total loss "
      << format_double(state.total_loss_kw) << " kW\n";
}

void run_reliability(const RunConfig& cfg, const std::string& ds_bits,
                     const std::string& dt_bits, std::ostream& log) {
  const Network net = load_network(cfg.feeder_file);
  const SwitchPlan plan = plan_from_bits(net, ds_bits, dt_bits);
  OutputGuard guard(cfg.output_dir);
  const EnsResult ens = ens_objective(net, plan, cfg.reliability);
  {
    auto out = guard.open("ens.csv");
    write_ens_breakdown(out, net, ens);
  }
  guard.commit();
  log << "f2 " << format_double(ens.f2) << " $/yr, total ENS "
      << format_double(ens.total_ens_kwh) << " kWh/yr\n";
}

void run_solve(const RunConfig& cfg, const SolveOptions& options,
               std::ostream& log) {
  GAParams ga = cfg.ga;
  if (options.seed_override) ga.seed = *options.seed_override;
  if (options.threads_override) {
    if (*options.threads_override < 1)
      throw UsageError("threads must be >= 1");
    ga.threads = *options.threads_override;
  }

  const Network net = load_network(cfg.feeder_file);
  const CostParams cost = effective_cost_params(net, cfg);
  OutputGuard guard(cfg.output_dir);

  PlacementRun run =
      optimize_placement(net, cost, cfg.reliability, cfg.powerflow, ga);
  sort_plans(run.front);
  const std::size_t compromise = select_compromise_index(run.front);

  {
    auto out = guard.open("pareto.csv");
    write_plan_records(out, run.front);
  }
  {
    nlohmann::ordered_json doc;
    doc["seed"] = ga.seed;
    doc["penalty_objective"] = kPenaltyObjective;
    doc["records"] = nlohmann::ordered_json::array();
    for (const auto& p : run.front)
      doc["records"].push_back(
          {{"ds", to_bitstring(p.plan.switch_decisions)},
           {"dt", to_bitstring(p.plan.maneuver_decisions)},
           {"f1", p.f1},
           {"f2", p.f2},
           {"capital", p.cost.capital},
           {"maintenance_pw", p.cost.maintenance_pw},
           {"loss_pw", p.cost.loss_pw},
           {"ens_kwh", p.ens_kwh}});
    doc["compromise_index"] = compromise;
    auto out = guard.open("pareto.json");
    out << doc.dump(2) << '\n';
  }
  {
    auto out = guard.open("stats.csv");
    out << "generation,front0_size,hypervolume,best_f1,best_f2\n";
    for (const auto& s : run.stats)
      out << csv_row({std::to_string(s.generation),
                      std::to_string(s.front0_size),
                      format_double(s.hypervolume), format_double(s.best_f1),
                      format_double(s.best_f2)});
  }
  const EvaluatedPlan& chosen = run.front[compromise];
  {
    auto out = guard.open("compromise.txt");
    out << "ds " << to_bitstring(chosen.plan.switch_decisions) << "\n"
        << "dt " << to_bitstring(chosen.plan.maneuver_decisions) << "\n"
        << "f1 " << format_double(chosen.f1) << "\n"
        << "f2 " << format_double(chosen.f2) << "\n"
        << "capital " << format_double(chosen.cost.capital) << "\n"
        << "maintenance_pw " << format_double(chosen.cost.maintenance_pw)
        << "\n"
        << "loss_pw " << format_double(chosen.cost.loss_pw) << "\n"
        << "ens_kwh " << format_double(chosen.ens_kwh) << "\n";
  }
  {
    const EnsResult ens = ens_objective(net, chosen.plan, cfg.reliability);
    auto out = guard.open("ens.csv");
    write_ens_breakdown(out, net, ens);
  }
  {
    auto out = guard.open("pareto.svg");
    write_front_svg(out, run.front, compromise);
  }

  const std::size_t bits =
      net.switch_candidates().size() + net.maneuver_candidates().size();
  if (options.with_oracle) {
    if (bits > static_cast<std::size_t>(options.oracle_max_bits))
      throw UsageError("--oracle requested but " + std::to_string(bits) +
                       " candidates exceed the enumeration cap of " +
                       std::to_string(options.oracle_max_bits));
    auto true_front = exhaustive_pareto(net, cost, cfg.reliability,
                                        cfg.powerflow, options.oracle_max_bits,
                                        ga.threads);
    sort_plans(true_front);
    auto out = guard.open("true_front.csv");
    write_plan_records(out, true_front);
    std::size_t dominated = 0;
    for (const auto& p : run.front)
      for (const auto& t : true_front)
        if (t.f1 <= p.f1 && t.f2 <= p.f2 && (t.f1 < p.f1 || t.f2 < p.f2)) {
          ++dominated;
          break;
        }
    log << "oracle: true front has " << true_front.size()
        << " plan(s); returned front members dominated by it: " << dominated
        << "\n";
  }

  guard.commit();
  log << "front size " << run.front.size() << ", compromise f1 "
      << format_double(chosen.f1) << ", f2 " << format_double(chosen.f2)
      << "\n";
}

void run_oracle(const RunConfig& cfg, int max_bits, std::ostream& log) {
  const Network net = load_network(cfg.feeder_file);
  const CostParams cost = effective_cost_params(net, cfg);
  OutputGuard guard(cfg.output_dir);
  auto front = exhaustive_pareto(net, cost, cfg.reliability, cfg.powerflow,
                                 max_bits, cfg.ga.threads);
  sort_plans(front);
  {
    auto out = guard.open("true_front.csv");
    write_plan_records(out, front);
  }
  guard.commit();
  log << "true front: " << front.size() << " plan(s)\n";
}

}  // namespace switchopt
