#include "switchopt/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "switchopt/errors.hpp"

namespace switchopt {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("failed to parse '" + path.string() + "': " + e.what());
  }
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& ctx) {
  if (!obj.is_object())
    throw DataError(ctx + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw DataError(ctx + ": unknown field '" + key + "'");
}

const json& require(const json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw DataError(ctx + ": missing field '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& ctx) {
  if (!v.is_number())
    throw DataError(ctx + ": expected a number");
  return v.get<double>();
}

double number_field(const json& obj, const char* key, const std::string& ctx) {
  return number(require(obj, key, ctx), ctx + "." + key);
}

double number_or(const json& obj, const char* key, double fallback,
                 const std::string& ctx) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, ctx + "." + key);
}

std::string string_field(const json& obj, const char* key,
                         const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_string())
    throw DataError(ctx + "." + key + ": expected a string");
  return v.get<std::string>();
}

int class_index(const std::string& name, const std::string& ctx) {
  for (std::size_t c = 0; c < kCustomerClasses.size(); ++c)
    if (name == to_string(kCustomerClasses[c])) return static_cast<int>(c);
  throw DataError(ctx + ": unknown customer class '" + name + "'");
}

std::array<double, 5> class_map(const json& obj, const std::string& ctx) {
  std::array<double, 5> out{};
  if (!obj.is_object())
    throw DataError(ctx + ": expected an object keyed by customer class");
  for (const auto& [key, value] : obj.items())
    out[class_index(key, ctx)] = number(value, ctx + "." + key);
  return out;
}

}  // namespace

NetworkData load_network_data(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  const std::string ctx = path.filename().string();
  check_keys(doc, {"base", "nodes", "branches", "transformers", "load_points",
                   "candidates"},
             ctx);

  NetworkData data;
  if (doc.contains("base")) {
    check_keys(doc["base"], {"s_base_kva"}, ctx + ".base");
    data.s_base_kva = number_or(doc["base"], "s_base_kva", 1000.0, ctx + ".base");
  }

  for (const auto& jn : require(doc, "nodes", ctx)) {
    const std::string nctx = ctx + ".nodes[" + std::to_string(data.nodes.size()) + "]";
    check_keys(jn, {"id", "kind", "nominal_voltage"}, nctx);
    Node n;
    n.id = string_field(jn, "id", nctx);
    const std::string kind = string_field(jn, "kind", nctx);
    if (kind == "source") n.kind = NodeKind::source;
    else if (kind == "junction") n.kind = NodeKind::junction;
    else if (kind == "load") n.kind = NodeKind::load;
    else throw DataError(nctx + ": unknown node kind '" + kind + "'");
    n.nominal_voltage = number_or(jn, "nominal_voltage", 1.0, nctx);
    data.nodes.push_back(std::move(n));
  }

  for (const auto& jb : require(doc, "branches", ctx)) {
    const std::string bctx =
        ctx + ".branches[" + std::to_string(data.branches.size()) + "]";
    check_keys(jb,
               {"id", "from_node", "to_node", "resistance", "reactance",
                "length", "construction", "failure_rate_per_km", "repair_time"},
               bctx);
    Branch b;
    b.id = string_field(jb, "id", bctx);
    b.from_node = string_field(jb, "from_node", bctx);
    b.to_node = string_field(jb, "to_node", bctx);
    b.resistance = number_field(jb, "resistance", bctx);
    b.reactance = number_field(jb, "reactance", bctx);
    b.length = number_field(jb, "length", bctx);
    const std::string cons = string_field(jb, "construction", bctx);
    if (cons == "overhead") b.construction = Construction::overhead;
    else if (cons == "underground") b.construction = Construction::underground;
    else throw DataError(bctx + ": unknown construction '" + cons + "'");
    b.failure_rate_per_km = number_field(jb, "failure_rate_per_km", bctx);
    b.repair_time = number_field(jb, "repair_time", bctx);
    data.branches.push_back(std::move(b));
  }

  if (doc.contains("transformers")) {
    for (const auto& jt : doc["transformers"]) {
      const std::string tctx =
          ctx + ".transformers[" + std::to_string(data.transformers.size()) + "]";
      check_keys(jt, {"id", "at_node", "failure_rate", "repair_time"}, tctx);
      TransformerUnit t;
      t.id = string_field(jt, "id", tctx);
      t.at_node = string_field(jt, "at_node", tctx);
      t.failure_rate = number_field(jt, "failure_rate", tctx);
      t.repair_time = number_field(jt, "repair_time", tctx);
      data.transformers.push_back(std::move(t));
    }
  }

  for (const auto& jl : require(doc, "load_points", ctx)) {
    const std::string lctx =
        ctx + ".load_points[" + std::to_string(data.load_points.size()) + "]";
    check_keys(jl,
               {"id", "at_node", "mean_active", "sigma_active", "mean_reactive",
                "class_mix", "class_interrupt_cost", "importance"},
               lctx);
    LoadPoint lp;
    lp.id = string_field(jl, "id", lctx);
    lp.at_node = string_field(jl, "at_node", lctx);
    lp.mean_active = number_field(jl, "mean_active", lctx);
    lp.sigma_active = number_or(jl, "sigma_active", 0.0, lctx);
    lp.mean_reactive = number_or(jl, "mean_reactive", 0.0, lctx);
    lp.class_mix = class_map(require(jl, "class_mix", lctx), lctx + ".class_mix");
    lp.class_interrupt_cost = class_map(
        require(jl, "class_interrupt_cost", lctx), lctx + ".class_interrupt_cost");
    lp.importance = number_or(jl, "importance", 1.0, lctx);
    data.load_points.push_back(std::move(lp));
  }

  if (doc.contains("candidates")) {
    for (const auto& jc : doc["candidates"]) {
      const std::string cctx =
          ctx + ".candidates[" + std::to_string(data.candidates.size()) + "]";
      CandidateSite cs;
      const std::string kind = string_field(jc, "kind", cctx);
      if (kind == "switch") {
        check_keys(jc, {"id", "kind", "on_branch", "build_cost"}, cctx);
        cs.kind = CandidateKind::sectionalizer;
        cs.on_branch = string_field(jc, "on_branch", cctx);
      } else if (kind == "maneuver") {
        check_keys(jc, {"id", "kind", "between", "build_cost"}, cctx);
        cs.kind = CandidateKind::maneuver;
        const json& between = require(jc, "between", cctx);
        if (!between.is_array() || between.size() != 2 ||
            !between[0].is_string() || !between[1].is_string())
          throw DataError(cctx + ".between: expected two node ids");
        cs.between = {between[0].get<std::string>(),
                      between[1].get<std::string>()};
      } else {
        throw DataError(cctx + ": unknown candidate kind '" + kind + "'");
      }
      cs.id = string_field(jc, "id", cctx);
      cs.build_cost = number_field(jc, "build_cost", cctx);
      data.candidates.push_back(std::move(cs));
    }
  }
  return data;
}

Network load_network(const std::filesystem::path& path) {
  return Network::build(load_network_data(path));
}

void save_network(const Network& net, const std::filesystem::path& path) {
  ordered_json doc;
  doc["base"] = {{"s_base_kva", net.s_base_kva()}};

  auto sorted_by_id = [](auto items) {
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    return items;
  };

  doc["nodes"] = ordered_json::array();
  for (const auto& n : sorted_by_id(net.nodes()))
    doc["nodes"].push_back({{"id", n.id},
                            {"kind", to_string(n.kind)},
                            {"nominal_voltage", n.nominal_voltage}});

  doc["branches"] = ordered_json::array();
  for (const auto& b : sorted_by_id(net.branches()))
    doc["branches"].push_back({{"id", b.id},
                               {"from_node", b.from_node},
                               {"to_node", b.to_node},
                               {"resistance", b.resistance},
                               {"reactance", b.reactance},
                               {"length", b.length},
                               {"construction", to_string(b.construction)},
                               {"failure_rate_per_km", b.failure_rate_per_km},
                               {"repair_time", b.repair_time}});

  doc["transformers"] = ordered_json::array();
  for (const auto& t : sorted_by_id(net.transformers()))
    doc["transformers"].push_back({{"id", t.id},
                                   {"at_node", t.at_node},
                                   {"failure_rate", t.failure_rate},
                                   {"repair_time", t.repair_time}});

  auto class_obj = [](const std::array<double, 5>& values) {
    ordered_json out = ordered_json::object();
    for (std::size_t c = 0; c < values.size(); ++c)
      if (values[c] != 0.0) out[to_string(kCustomerClasses[c])] = values[c];
    return out;
  };
  doc["load_points"] = ordered_json::array();
  for (const auto& lp : sorted_by_id(net.load_points()))
    doc["load_points"].push_back(
        {{"id", lp.id},
         {"at_node", lp.at_node},
         {"mean_active", lp.mean_active},
         {"sigma_active", lp.sigma_active},
         {"mean_reactive", lp.mean_reactive},
         {"class_mix", class_obj(lp.class_mix)},
         {"class_interrupt_cost", class_obj(lp.class_interrupt_cost)},
         {"importance", lp.importance}});

  doc["candidates"] = ordered_json::array();
  std::vector<CandidateSite> cands = net.switch_candidates();
  cands.insert(cands.end(), net.maneuver_candidates().begin(),
               net.maneuver_candidates().end());
  for (const auto& cs : sorted_by_id(cands)) {
    ordered_json jc{{"id", cs.id}, {"kind", to_string(cs.kind)}};
    if (cs.kind == CandidateKind::sectionalizer)
      jc["on_branch"] = cs.on_branch;
    else
      jc["between"] = {cs.between.first, cs.between.second};
    jc["build_cost"] = cs.build_cost;
    doc["candidates"].push_back(std::move(jc));
  }

  std::ofstream out(path);
  if (!out)
    throw DataError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

RunConfig load_config(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  const std::string ctx = path.filename().string();
  check_keys(doc,
             {"feeder_file", "output_dir", "cost", "reliability", "powerflow",
              "ga"},
             ctx);

  RunConfig cfg;
  const auto base_dir = path.has_parent_path()
                            ? path.parent_path()
                            : std::filesystem::path(".");
  cfg.feeder_file = base_dir / string_field(doc, "feeder_file", ctx);
  if (doc.contains("output_dir"))
    cfg.output_dir = base_dir / doc["output_dir"].get<std::string>();
  else
    cfg.output_dir = base_dir / "out";

  if (doc.contains("cost")) {
    const json& jc = doc["cost"];
    const std::string cctx = ctx + ".cost";
    check_keys(jc,
               {"switch_cost", "maneuver_costs", "maintenance_fraction",
                "fixed_maintenance", "inflation", "interest", "horizon_years",
                "loss_cost_rate", "hours_per_year"},
               cctx);
    if (jc.contains("switch_cost")) {
      cfg.switch_cost_from_config = number(jc["switch_cost"], cctx);
      cfg.cost.switch_cost = *cfg.switch_cost_from_config;
    }
    if (jc.contains("maneuver_costs")) {
      for (const auto& v : jc["maneuver_costs"])
        cfg.cost.maneuver_costs.push_back(number(v, cctx + ".maneuver_costs"));
    }
    cfg.cost.maintenance_fraction =
        number_or(jc, "maintenance_fraction", cfg.cost.maintenance_fraction, cctx);
    if (jc.contains("fixed_maintenance"))
      cfg.cost.fixed_maintenance = number(jc["fixed_maintenance"], cctx);
    cfg.cost.inflation = number_or(jc, "inflation", cfg.cost.inflation, cctx);
    cfg.cost.interest = number_or(jc, "interest", cfg.cost.interest, cctx);
    if (jc.contains("horizon_years"))
      cfg.cost.horizon_years = jc["horizon_years"].get<int>();
    cfg.cost.loss_cost_rate =
        number_or(jc, "loss_cost_rate", cfg.cost.loss_cost_rate, cctx);
    cfg.cost.hours_per_year =
        number_or(jc, "hours_per_year", cfg.cost.hours_per_year, cctx);
  }

  if (doc.contains("reliability")) {
    const json& jr = doc["reliability"];
    const std::string rctx = ctx + ".reliability";
    check_keys(jr,
               {"remote_switch_time", "manual_section_time",
                "include_maneuver_backfeed"},
               rctx);
    cfg.reliability.remote_switch_time = number_or(
        jr, "remote_switch_time", cfg.reliability.remote_switch_time, rctx);
    cfg.reliability.manual_section_time = number_or(
        jr, "manual_section_time", cfg.reliability.manual_section_time, rctx);
    if (jr.contains("include_maneuver_backfeed"))
      cfg.reliability.include_maneuver_backfeed =
          jr["include_maneuver_backfeed"].get<bool>();
  }

  if (doc.contains("powerflow")) {
    const json& jp = doc["powerflow"];
    const std::string pctx = ctx + ".powerflow";
    check_keys(jp,
               {"tolerance", "max_iterations", "source_voltage", "v_min",
                "v_max"},
               pctx);
    cfg.powerflow.tolerance =
        number_or(jp, "tolerance", cfg.powerflow.tolerance, pctx);
    if (jp.contains("max_iterations"))
      cfg.powerflow.max_iterations = jp["max_iterations"].get<int>();
    if (jp.contains("source_voltage"))
      cfg.powerflow.source_voltage = number(jp["source_voltage"], pctx);
    cfg.limits.v_min = number_or(jp, "v_min", cfg.limits.v_min, pctx);
    cfg.limits.v_max = number_or(jp, "v_max", cfg.limits.v_max, pctx);
  }

  if (doc.contains("ga")) {
    const json& jg = doc["ga"];
    const std::string gctx = ctx + ".ga";
    check_keys(jg,
               {"population_size", "generations", "crossover_probability",
                "mutation_probability_per_gene", "eta_c", "eta_m", "seed",
                "threads"},
               gctx);
    if (jg.contains("population_size"))
      cfg.ga.population_size = jg["population_size"].get<int>();
    if (jg.contains("generations"))
      cfg.ga.generations = jg["generations"].get<int>();
    cfg.ga.crossover_probability = number_or(
        jg, "crossover_probability", cfg.ga.crossover_probability, gctx);
    cfg.ga.mutation_probability_per_gene =
        number_or(jg, "mutation_probability_per_gene",
                  cfg.ga.mutation_probability_per_gene, gctx);
    cfg.ga.eta_c = number_or(jg, "eta_c", cfg.ga.eta_c, gctx);
    cfg.ga.eta_m = number_or(jg, "eta_m", cfg.ga.eta_m, gctx);
    if (jg.contains("seed")) cfg.ga.seed = jg["seed"].get<std::uint64_t>();
    if (jg.contains("threads")) cfg.ga.threads = jg["threads"].get<int>();
  }

  // Invariants checked before any computation.
  if (cfg.ga.population_size < 4 || cfg.ga.population_size % 2 != 0)
    throw UsageError(ctx + ": ga.population_size must be even and >= 4");
  if (cfg.ga.generations < 0)
    throw UsageError(ctx + ": ga.generations must be >= 0");
  if (cfg.ga.eta_c <= 0.0 || cfg.ga.eta_m <= 0.0)
    throw UsageError(ctx + ": eta_c and eta_m must be > 0");
  if (cfg.ga.crossover_probability < 0.0 || cfg.ga.crossover_probability > 1.0)
    throw UsageError(ctx + ": crossover_probability must be in [0,1]");
  if (cfg.ga.mutation_probability_per_gene < 0.0 ||
      cfg.ga.mutation_probability_per_gene > 1.0)
    throw UsageError(ctx + ": mutation_probability_per_gene must be in [0,1]");
  if (cfg.ga.threads < 1)
    throw UsageError(ctx + ": ga.threads must be >= 1");
  if (cfg.powerflow.tolerance <= 0.0)
    throw UsageError(ctx + ": powerflow.tolerance must be > 0");
  if (cfg.powerflow.max_iterations < 1)
    throw UsageError(ctx + ": powerflow.max_iterations must be >= 1");
  if (cfg.cost.horizon_years < 1)
    throw UsageError(ctx + ": cost.horizon_years must be >= 1");
  if (cfg.cost.interest <= -1.0 || cfg.cost.inflation <= -1.0)
    throw UsageError(ctx + ": interest and inflation must exceed -1");
  if (cfg.reliability.remote_switch_time <= 0.0 ||
      cfg.reliability.remote_switch_time > cfg.reliability.manual_section_time)
    throw UsageError(
        ctx + ": need 0 < remote_switch_time <= manual_section_time");
  return cfg;
}

}  // namespace switchopt
