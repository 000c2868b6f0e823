#include "switchopt/moo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "switchopt/errors.hpp"
#include "switchopt/random.hpp"

namespace switchopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool dominates(std::span<const double> a, std::span<const double> b) {
  bool strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
    if (a[k] < b[k]) strict = true;
  }
  return strict;
}

std::vector<std::vector<std::size_t>> fast_non_dominated_sort(
    const std::vector<Individual>& pop) {
  const std::size_t n = pop.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> dom_count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(pop[i].objectives, pop[j].objectives)) {
        dominated[i].push_back(j);
        ++dom_count[j];
      } else if (dominates(pop[j].objectives, pop[i].objectives)) {
        dominated[j].push_back(i);
        ++dom_count[i];
      }
    }
  }
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i)
    if (dom_count[i] == 0) current.push_back(i);
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<std::size_t> next;
    for (std::size_t i : current)
      for (std::size_t j : dominated[i])
        if (--dom_count[j] == 0) next.push_back(j);
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

double sbx_beta(double u, double eta_c) {
  const double p = 1.0 / (eta_c + 1.0);
  return u <= 0.5 ? std::pow(2.0 * u, p)
                  : std::pow(1.0 / (2.0 * (1.0 - u)), p);
}

std::pair<std::vector<double>, std::vector<double>> sbx_crossover(
    std::span<const double> p1, std::span<const double> p2, double eta_c,
    std::span<const double> draws, const GeneBounds& bounds) {
  if (p1.size() != p2.size() || p1.size() != draws.size() ||
      p1.size() != bounds.size())
    throw UsageError("sbx_crossover: mismatched vector lengths");
  std::vector<double> c1(p1.size()), c2(p1.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const double beta = sbx_beta(draws[i], eta_c);
    c1[i] = 0.5 * ((1.0 + beta) * p1[i] + (1.0 - beta) * p2[i]);
    c2[i] = 0.5 * ((1.0 - beta) * p1[i] + (1.0 + beta) * p2[i]);
    c1[i] = std::clamp(c1[i], bounds.lower[i], bounds.upper[i]);
    c2[i] = std::clamp(c2[i], bounds.lower[i], bounds.upper[i]);
  }
  return {std::move(c1), std::move(c2)};
}

double mutation_delta(double r, double eta_m) {
  const double p = 1.0 / (eta_m + 1.0);
  return r < 0.5 ? std::pow(2.0 * r, p) - 1.0
                 : 1.0 - std::pow(2.0 * (1.0 - r), p);
}

double mutate_gene(double x, double lower, double upper, double eta_m,
                   double r) {
  const double range = upper - lower;
  if (range <= 0.0) return x;
  const double p = 1.0 / (eta_m + 1.0);
  double dq;
  if (r < 0.5) {
    const double d = (x - lower) / range;
    const double v = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d, eta_m + 1.0);
    dq = std::pow(v, p) - 1.0;
  } else {
    const double d = (upper - x) / range;
    const double v =
        2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - d, eta_m + 1.0);
    dq = 1.0 - std::pow(v, p);
  }
  return std::clamp(x + dq * range, lower, upper);
}

std::vector<double> polynomial_mutation(std::span<const double> x,
                                        const GeneBounds& bounds, double eta_m,
                                        std::span<const double> draws) {
  if (x.size() != draws.size() || x.size() != bounds.size())
    throw UsageError("polynomial_mutation: mismatched vector lengths");
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = mutate_gene(y[i], bounds.lower[i], bounds.upper[i], eta_m, draws[i]);
  return y;
}

namespace {

// Per-objective neighbor gaps |f_{i+1}^k - f_{i-1}^k| for each member of a
// front; boundary members are marked with an infinite gap in that objective.
std::vector<std::vector<double>> neighbor_gaps(
    const std::vector<Individual>& pop, const std::vector<std::size_t>& front) {
  const std::size_t n = front.size();
  const std::size_t r = n ? pop[front[0]].objectives.size() : 0;
  std::vector<std::vector<double>> gaps(n, std::vector<double>(r, kInf));
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return pop[front[a]].objectives[k] <
                              pop[front[b]].objectives[k];
                     });
    for (std::size_t pos = 1; pos + 1 < n; ++pos) {
      const double lo = pop[front[order[pos - 1]]].objectives[k];
      const double hi = pop[front[order[pos + 1]]].objectives[k];
      gaps[order[pos]][k] = std::abs(hi - lo);
    }
  }
  return gaps;
}

std::vector<double> cd_from_gaps(const std::vector<std::vector<double>>& gaps) {
  std::vector<double> cd(gaps.size(), 0.0);
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    double sum = 0.0;
    bool boundary = false;
    for (double g : gaps[i]) {
      if (std::isinf(g)) boundary = true;
      sum += g;
    }
    cd[i] = boundary ? kInf : sum / static_cast<double>(gaps[i].size());
  }
  return cd;
}

}  // namespace

std::vector<double> crowding_distance(const std::vector<Individual>& pop,
                                      const std::vector<std::size_t>& front) {
  if (front.size() <= 2)
    return std::vector<double>(front.size(), kInf);
  return cd_from_gaps(neighbor_gaps(pop, front));
}

double dcd_value(double cd, double v) {
  if (std::isinf(cd)) return kInf;
  const double vc = std::clamp(v, 1e-12, 1.0 - 1e-12);
  return cd / std::log(1.0 / vc);
}

std::vector<std::size_t> dcd_trim(const std::vector<Individual>& pop,
                                  std::vector<std::size_t> front,
                                  std::size_t target_size) {
  if (target_size < 2)
    throw UsageError("dcd_trim: target size must be >= 2");
  while (front.size() > target_size) {
    const auto gaps = neighbor_gaps(pop, front);
    const auto cd = cd_from_gaps(gaps);
    const std::size_t r = gaps.empty() ? 0 : gaps[0].size();
    std::size_t victim = 0;
    double victim_dcd = kInf;
    for (std::size_t i = 0; i < front.size(); ++i) {
      double dcd;
      if (std::isinf(cd[i])) {
        dcd = kInf;  // boundary: removable only when everyone is
      } else {
        double v = 0.0;
        for (std::size_t k = 0; k < r; ++k)
          v += (gaps[i][k] - cd[i]) * (gaps[i][k] - cd[i]);
        v /= static_cast<double>(r);
        dcd = dcd_value(cd[i], v);
      }
      if (dcd < victim_dcd) {
        victim_dcd = dcd;
        victim = i;
      }
    }
    front.erase(front.begin() + static_cast<std::ptrdiff_t>(victim));
  }
  return front;
}

double hypervolume_2d(const std::vector<std::vector<double>>& points,
                      std::span<const double> reference) {
  if (reference.size() != 2)
    throw UsageError("hypervolume_2d needs a 2-component reference point");
  // Keep points strictly inside the reference box, then the non-dominated
  // subset, sorted by the first objective.
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : points)
    if (p[0] < reference[0] && p[1] < reference[1]) pts.emplace_back(p[0], p[1]);
  std::sort(pts.begin(), pts.end());
  double hv = 0.0;
  double prev_y = reference[1];
  for (const auto& [x, y] : pts) {
    if (y >= prev_y) continue;  // dominated by a point to the left
    hv += (reference[0] - x) * (prev_y - y);
    prev_y = y;
  }
  return hv;
}

namespace {

struct ParetoArchive {
  std::vector<Individual> members;

  void insert(const Individual& cand) {
    for (const auto& m : members) {
      if (dominates(m.objectives, cand.objectives) ||
          m.objectives == cand.objectives)
        return;
    }
    std::erase_if(members, [&](const Individual& m) {
      return dominates(cand.objectives, m.objectives);
    });
    members.push_back(cand);
  }
};

// Deterministic parallel evaluation: genotypes already fixed, results land
// in index order regardless of thread count.
void evaluate_all(std::vector<Individual>& group, const Evaluator& evaluate,
                  int threads, std::size_t n_objectives) {
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      group[i].objectives = evaluate(group[i].genotype);
  };
  const std::size_t n = group.size();
  if (threads <= 1 || n < 2) {
    run(0, n);
  } else {
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      if (b >= n) break;
      pool.emplace_back(run, b, std::min(n, b + chunk));
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& ind : group) {
    if (ind.objectives.size() != n_objectives)
      throw SolverError("evaluator returned a wrong-size objective vector");
    for (double f : ind.objectives)
      if (!std::isfinite(f))
        throw SolverError("evaluator returned a non-finite objective");
  }
}

// Binary tournament on (rank asc, diversity desc, index asc).
std::size_t tournament(const std::vector<Individual>& pop, Rng& rng) {
  const std::size_t a = uniform_below(rng, pop.size());
  const std::size_t b = uniform_below(rng, pop.size());
  if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank ? a : b;
  if (pop[a].diversity != pop[b].diversity)
    return pop[a].diversity > pop[b].diversity ? a : b;
  return std::min(a, b);
}

void assign_rank_and_diversity(std::vector<Individual>& pop) {
  const auto fronts = fast_non_dominated_sort(pop);
  for (std::size_t fi = 0; fi < fronts.size(); ++fi) {
    const auto cd = crowding_distance(pop, fronts[fi]);
    for (std::size_t i = 0; i < fronts[fi].size(); ++i) {
      pop[fronts[fi][i]].rank = static_cast<int>(fi);
      pop[fronts[fi][i]].diversity = cd[i];
    }
  }
}

}  // namespace

EvolveResult evolve(const Evaluator& evaluate, const GeneBounds& bounds,
                    const GAParams& params) {
  if (params.population_size < 4 || params.population_size % 2 != 0)
    throw UsageError("population_size must be even and >= 4");
  if (params.generations < 0)
    throw UsageError("generations must be >= 0");
  if (bounds.lower.size() != bounds.upper.size() || bounds.size() == 0)
    throw UsageError("bounds must be non-empty and consistent");

  const std::size_t dim = bounds.size();
  const std::size_t pop_size = static_cast<std::size_t>(params.population_size);
  Rng rng(params.seed);

  std::vector<Individual> pop(pop_size);
  for (auto& ind : pop) {
    ind.genotype.resize(dim);
    for (std::size_t d = 0; d < dim; ++d)
      ind.genotype[d] = bounds.lower[d] +
                        uniform01(rng) * (bounds.upper[d] - bounds.lower[d]);
  }
  // First evaluation fixes the objective count.
  pop[0].objectives = evaluate(pop[0].genotype);
  const std::size_t n_obj = pop[0].objectives.size();
  if (n_obj == 0) throw SolverError("evaluator returned no objectives");
  {
    std::vector<Individual> rest(pop.begin() + 1, pop.end());
    evaluate_all(rest, evaluate, params.threads, n_obj);
    std::copy(rest.begin(), rest.end(), pop.begin() + 1);
    for (double f : pop[0].objectives)
      if (!std::isfinite(f))
        throw SolverError("evaluator returned a non-finite objective");
  }

  // Fixed hypervolume reference: explicit, or nadir of the initial
  // population with a 10% margin.
  std::vector<double> hv_ref;
  if (params.hv_reference) {
    hv_ref = *params.hv_reference;
    if (hv_ref.size() != n_obj)
      throw UsageError("hv_reference size does not match objective count");
  } else {
    std::vector<double> nadir(n_obj, -kInf), ideal(n_obj, kInf);
    for (const auto& ind : pop)
      for (std::size_t k = 0; k < n_obj; ++k) {
        nadir[k] = std::max(nadir[k], ind.objectives[k]);
        ideal[k] = std::min(ideal[k], ind.objectives[k]);
      }
    for (std::size_t k = 0; k < n_obj; ++k)
      hv_ref.push_back(nadir[k] + 0.1 * (nadir[k] - ideal[k]) + 1e-9);
  }

  ParetoArchive archive;
  for (const auto& ind : pop) archive.insert(ind);
  assign_rank_and_diversity(pop);

  EvolveResult result;
  auto record_stats = [&](int gen) {
    GenerationStats s;
    s.generation = gen;
    for (const auto& ind : pop) s.front0_size += ind.rank == 0;
    if (n_obj == 2) {
      std::vector<std::vector<double>> pts;
      pts.reserve(archive.members.size());
      for (const auto& m : archive.members) pts.push_back(m.objectives);
      s.hypervolume = hypervolume_2d(pts, hv_ref);
    }
    s.best_f1 = kInf;
    s.best_f2 = n_obj > 1 ? kInf : 0.0;
    for (const auto& m : archive.members) {
      s.best_f1 = std::min(s.best_f1, m.objectives[0]);
      if (n_obj > 1) s.best_f2 = std::min(s.best_f2, m.objectives[1]);
    }
    result.stats.push_back(s);
  };
  record_stats(0);

  for (int gen = 1; gen <= params.generations; ++gen) {
    // Variation draws happen strictly sequentially before evaluation so
    // that thread count cannot influence the random stream.
    std::vector<Individual> children;
    children.reserve(pop_size);
    std::vector<double> draws(dim);
    while (children.size() < pop_size) {
      const auto& p1 = pop[tournament(pop, rng)];
      const auto& p2 = pop[tournament(pop, rng)];
      std::vector<double> g1 = p1.genotype, g2 = p2.genotype;
      if (uniform01(rng) <= params.crossover_probability) {
        for (auto& u : draws) u = uniform01(rng);
        std::tie(g1, g2) =
            sbx_crossover(p1.genotype, p2.genotype, params.eta_c, draws, bounds);
        // Per-gene child swap so offspring recombine the parents instead of
        // shadowing one each.
        for (std::size_t d = 0; d < dim; ++d)
          if (uniform01(rng) < 0.5) std::swap(g1[d], g2[d]);
      }
      for (auto* g : {&g1, &g2}) {
        for (std::size_t d = 0; d < dim; ++d) {
          if (uniform01(rng) < params.mutation_probability_per_gene) {
            (*g)[d] = mutate_gene((*g)[d], bounds.lower[d], bounds.upper[d],
                                  params.eta_m, uniform01(rng));
          }
        }
        Individual child;
        child.genotype = std::move(*g);
        children.push_back(std::move(child));
        if (children.size() == pop_size) break;
      }
    }
    evaluate_all(children, evaluate, params.threads, n_obj);
    for (const auto& c : children) archive.insert(c);

    // Elitist merge and front-by-front refill.
    std::vector<Individual> merged = std::move(pop);
    merged.insert(merged.end(), std::make_move_iterator(children.begin()),
                  std::make_move_iterator(children.end()));
    const auto fronts = fast_non_dominated_sort(merged);
    std::vector<Individual> next;
    next.reserve(pop_size);
    for (const auto& front : fronts) {
      const std::size_t remaining = pop_size - next.size();
      if (remaining == 0) break;
      if (front.size() <= remaining) {
        for (std::size_t i : front) next.push_back(merged[i]);
        continue;
      }
      std::vector<std::size_t> kept;
      if (remaining >= 2) {
        kept = dcd_trim(merged, front, remaining);
      } else {
        // A single leftover slot: take the most isolated member.
        const auto cd = crowding_distance(merged, front);
        std::size_t best = 0;
        for (std::size_t i = 1; i < front.size(); ++i)
          if (cd[i] > cd[best]) best = i;
        kept.push_back(front[best]);
      }
      for (std::size_t i : kept) next.push_back(merged[i]);
    }
    pop = std::move(next);
    assign_rank_and_diversity(pop);
    record_stats(gen);
  }

  result.archive = std::move(archive.members);
  result.hv_reference_used = std::move(hv_ref);
  return result;
}

}  // namespace switchopt
