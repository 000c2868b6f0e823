#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace switchopt {

struct Individual {
  std::vector<double> genotype;
  std::vector<double> objectives;  // minimization, every component
  int rank = -1;                   // front index after sorting
  double diversity = 0.0;          // crowding distance within its front
};

struct GeneBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t size() const { return lower.size(); }
};

struct GAParams {
  int population_size = 30;  // must be even and >= 4
  int generations = 100;
  double crossover_probability = 0.9;
  double mutation_probability_per_gene = 0.1;
  double eta_c = 15.0;  // SBX distribution index
  double eta_m = 20.0;  // mutation distribution index
  std::uint64_t seed = 0;
  int threads = 1;  // parallel objective evaluation; results are identical
  /// Hypervolume reference point. When unset it is fixed from the initial
  /// population (nadir plus a 10% margin) and reused every generation.
  std::optional<std::vector<double>> hv_reference;
};

/// True iff a is no worse in every objective and better in at least one.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Deb's fast non-dominated sort. Returns fronts of indices into `pop`,
/// each front in ascending index order. Front 0 is the non-dominated set.
std::vector<std::vector<std::size_t>> fast_non_dominated_sort(
    const std::vector<Individual>& pop);

/// Simulated binary crossover applied to every gene with its own draw
/// u in [0,1]. Children are clipped to bounds after mixing.
std::pair<std::vector<double>, std::vector<double>> sbx_crossover(
    std::span<const double> p1, std::span<const double> p2, double eta_c,
    std::span<const double> draws, const GeneBounds& bounds);

/// Spread factor of one SBX gene: (2u)^(1/(eta+1)) for u <= 0.5, else
/// (1/(2(1-u)))^(1/(eta+1)).
double sbx_beta(double u, double eta_c);

/// Unbounded polynomial-mutation step for one draw r in [0,1]:
/// (2r)^(1/(eta+1)) - 1 below 0.5, 1 - (2(1-r))^(1/(eta+1)) above.
double mutation_delta(double r, double eta_m);

/// One gene of bounded (two-region) polynomial mutation; reduces to
/// mutation_delta's step scaled by the range when the gene sits at the
/// far bound of the move's direction.
double mutate_gene(double x, double lower, double upper, double eta_m,
                   double r);

/// Bounded polynomial mutation applied to every gene with its own draw.
std::vector<double> polynomial_mutation(std::span<const double> x,
                                        const GeneBounds& bounds, double eta_m,
                                        std::span<const double> draws);

/// Per-objective neighbor-gap crowding distance, averaged over objectives.
/// Boundary individuals of any objective ordering get +infinity.
std::vector<double> crowding_distance(const std::vector<Individual>& pop,
                                      const std::vector<std::size_t>& front);

/// Dynamic crowding distance of one individual given its crowding distance
/// and the variance V of its per-objective neighbor gaps.
double dcd_value(double cd, double v);

/// Trims `front` to target_size by repeatedly removing the individual with
/// the minimum dynamic crowding distance and recomputing. Boundary
/// individuals are never removed while interior ones remain. Returns the
/// kept indices in ascending order. Throws UsageError if target_size < 2.
std::vector<std::size_t> dcd_trim(const std::vector<Individual>& pop,
                                  std::vector<std::size_t> front,
                                  std::size_t target_size);

/// Dominated hypervolume of a bi-objective point set against a reference
/// point (minimization). Points beyond the reference are clipped out.
double hypervolume_2d(const std::vector<std::vector<double>>& points,
                      std::span<const double> reference);

struct GenerationStats {
  int generation = 0;
  int front0_size = 0;     // front-0 size of the current population
  double hypervolume = 0;  // archive hypervolume against the fixed reference
  double best_f1 = 0;      // archive minimum of objective 0
  double best_f2 = 0;      // archive minimum of objective 1
};

struct EvolveResult {
  /// Non-dominated set over every individual evaluated during the run,
  /// in discovery order. Duplicate objective vectors keep the first
  /// representative found.
  std::vector<Individual> archive;
  std::vector<GenerationStats> stats;
  std::vector<double> hv_reference_used;
};

using Evaluator = std::function<std::vector<double>(std::span<const double>)>;

/// Elitist generational loop: binary tournament on (rank, diversity), SBX,
/// polynomial mutation, parent+child merge, front-by-front refill with DCD
/// trimming of the split front. Deterministic for a fixed seed, including
/// under multi-threaded evaluation. The evaluator must be a pure function
/// returning the same finite objective vector for the same genotype.
EvolveResult evolve(const Evaluator& evaluate, const GeneBounds& bounds,
                    const GAParams& params);

}  // namespace switchopt
