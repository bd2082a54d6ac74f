#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hcbo/design_space.hpp"

namespace hcbo {

struct Individual {
  DesignVector x;
  std::vector<double> f;    // minimized objectives
  double violation = 0.0;   // sum of positive constraint values
  std::vector<double> raw;  // evaluator payload, kept with the individual
  int rank = 0;
  double crowding = 0.0;
};

/// Fills f and violation for every individual. Entries before `first_new` were
/// evaluated in an earlier call and keep their payload; the evaluator may
/// recompute their f (e.g. for population-wide normalization).
using PopulationEvaluator = std::function<void(std::vector<Individual>& pop, std::size_t first_new)>;

struct Nsga2Options {
  int pop_size = 100;
  int n_generations = 50;
  double p_crossover = 0.9;
  double eta_crossover = 15.0;
  double eta_mutation = 20.0;
  std::uint64_t seed = 0;
};

/// Constraint-domination: feasible beats infeasible, lower violation beats
/// higher, otherwise Pareto dominance on f.
bool constrained_dominates(const Individual& a, const Individual& b);

/// Nondominated fronts (indices), best first; sets rank on each individual.
std::vector<std::vector<std::size_t>> nondominated_sort(std::vector<Individual>& pop);

/// NSGA-II crowding distance of a set of objective vectors; boundary points get +inf.
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& f);

/// Runs NSGA-II from `initial` (repaired vectors) and returns the final
/// population with rank and crowding set. Offspring are repaired before evaluation.
std::vector<Individual> nsga2(const DesignSpace& space, std::vector<DesignVector> initial,
                              const PopulationEvaluator& evaluate, const Nsga2Options& options);

}  // namespace hcbo
