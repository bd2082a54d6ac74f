#include "hcbo/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "hcbo/errors.hpp"

namespace hcbo {

bool constrained_dominates(const Individual& a, const Individual& b) {
  const bool fa = a.violation <= 0.0, fb = b.violation <= 0.0;
  if (fa != fb) return fa;
  if (!fa) return a.violation < b.violation;
  bool strictly = false;
  for (std::size_t m = 0; m < a.f.size(); ++m) {
    if (a.f[m] > b.f[m]) return false;
    if (a.f[m] < b.f[m]) strictly = true;
  }
  return strictly;
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::vector<Individual>& pop) {
  const std::size_t n = pop.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (constrained_dominates(pop[i], pop[j])) {
        dominated[i].push_back(j);
        ++count[j];
      } else if (constrained_dominates(pop[j], pop[i])) {
        dominated[j].push_back(i);
        ++count[i];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (count[i] == 0) fronts[0].push_back(i);
  for (std::size_t k = 0; !fronts[k].empty(); ++k) {
    std::vector<std::size_t> next;
    for (std::size_t i : fronts[k]) {
      pop[i].rank = static_cast<int>(k);
      for (std::size_t j : dominated[i])
        if (--count[j] == 0) next.push_back(j);
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& f) {
  const std::size_t n = f.size();
  std::vector<double> cd(n, 0.0);
  if (n == 0) return cd;
  if (n <= 2) return std::vector<double>(n, std::numeric_limits<double>::infinity());
  const std::size_t n_obj = f.front().size();
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < n_obj; ++m) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a][m] < f[b][m]; });
    const double lo = f[order.front()][m], hi = f[order.back()][m];
    cd[order.front()] = cd[order.back()] = std::numeric_limits<double>::infinity();
    if (hi - lo <= 0.0) continue;
    for (std::size_t k = 1; k + 1 < n; ++k)
      cd[order[k]] += (f[order[k + 1]][m] - f[order[k - 1]][m]) / (hi - lo);
  }
  return cd;
}

namespace {

using Key = std::pair<std::vector<int>, std::vector<double>>;

Key key_of(const DesignVector& x) { return {x.discrete, x.continuous}; }

// Bounded simulated binary crossover on one variable.
void sbx(double& c1, double& c2, double lo, double hi, double eta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double p1 = c1, p2 = c2;
  if (std::abs(p1 - p2) < 1e-14) return;
  const double y1 = std::min(p1, p2), y2 = std::max(p1, p2);
  const double r = uni(rng);
  auto beta_q = [&](double beta) {
    const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
    return r <= 1.0 / alpha ? std::pow(r * alpha, 1.0 / (eta + 1.0))
                            : std::pow(1.0 / (2.0 - r * alpha), 1.0 / (eta + 1.0));
  };
  const double delta = y2 - y1;
  const double b1 = 1.0 + 2.0 * (y1 - lo) / delta;
  const double b2 = 1.0 + 2.0 * (hi - y2) / delta;
  double a = std::clamp(0.5 * ((y1 + y2) - beta_q(b1) * delta), lo, hi);
  double b = std::clamp(0.5 * ((y1 + y2) + beta_q(b2) * delta), lo, hi);
  if (uni(rng) < 0.5) std::swap(a, b);
  c1 = a;
  c2 = b;
}

double polynomial_mutation(double y, double lo, double hi, double eta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double delta1 = (y - lo) / (hi - lo), delta2 = (hi - y) / (hi - lo);
  const double r = uni(rng);
  const double pw = 1.0 / (eta + 1.0);
  double dq;
  if (r < 0.5) {
    const double xy = 1.0 - delta1;
    const double val = 2.0 * r + (1.0 - 2.0 * r) * std::pow(xy, eta + 1.0);
    dq = std::pow(val, pw) - 1.0;
  } else {
    const double xy = 1.0 - delta2;
    const double val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(xy, eta + 1.0);
    dq = 1.0 - std::pow(val, pw);
  }
  return std::clamp(y + dq * (hi - lo), lo, hi);
}

void assign_crowding(std::vector<Individual>& pop, const std::vector<std::vector<std::size_t>>& fronts) {
  for (const auto& front : fronts) {
    std::vector<std::vector<double>> f;
    f.reserve(front.size());
    for (std::size_t i : front) f.push_back(pop[i].f);
    const auto cd = crowding_distance(f);
    for (std::size_t k = 0; k < front.size(); ++k) pop[front[k]].crowding = cd[k];
  }
}

}  // namespace

std::vector<Individual> nsga2(const DesignSpace& space, std::vector<DesignVector> initial,
                              const PopulationEvaluator& evaluate, const Nsga2Options& options) {
  if (initial.empty()) throw ConfigError("NSGA-II needs a nonempty initial population");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  std::vector<Individual> pop;
  std::set<Key> seen;
  for (auto& x : initial) {
    if (!seen.insert(key_of(x)).second) continue;
    Individual ind;
    ind.x = std::move(x);
    pop.push_back(std::move(ind));
  }
  evaluate(pop, 0);
  auto fronts = nondominated_sort(pop);
  assign_crowding(pop, fronts);

  const std::size_t pop_size = static_cast<std::size_t>(std::max(options.pop_size, 2));
  const std::size_t nd = space.n_discrete(), nc = space.n_continuous();
  const double p_mut = 1.0 / static_cast<double>(std::max<std::size_t>(space.n_vars(), 1));

  auto better = [&](std::size_t a, std::size_t b) {
    if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank;
    return pop[a].crowding > pop[b].crowding;
  };

  for (int gen = 0; gen < options.n_generations; ++gen) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    auto tournament = [&] {
      const std::size_t a = pick(rng), b = pick(rng);
      return better(b, a) ? b : a;
    };

    const std::size_t first_new = pop.size();
    std::set<Key> keys;
    for (const auto& ind : pop) keys.insert(key_of(ind.x));
    int attempts = 0;
    while (pop.size() < first_new + pop_size && attempts < static_cast<int>(pop_size) * 20) {
      ++attempts;
      DesignVector c1 = pop[tournament()].x, c2 = pop[tournament()].x;
      if (uni(rng) < options.p_crossover) {
        for (std::size_t i = 0; i < nc; ++i) {
          if (uni(rng) < 0.5) {
            const auto& def = space.continuous_def(i);
            sbx(c1.continuous[i], c2.continuous[i], def.lower, def.upper, options.eta_crossover, rng);
          }
        }
        for (std::size_t j = 0; j < nd; ++j)
          if (uni(rng) < 0.5) std::swap(c1.discrete[j], c2.discrete[j]);
      }
      for (DesignVector* c : {&c1, &c2}) {
        for (std::size_t i = 0; i < nc; ++i) {
          if (uni(rng) < p_mut) {
            const auto& def = space.continuous_def(i);
            c->continuous[i] = polynomial_mutation(c->continuous[i], def.lower, def.upper, options.eta_mutation, rng);
          }
        }
        for (std::size_t j = 0; j < nd; ++j) {
          if (uni(rng) < p_mut) {
            std::uniform_int_distribution<int> level(0, space.discrete_def(j).n_levels() - 1);
            c->discrete[j] = level(rng);
          }
        }
        DesignVector fixed = space.repair(*c);
        if (pop.size() < first_new + pop_size && keys.insert(key_of(fixed)).second) {
          Individual ind;
          ind.x = std::move(fixed);
          pop.push_back(std::move(ind));
        }
      }
    }
    if (pop.size() == first_new) break;  // design space exhausted
    evaluate(pop, first_new);

    fronts = nondominated_sort(pop);
    assign_crowding(pop, fronts);
    std::vector<std::size_t> survivors;
    for (const auto& front : fronts) {
      if (survivors.size() + front.size() <= pop_size) {
        survivors.insert(survivors.end(), front.begin(), front.end());
        continue;
      }
      std::vector<std::size_t> rest = front;
      std::stable_sort(rest.begin(), rest.end(),
                       [&](std::size_t a, std::size_t b) { return pop[a].crowding > pop[b].crowding; });
      rest.resize(pop_size - survivors.size());
      survivors.insert(survivors.end(), rest.begin(), rest.end());
      break;
    }
    std::vector<Individual> next;
    next.reserve(survivors.size());
    for (std::size_t i : survivors) next.push_back(std::move(pop[i]));
    pop = std::move(next);
    // Normalization may depend on the population, so re-evaluate f over the survivors.
    evaluate(pop, pop.size());
    fronts = nondominated_sort(pop);
    assign_crowding(pop, fronts);
  }
  return pop;
}

}  // namespace hcbo
