// Generates reference optima / Pareto fronts by large-budget NSGA-II runs on the true problems.
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>

#include <CLI11.hpp>

#include "hcbo/errors.hpp"
#include "hcbo/local_opt.hpp"
#include "hcbo/metrics.hpp"
#include "hcbo/nsga2.hpp"
#include "hcbo/problems.hpp"
#include "hcbo/sampling.hpp"

using namespace hcbo;

namespace {

constexpr double kFailedViolation = 1e10;

double violation_of(const EvaluatedPoint& p) {
  if (!p.viable) return kFailedViolation;
  double v = 0.0;
  for (double g : p.g) v += std::max(g, 0.0);
  return v;
}

struct Best {
  DesignVector x;
  double f = std::numeric_limits<double>::infinity();
};

// Nelder-Mead on the active continuous variables with the discrete part fixed.
Best polish(const ProblemDef& problem, const Best& start, int max_evals) {
  const DesignSpace& space = problem.space;
  std::vector<std::size_t> idx;
  std::vector<double> x0, lo, hi;
  for (std::size_t i = 0; i < space.n_continuous(); ++i) {
    if (!start.x.active[space.continuous_var(i)]) continue;
    idx.push_back(i);
    x0.push_back(start.x.continuous[i]);
    lo.push_back(space.continuous_def(i).lower);
    hi.push_back(space.continuous_def(i).upper);
  }
  if (idx.empty()) return start;
  auto objective = [&](std::span<const double> u) {
    DesignVector x = start.x;
    for (std::size_t k = 0; k < idx.size(); ++k) x.continuous[idx[k]] = u[k];
    x = space.repair(x);
    const EvaluatedPoint p = evaluate(problem, x);
    if (violation_of(p) > 0.0) return HUGE_VAL;
    return p.f[0];
  };
  const LocalOptResult r = nelder_mead_box(objective, x0, lo, hi, max_evals, 1e-14, 0.05);
  Best out = start;
  if (r.value < start.f) {
    for (std::size_t k = 0; k < idx.size(); ++k) out.x.continuous[idx[k]] = r.x[k];
    out.x = space.repair(out.x);
    out.f = evaluate(problem, out.x).f[0];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference front generator"};
  std::vector<std::string> names;
  int n_seeds = 5, pop = 100, gens = 200, n_scale = 10000;
  std::string out_dir = data_dir() + "/reference";
  app.add_option("--problem", names, "Problems (default: all)");
  app.add_option("--seeds", n_seeds, "Independent NSGA-II runs");
  app.add_option("--pop", pop, "Population size");
  app.add_option("--gens", gens, "Generations per run");
  app.add_option("--scale-samples", n_scale, "Samples for the single-objective scale");
  app.add_option("--out", out_dir, "Output directory");
  CLI11_PARSE(app, argc, argv);

  if (names.empty())
    for (const auto& p : registry()) names.push_back(p.name);
  std::filesystem::create_directories(out_dir);

  try {
    for (const auto& name : names) {
      const ProblemDef& problem = find_problem(name);
      const ValidDiscreteSet valid = enumerate_valid_discrete(problem.space);
      PointSet feasible_f;
      Best best;
      auto evaluator = [&](std::vector<Individual>& popn, std::size_t first_new) {
        for (std::size_t i = first_new; i < popn.size(); ++i) {
          const EvaluatedPoint p = evaluate(problem, popn[i].x);
          popn[i].violation = violation_of(p);
          popn[i].f = p.viable ? p.f : std::vector<double>(static_cast<std::size_t>(problem.n_f), 1e10);
          if (popn[i].violation > 0.0) continue;
          feasible_f.push_back(p.f);
          if (problem.n_f == 1 && p.f[0] < best.f) best = {popn[i].x, p.f[0]};
        }
        if (problem.n_f > 1 && feasible_f.size() > 20000) feasible_f = nondominated(feasible_f);
      };
      for (int s = 0; s < n_seeds; ++s) {
        Nsga2Options opt;
        opt.pop_size = pop;
        opt.n_generations = gens;
        opt.seed = 1000 + static_cast<std::uint64_t>(s);
        nsga2(problem.space, hierarchical_sample(problem.space, valid, pop, opt.seed), evaluator, opt);
      }
      ReferenceData ref;
      if (problem.n_f == 1) {
        if (!std::isfinite(best.f)) throw NoViablePoints("no feasible point found for " + name);
        best = polish(problem, best, 4000);
        ref.front = {{best.f}};
        std::vector<double> fs;
        for (const auto& x : hierarchical_sample(problem.space, valid, n_scale, 7)) {
          const EvaluatedPoint p = evaluate(problem, x);
          if (violation_of(p) == 0.0) fs.push_back(p.f[0]);
        }
        ref.scale = fs.empty() ? 1.0 : median(fs) - best.f;
      } else {
        ref.front = nondominated(feasible_f);
        std::sort(ref.front.begin(), ref.front.end());
      }
      const std::string path = out_dir + "/" + name + ".txt";
      save_reference(problem, ref, path);
      std::cout << name << ": " << ref.front.size() << " point(s)";
      if (problem.n_f == 1) std::cout << ", f_opt " << ref.front[0][0] << ", scale " << ref.scale;
      std::cout << "\n" << std::flush;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
