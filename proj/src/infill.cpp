#include "hcbo/infill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "hcbo/errors.hpp"

namespace hcbo {

namespace {

constexpr double kMinStd = 1e-12;

double norm_cdf(double u) { return 0.5 * std::erfc(-u / std::sqrt(2.0)); }
double norm_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); }

}  // namespace

double expected_improvement(double mean, double std, double y_min) {
  const double s = std::max(std, kMinStd);
  const double d = y_min - mean;
  const double u = d / s;
  return std::max(d * norm_cdf(u) + s * norm_pdf(u), 0.0);
}

double probability_of_improvement(double mean, double std, double y_min) {
  return norm_cdf((y_min - mean) / std::max(std, kMinStd));
}

double lower_confidence_bound(double mean, double std, double beta) { return mean - beta * std; }

double minimum_poi(const std::vector<double>& mean, const std::vector<double>& std,
                   const std::vector<std::vector<double>>& front) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : front) {
    double p_dominated = 1.0;
    for (std::size_t m = 0; m < mean.size(); ++m) p_dominated *= norm_cdf((mean[m] - p[m]) / std::max(std[m], kMinStd));
    best = std::min(best, 1.0 - p_dominated);
  }
  return front.empty() ? 1.0 : best;
}

double minimum_euclidean_poi(const std::vector<double>& mean, const std::vector<double>& std,
                             const std::vector<std::vector<double>>& front) {
  const double mpoi = minimum_poi(mean, std, front);
  if (mpoi < 0.5) return 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& p : front) {
    double d2 = 0.0;
    for (std::size_t m = 0; m < mean.size(); ++m) d2 += (mean[m] - p[m]) * (mean[m] - p[m]);
    dmin = std::min(dmin, std::sqrt(d2));
  }
  return front.empty() ? 0.0 : mpoi * dmin;
}

InfillProblem::InfillProblem(const DesignSpace& space, std::vector<const GpModel*> objectives,
                             std::vector<const GpModel*> constraints, std::vector<std::vector<double>> front,
                             InfillOptions options)
    : space_(space),
      objectives_(std::move(objectives)),
      constraints_(std::move(constraints)),
      front_(std::move(front)),
      options_(options) {
  if (objectives_.empty()) throw ConfigError("infill problem needs at least one objective model");
  if (front_.empty()) throw ConfigError("infill problem needs a nonempty current front");
}

void InfillProblem::set_pov(const PovModel* model, PovIntegration integration, double pov_min) {
  pov_ = model;
  integration_ = integration;
  pov_min_ = pov_min;
}

int InfillProblem::n_criteria() const {
  if (objectives_.size() == 1) return 3;
  return options_.use_mepoi ? 2 : 1;
}

int InfillProblem::n_constraints() const {
  return static_cast<int>(constraints_.size()) + (pov_ && integration_ == PovIntegration::constraint ? 1 : 0);
}

std::vector<InfillProblem::Raw> InfillProblem::evaluate_raw(const std::vector<DesignVector>& x) const {
  const std::size_t n = x.size();
  std::vector<Raw> out(n);
  const std::size_t nf = objectives_.size();
  std::vector<std::vector<double>> mean(nf), sd(nf);
  for (std::size_t m = 0; m < nf; ++m) objectives_[m]->predict(x, mean[m], sd[m]);

  if (nf == 1) {
    double y_min = std::numeric_limits<double>::infinity();
    for (const auto& p : front_) y_min = std::min(y_min, p[0]);
    for (std::size_t i = 0; i < n; ++i) {
      const double mu = mean[0][i], s = sd[0][i];
      out[i].crit = {lower_confidence_bound(mu, s, options_.beta), -expected_improvement(mu, s, y_min),
                     -probability_of_improvement(mu, s, y_min)};
    }
  } else {
    std::vector<double> mu(nf), s(nf);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m < nf; ++m) {
        mu[m] = mean[m][i];
        s[m] = sd[m][i];
      }
      const double mpoi = minimum_poi(mu, s, front_);
      out[i].crit = {-mpoi};
      if (options_.use_mepoi) out[i].crit.push_back(-minimum_euclidean_poi(mu, s, front_));
    }
  }

  std::vector<double> gm, gs;
  for (const auto* c : constraints_) {
    c->predict(x, gm, gs);
    for (std::size_t i = 0; i < n; ++i) out[i].g.push_back(gm[i]);
  }
  if (pov_) {
    const auto pov = pov_->predict(x);
    for (std::size_t i = 0; i < n; ++i) {
      out[i].pov = pov[i];
      if (integration_ == PovIntegration::constraint) out[i].g.push_back(infill_constraint_pov(pov[i], pov_min_));
    }
  }
  return out;
}

NormBounds InfillProblem::bounds_of(const std::vector<Raw>& raw) const {
  const std::size_t nc = static_cast<std::size_t>(n_criteria());
  NormBounds b;
  b.lower.assign(nc, std::numeric_limits<double>::infinity());
  b.upper.assign(nc, -std::numeric_limits<double>::infinity());
  for (const auto& r : raw)
    for (std::size_t c = 0; c < nc; ++c) {
      b.lower[c] = std::min(b.lower[c], r.crit[c]);
      b.upper[c] = std::max(b.upper[c], r.crit[c]);
    }
  return b;
}

std::vector<double> InfillProblem::objectives(const Raw& raw, const NormBounds& bounds) const {
  std::vector<double> f(raw.crit.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double range = bounds.upper[c] - bounds.lower[c];
    f[c] = range > 0.0 ? (raw.crit[c] - bounds.lower[c]) / range : 0.0;
  }
  if (pov_ && integration_ == PovIntegration::penalty) return infill_penalty_pov(f, raw.pov);
  return f;
}

double InfillProblem::violation(const Raw& raw) const {
  double v = 0.0;
  for (double g : raw.g) v += std::max(g, 0.0);
  return v;
}

InfillResult optimize_infill(const InfillProblem& problem, std::vector<DesignVector> initial) {
  const auto n_crit = static_cast<std::size_t>(problem.n_criteria());
  NormBounds bounds;
  const PopulationEvaluator evaluate = [&](std::vector<Individual>& pop, std::size_t first_new) {
    if (first_new < pop.size()) {
      std::vector<DesignVector> xs;
      for (std::size_t i = first_new; i < pop.size(); ++i) xs.push_back(pop[i].x);
      const auto raw = problem.evaluate_raw(xs);
      for (std::size_t i = first_new; i < pop.size(); ++i) {
        const auto& r = raw[i - first_new];
        pop[i].raw = r.crit;
        pop[i].raw.insert(pop[i].raw.end(), r.g.begin(), r.g.end());
        pop[i].raw.push_back(r.pov);
        pop[i].violation = problem.violation(r);
      }
    }
    std::vector<InfillProblem::Raw> raw(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
      raw[i].crit.assign(pop[i].raw.begin(), pop[i].raw.begin() + static_cast<std::ptrdiff_t>(n_crit));
      raw[i].pov = pop[i].raw.back();
    }
    bounds = problem.bounds_of(raw);
    for (std::size_t i = 0; i < pop.size(); ++i) pop[i].f = problem.objectives(raw[i], bounds);
  };

  auto pop = nsga2(problem.space(), std::move(initial), evaluate, problem.options().nsga2);

  InfillResult res;
  res.bounds = bounds;
  double min_violation = std::numeric_limits<double>::infinity();
  for (const auto& ind : pop) min_violation = std::min(min_violation, ind.violation);
  res.feasible = min_violation <= 0.0;
  for (const auto& ind : pop) {
    if (ind.rank != 0) continue;
    if (!res.feasible && ind.violation > min_violation) continue;
    res.candidates.push_back(ind.x);
    res.objectives.push_back(ind.f);
    res.violation.push_back(ind.violation);
  }
  return res;
}

BatchSelection select_batch(const InfillResult& pareto, int n_batch, std::uint64_t seed,
                            const std::vector<DesignVector>& archive, CrowdingSelect mode) {
  BatchSelection sel;
  if (n_batch < 1) return sel;

  using Key = std::pair<std::vector<int>, std::vector<double>>;
  std::set<Key> taken;
  for (const auto& x : archive) taken.insert({x.discrete, x.continuous});
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < pareto.candidates.size(); ++i) {
    const auto& x = pareto.candidates[i];
    if (taken.insert({x.discrete, x.continuous}).second) pool.push_back(i);
  }

  std::vector<std::size_t> order;
  if (n_batch == 1) {
    if (!pool.empty()) {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      order.push_back(pool[pick(rng)]);
    }
  } else if (mode == CrowdingSelect::lowest) {
    std::vector<std::vector<double>> f;
    for (std::size_t i : pool) f.push_back(pareto.objectives[i]);
    const auto cd = crowding_distance(f);
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (cd[a] != cd[b]) return cd[a] < cd[b];
      if (f[a] != f[b]) return f[a] < f[b];
      return a < b;
    });
    for (std::size_t k : idx) order.push_back(pool[k]);
  } else {
    // Repeatedly drop the most crowded point; the eliminated points form the backfill tail.
    std::vector<std::size_t> keep = pool;
    std::vector<std::size_t> dropped;
    while (keep.size() > static_cast<std::size_t>(n_batch)) {
      std::vector<std::vector<double>> f;
      for (std::size_t i : keep) f.push_back(pareto.objectives[i]);
      const auto cd = crowding_distance(f);
      std::size_t worst = 0;
      for (std::size_t k = 1; k < keep.size(); ++k)
        if (cd[k] < cd[worst] || (cd[k] == cd[worst] && f[k] > f[worst])) worst = k;
      dropped.push_back(keep[worst]);
      keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    order = keep;
    order.insert(order.end(), dropped.rbegin(), dropped.rend());
  }

  for (std::size_t i : order) {
    if (static_cast<int>(sel.points.size()) >= n_batch) break;
    sel.points.push_back(pareto.candidates[i]);
    sel.indices.push_back(i);
  }
  sel.shortfall = static_cast<int>(sel.points.size()) < n_batch;
  return sel;
}

namespace {

double impr_from(const std::vector<double>& f, const std::vector<double>& f_sel) {
  double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t m = 0; m < f.size(); ++m) {
    const double d = f[m] - f_sel[m];
    sum += d;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return sum + 100.0 * (hi - lo) * (hi - lo);
}

}  // namespace

double improvement_measure(const DesignVector& x, const DesignVector& x_sel, const InfillProblem& problem,
                           const NormBounds& bounds) {
  const auto raw = problem.evaluate_raw({x_sel, x});
  return impr_from(problem.objectives(raw[1], bounds), problem.objectives(raw[0], bounds));
}

DesignVector refine_continuous(const DesignVector& x_sel, const InfillProblem& problem, const NormBounds& bounds) {
  const DesignSpace& space = problem.space();
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < space.n_continuous(); ++i)
    if (x_sel.active[space.continuous_var(i)]) vars.push_back(i);
  if (vars.empty()) return x_sel;

  const auto raw_sel = problem.evaluate_raw({x_sel});
  const auto f_sel = problem.objectives(raw_sel[0], bounds);
  const double cv_limit = problem.violation(raw_sel[0]);

  auto width = [&](std::size_t i) {
    const auto& def = space.continuous_def(i);
    return def.upper - def.lower;
  };

  DesignVector x = x_sel;
  double f_cur = 0.0;
  constexpr double h = 1e-6;
  for (int iter = 0; iter < 30; ++iter) {
    // Forward differences in unit coordinates, backward at the upper bound.
    std::vector<DesignVector> probes;
    std::vector<double> signs;
    for (std::size_t i : vars) {
      DesignVector p = x;
      const auto& def = space.continuous_def(i);
      const double step = h * width(i);
      const double sign = p.continuous[i] + step <= def.upper ? 1.0 : -1.0;
      p.continuous[i] += sign * step;
      probes.push_back(std::move(p));
      signs.push_back(sign);
    }
    const auto raw = problem.evaluate_raw(probes);
    std::vector<double> grad(vars.size());
    double gnorm = 0.0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      grad[k] = signs[k] * (impr_from(problem.objectives(raw[k], bounds), f_sel) - f_cur) / h;
      gnorm += grad[k] * grad[k];
    }
    gnorm = std::sqrt(gnorm);
    if (!(gnorm > 1e-12)) break;

    bool moved = false;
    for (double t = 0.1; t >= 1e-5; t *= 0.5) {
      DesignVector trial = x;
      for (std::size_t k = 0; k < vars.size(); ++k) {
        const auto& def = space.continuous_def(vars[k]);
        trial.continuous[vars[k]] =
            std::clamp(x.continuous[vars[k]] - t * grad[k] / gnorm * width(vars[k]), def.lower, def.upper);
      }
      if (trial == x) continue;
      const auto r = problem.evaluate_raw({trial});
      const double f_trial = impr_from(problem.objectives(r[0], bounds), f_sel);
      if (f_trial < f_cur && problem.violation(r[0]) <= cv_limit) {
        x = std::move(trial);
        f_cur = f_trial;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return f_cur < 0.0 ? x : x_sel;
}

}  // namespace hcbo
