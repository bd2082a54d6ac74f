#pragma once

#include <cstdint>
#include <vector>

#include "hcbo/design_space.hpp"
#include "hcbo/gp.hpp"
#include "hcbo/hc_strategies.hpp"
#include "hcbo/nsga2.hpp"
#include "hcbo/pov.hpp"

namespace hcbo {

// Closed-form criteria on a Gaussian prediction (minimization of y).
double expected_improvement(double mean, double std, double y_min);
double probability_of_improvement(double mean, double std, double y_min);
double lower_confidence_bound(double mean, double std, double beta);
/// Minimum over front points of the probability of not being dominated by that point.
double minimum_poi(const std::vector<double>& mean, const std::vector<double>& std,
                   const std::vector<std::vector<double>>& front);
/// MPoI times the smallest Euclidean distance to the front, or 0 when MPoI < 0.5.
double minimum_euclidean_poi(const std::vector<double>& mean, const std::vector<double>& std,
                             const std::vector<std::vector<double>>& front);

enum class CrowdingSelect { lowest, highest };

struct InfillOptions {
  double beta = 2.0;
  bool use_mepoi = true;
  Nsga2Options nsga2;
};

/// Per-criterion min-max normalization bounds of the raw (minimization-oriented) values.
struct NormBounds {
  std::vector<double> lower, upper;
};

/// Ensemble infill problem: {LCB, EI, PoI} for one objective, {MPoI, MEPoI}
/// for several; predicted constraints g <= 0 and optionally g_PoV <= 0.
class InfillProblem {
 public:
  InfillProblem(const DesignSpace& space, std::vector<const GpModel*> objectives,
                std::vector<const GpModel*> constraints, std::vector<std::vector<double>> front,
                InfillOptions options = {});

  /// Attach a PoV model as constraint (pov_min) or objective penalty.
  void set_pov(const PovModel* model, PovIntegration integration, double pov_min);

  const DesignSpace& space() const { return space_; }
  int n_criteria() const;
  int n_constraints() const;
  const InfillOptions& options() const { return options_; }

  struct Raw {
    std::vector<double> crit;  // minimization-oriented criterion values
    std::vector<double> g;     // predicted constraints incl. g_PoV
    double pov = 1.0;
  };
  std::vector<Raw> evaluate_raw(const std::vector<DesignVector>& x) const;
  NormBounds bounds_of(const std::vector<Raw>& raw) const;
  /// Normalized (and PoV-penalized) objectives in [0,1].
  std::vector<double> objectives(const Raw& raw, const NormBounds& bounds) const;
  double violation(const Raw& raw) const;

 private:
  const DesignSpace& space_;
  std::vector<const GpModel*> objectives_;
  std::vector<const GpModel*> constraints_;
  std::vector<std::vector<double>> front_;
  InfillOptions options_;
  const PovModel* pov_ = nullptr;
  PovIntegration integration_ = PovIntegration::constraint;
  double pov_min_ = 0.0;
};

struct InfillResult {
  std::vector<DesignVector> candidates;  // nondominated set (or least-violation set)
  std::vector<std::vector<double>> objectives;
  std::vector<double> violation;
  bool feasible = true;
  NormBounds bounds;  // normalization of the final population
};

/// NSGA-II over the design space; `initial` seeds the population.
InfillResult optimize_infill(const InfillProblem& problem, std::vector<DesignVector> initial);

struct BatchSelection {
  std::vector<DesignVector> points;
  std::vector<std::size_t> indices;  // into the candidate list
  bool shortfall = false;
};

/// Picks n_batch unique candidates not already in `archive`: seeded random for
/// one point, otherwise by crowding distance (lowest first by default).
BatchSelection select_batch(const InfillResult& pareto, int n_batch, std::uint64_t seed,
                            const std::vector<DesignVector>& archive = {},
                            CrowdingSelect mode = CrowdingSelect::lowest);

/// Local descent on the active continuous variables of x_sel minimizing
/// sum(df) + 100 (max df - min df)^2 with predicted constraints kept satisfied;
/// returns x_sel unless the improvement measure is negative.
DesignVector refine_continuous(const DesignVector& x_sel, const InfillProblem& problem, const NormBounds& bounds);

/// Improvement measure of `x` relative to `x_sel` under fixed normalization.
double improvement_measure(const DesignVector& x, const DesignVector& x_sel, const InfillProblem& problem,
                           const NormBounds& bounds);

}  // namespace hcbo
