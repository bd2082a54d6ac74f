#pragma once

#include <map>
#include <string>
#include <vector>

namespace hcbo {

using PointSet = std::vector<std::vector<double>>;

/// Points that no other point of the set dominates (duplicates kept once).
PointSet nondominated(const PointSet& points);

/// Exact hypervolume for 1 to 3 objectives; points not strictly better than
/// ref in every objective are ignored.
double hypervolume(const PointSet& points, const std::vector<double>& ref);

/// HV reference point: nadir + 0.1 * (nadir - ideal) of the reference front.
std::vector<double> hv_reference_point(const PointSet& reference_front);

/// (HV(reference) - HV(current)) / HV(reference), clipped to [0, 1]; 1 for an empty current set.
double delta_hv(const PointSet& current, const PointSet& reference_front, const std::vector<double>& ref_point);

/// Single-objective distance to the optimum: (f_best - f_opt) / max(|f_opt|, scale), clipped to [0, 1].
double delta_hv_single(double f_best, double f_opt, double scale);

/// Trapezoid of delta-HV over cumulative evaluations, normalized by the evaluation span.
double regret(const std::vector<double>& evaluations, const std::vector<double>& delta_hv);

/// Two-sided Mann-Whitney U test p-value. Exact null distribution without ties
/// for small samples, otherwise a tie-corrected normal approximation with continuity correction.
double mann_whitney_p(const std::vector<double>& a, const std::vector<double>& b);

double median(std::vector<double> v);

struct StrategyRanking {
  std::vector<std::string> strategies;  // sorted by median
  std::vector<int> ranks;               // 1-based, aligned with strategies
};

/// Sort by median; a strategy joins the current rank unless the rank-sum test
/// against the rank's best strategy gives p < alpha.
StrategyRanking rank_strategies(const std::map<std::string, std::vector<double>>& samples, double alpha = 0.05);

struct RankAggregate {
  double rank1 = 0.0;    // fraction of problems ranked first
  double rank_le2 = 0.0; // fraction of problems ranked first or second
};

/// Aggregates per-problem rankings into per-strategy fractions.
std::map<std::string, RankAggregate> aggregate_ranks(const std::vector<StrategyRanking>& per_problem);

}  // namespace hcbo
