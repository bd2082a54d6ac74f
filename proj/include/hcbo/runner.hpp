#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcbo/hc_strategies.hpp"
#include "hcbo/infill.hpp"
#include "hcbo/sampling.hpp"

namespace hcbo {

struct RunConfig {
  std::string problem;
  StrategyConfig strategy;
  int n_infill = 50;
  int n_batch = 1;
  DoeConfig doe;
  int n_doe = 0;  // 0: doe_size(doe, n_x)
  int repetitions = 16;
  std::uint64_t seed = 0;  // master seed
  std::string out_dir;

  int infill_pop_size = 100;
  int infill_generations = 50;
  bool refine = true;
  CrowdingSelect crowding = CrowdingSelect::lowest;
  int gp_starts = 8;       // multi-start count for the first fit
  int gp_warm_starts = 2;  // starts once a warm start is available

  void validate() const;
};

/// One BO iteration (iteration 0 is the DoE).
struct RunRecord {
  int iteration = 0;
  int evaluations = 0;  // cumulative
  std::vector<EvaluatedPoint> batch;
  std::vector<std::vector<double>> front;  // nondominated viable feasible objective vectors
  double delta_hv = 1.0;                   // NaN when no reference data is available
  double t_train_s = 0.0;
  double t_infill_s = 0.0;
};

struct RunSummary {
  std::string problem, strategy;
  int rep = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  int n_doe = 0;
  int n_evaluations = 0;
  double regret = 0.0;
  double final_delta_hv = 0.0;
  double fail_rate = 0.0;  // over infill evaluations
  double train_time_s = 0.0;
  double infill_time_s = 0.0;
};

/// Stable per-repetition seed from (master seed, problem, strategy, rep).
std::uint64_t repetition_seed(std::uint64_t master, const std::string& problem, const std::string& strategy, int rep);

/// Single BO run with the given seed. Writes JSON lines to log_path when nonempty.
std::vector<RunRecord> run_bo(const RunConfig& cfg, std::uint64_t seed, const std::string& log_path = {});

RunSummary summarize_run(const RunConfig& cfg, const std::vector<RunRecord>& records);

/// File stem "<problem>__<strategy>__rep<k>" with file-system safe characters.
std::string run_stem(const std::string& problem, const std::string& strategy, int rep);

/// Runs cfg.repetitions reps into cfg.out_dir, skipping reps whose summary
/// sidecar already reports success.
std::vector<RunSummary> run_repetitions(const RunConfig& cfg);

struct CampaignConfig {
  std::vector<std::string> problems;
  std::vector<std::string> strategies;
  RunConfig base;  // problem and strategy are overwritten per cell
};

/// Parses flat "key = value" text; '#' starts a comment.
CampaignConfig parse_campaign_config(const std::string& text);

std::vector<RunSummary> run_campaign(const CampaignConfig& cfg);

/// Reads every summary sidecar below dir; crashed runs are skipped with a warning.
std::vector<RunSummary> load_summaries(const std::string& dir);

struct SummaryRow {
  std::string problem, strategy;
  int n_runs = 0;
  double median_regret = 0.0;
  int rank = 0;
  double fail_rate = 0.0;  // median over reps
  double train_time_s = 0.0;
  double infill_time_s = 0.0;
  // Percent change relative to the rejection strategy of the same problem (NaN without one).
  double rel_regret = 0.0, rel_fail_rate = 0.0, rel_train_time = 0.0, rel_infill_time = 0.0;
};

std::vector<SummaryRow> summary_table(const std::vector<RunSummary>& runs);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);
/// Rank-1 / Rank<=2 fractions per strategy across problems.
void write_rank_csv(const std::vector<SummaryRow>& rows, const std::string& path);

/// Median and interquartile delta-HV against evaluation count per (problem, strategy).
void write_plotdata(const std::string& dir, const std::string& path);

}  // namespace hcbo
