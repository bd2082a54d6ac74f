#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcbo/design_space.hpp"
#include "hcbo/hc_strategies.hpp"

namespace hcbo {

/// Published benchmark dimensions; ir and fail_rate are NaN when not listed.
struct TableMetadata {
  int n_xc = 0;
  int n_xd = 0;
  int n_f = 1;
  int n_g = 0;
  double ir = 0.0;
  double fail_rate = 0.0;  // fraction
};

/// Writes f and g for a repaired vector and returns false when the hidden constraint is violated.
using EvaluateFn = std::function<bool(const DesignVector& x, std::vector<double>& f, std::vector<double>& g)>;

struct ProblemDef {
  std::string name;   // CLI identifier, e.g. "alimo-edge"
  std::string label;  // display name, e.g. "Alimo Edge"
  DesignSpace space;
  int n_f = 1;
  int n_g = 0;
  EvaluateFn fn;
  TableMetadata table;
  bool engineering = false;  // formula-based engineering problem (wider fail-rate tolerance)
  bool compare_discrete_ir = false;  // table IR refers to the discrete ratio only
};

const std::vector<ProblemDef>& registry();
/// Throws ConfigError for unknown names.
const ProblemDef& find_problem(const std::string& name);

/// Evaluates a repaired vector; failed points carry all-NaN outputs.
EvaluatedPoint evaluate(const ProblemDef& problem, const DesignVector& x);

/// Fraction of failed points among n hierarchical samples.
double fail_rate_monte_carlo(const ProblemDef& problem, int n, std::uint64_t seed);

/// Reference optimum or Pareto front, stored under <data dir>/reference/<name>.txt.
struct ReferenceData {
  std::vector<std::vector<double>> front;  // one row per point, n_f columns
  double scale = 1.0;                      // single-objective normalization scale
};

/// Data directory: $HCBO_DATA_DIR if set, else the configured build default.
std::string data_dir();
std::string reference_path(const ProblemDef& problem);
/// Throws ConfigError when the reference file is missing or malformed.
ReferenceData load_reference(const ProblemDef& problem);
void save_reference(const ProblemDef& problem, const ReferenceData& ref, const std::string& path);

// Building blocks exposed for tests.
double branin(double u1, double u2);
void carside(const std::vector<double>& x, std::vector<double>& f, std::vector<double>& g);
void cantilevered_beam(const std::vector<double>& x, double& f, double& g1, double& g2);

}  // namespace hcbo
