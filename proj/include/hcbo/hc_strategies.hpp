#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hcbo/design_space.hpp"
#include "hcbo/gp.hpp"
#include "hcbo/pov.hpp"

namespace hcbo {

struct EvaluatedPoint {
  DesignVector x;
  std::vector<double> f;
  std::vector<double> g;
  bool viable = false;
};

enum class StrategyKind { rejection, replace, predict };
enum class ReplaceMode { closest, nearest_mean, nearest_max, global_max, predicted_worst };
enum class PovIntegration { constraint, penalty };

struct StrategyConfig {
  StrategyKind kind = StrategyKind::predict;
  ReplaceMode mode = ReplaceMode::global_max;
  int n_nearest = 5;
  double alpha = 1.0;
  PovVariant model = PovVariant::mdgp;
  PovIntegration integration = PovIntegration::constraint;
  double pov_min = 0.25;

  /// Parses the CLI grammar, e.g. "rejection", "replace:nearest-max:5",
  /// "replace:predicted-worst:a=1.0", "predict:rfc:pov=0.25", "predict:mdgp:penalty".
  static StrategyConfig parse(const std::string& spec);
  /// Canonical spec string; parse(to_string()) round-trips.
  std::string to_string() const;
  void validate() const;
};

/// Surrogate training data derived from the archive. Outputs are ordered f then g.
struct TrainingData {
  std::vector<DesignVector> x;
  std::vector<std::vector<double>> y;  // y[output][point]
  bool has_labels = false;
  std::vector<DesignVector> label_x;
  std::vector<int> labels;
};

TrainingData build_training_sets(const DesignSpace& space, const std::vector<EvaluatedPoint>& archive,
                                 const StrategyConfig& cfg, const GpOptions& gp_options = {});

/// g_PoV = pov_min - PoV; satisfied when <= 0.
inline double infill_constraint_pov(double pov, double pov_min) { return pov_min - pov; }
std::function<double(const DesignVector&)> infill_constraint_pov(const PovModel& model, double pov_min);

/// f_mod = 1 - (1 - f) * pov, per objective.
inline double infill_penalty_pov(double f, double pov) { return 1.0 - (1.0 - f) * pov; }
std::vector<double> infill_penalty_pov(const std::vector<double>& f, double pov);

}  // namespace hcbo
