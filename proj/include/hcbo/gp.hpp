#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hcbo/design_space.hpp"

namespace hcbo {

struct GpOptions {
  int n_starts = 8;
  int max_evaluations_per_start = 150;
  double length_scale_lower = 1e-2;
  double length_scale_upper = 1e2;
  std::uint64_t seed = 0;
  // Optional starting point (length-scales) tried first, e.g. last iteration's fit.
  std::vector<double> warm_start;
};

struct GpPrediction {
  double mean = 0.0;
  double std = 0.0;
};

/// Zero-mean GP on standardized targets with a product kernel over the unit
/// encoded inputs: squared exponential for continuous and integer variables,
/// exp(-[a != b] / l) for categorical ones. Inactive variables enter with their
/// imputed values.
class GpModel {
 public:
  GpModel() = default;

  /// Maximum-likelihood fit of the length-scales; the signal variance is
  /// profiled out analytically.
  static GpModel fit(const DesignSpace& space, const std::vector<DesignVector>& x, const std::vector<double>& y,
                     const GpOptions& options = {});

  /// Fit with fixed length-scales (one per variable).
  static GpModel fit_fixed(const DesignSpace& space, const std::vector<DesignVector>& x,
                           const std::vector<double>& y, const std::vector<double>& length_scales);

  GpPrediction predict(const DesignVector& x) const;
  void predict(const std::vector<DesignVector>& x, std::vector<double>& mean, std::vector<double>& std) const;

  const std::vector<double>& length_scales() const { return length_scales_; }
  /// Signal variance in output units.
  double signal_variance() const { return sigma2_ * y_std_ * y_std_; }
  double jitter() const { return jitter_; }
  double y_mean() const { return y_mean_; }
  double y_std() const { return y_std_; }
  bool is_constant() const { return constant_; }
  std::size_t n_train() const { return static_cast<std::size_t>(u_.rows()); }
  double log_likelihood() const { return log_likelihood_; }

 private:
  static GpModel prepare(const DesignSpace& space, const std::vector<DesignVector>& x, const std::vector<double>& y);
  void finalize(const std::vector<double>& length_scales);
  void kernel_row(const Eigen::Ref<const Eigen::RowVectorXd>& u, Eigen::Ref<Eigen::RowVectorXd> out,
                  bool& exact) const;

  std::vector<bool> categorical_;
  std::vector<double> length_scales_;
  std::vector<double> weights_;  // per-variable exponent weight
  Eigen::MatrixXd u_;            // n x d encoded training inputs
  Eigen::VectorXd ys_;           // standardized targets
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;        // R^-1 ys
  double y_mean_ = 0.0;
  double y_std_ = 1.0;
  double sigma2_ = 1.0;
  double jitter_ = 0.0;
  double log_likelihood_ = 0.0;
  bool constant_ = false;
  DesignSpace space_;
};

}  // namespace hcbo
