#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hcbo/design_space.hpp"
#include "hcbo/gp.hpp"

namespace hcbo {

enum class PovVariant { rfc, knn, rbf, mdgp };

std::string to_string(PovVariant v);
PovVariant parse_pov_variant(const std::string& name);

struct PovOptions {
  PovVariant variant = PovVariant::mdgp;
  int n_trees = 100;
  int k = 5;
  std::uint64_t seed = 0;
  GpOptions gp;
};

/// Probability-of-viability predictor trained on binary labels (1 = viable).
class PovModel {
 public:
  PovModel();
  ~PovModel();
  PovModel(PovModel&&) noexcept;
  PovModel& operator=(PovModel&&) noexcept;

  static PovModel fit(const DesignSpace& space, const std::vector<DesignVector>& x, const std::vector<int>& labels,
                      const PovOptions& options = {});

  double predict(const DesignVector& x) const;
  std::vector<double> predict(const std::vector<DesignVector>& x) const;

  PovVariant variant() const { return variant_; }
  /// True when the training labels held a single class; predictions are then constant.
  bool degenerate() const { return degenerate_; }
  /// Fitted GP length-scales of the mdgp variant (empty otherwise).
  std::vector<double> length_scales() const;

 private:
  struct Impl;
  PovVariant variant_ = PovVariant::mdgp;
  bool degenerate_ = false;
  double constant_ = 1.0;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hcbo
