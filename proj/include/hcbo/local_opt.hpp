#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hcbo {

struct LocalOptResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;

/// Nelder-Mead minimization inside the box [lower, upper]; trial points are
/// clamped to the box. `step` is the initial simplex edge as a fraction of the
/// box width.
LocalOptResult nelder_mead_box(const ObjectiveFn& f, std::vector<double> x0, std::span<const double> lower,
                               std::span<const double> upper, int max_evaluations, double ftol = 1e-8,
                               double step = 0.2);

}  // namespace hcbo
