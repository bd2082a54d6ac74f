#include "hcbo/local_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hcbo {

LocalOptResult nelder_mead_box(const ObjectiveFn& f, std::vector<double> x0, std::span<const double> lower,
                               std::span<const double> upper, int max_evaluations, double ftol, double step) {
  const std::size_t n = x0.size();
  LocalOptResult result;
  auto clamp_in = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
  };
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? HUGE_VAL : v;
  };

  clamp_in(x0);
  if (n == 0) {
    result.x = x0;
    result.value = eval(x0);
    return result;
  }

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double width = upper[i] - lower[i];
    double& xi = simplex[i + 1][i];
    xi += step * width;
    if (xi > upper[i]) xi = x0[i] - step * width;
    clamp_in(simplex[i + 1]);
  }
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  while (result.evaluations < max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (std::abs(values[worst] - values[best]) <= ftol * (std::abs(values[best]) + ftol)) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i] / static_cast<double>(n);

    for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + (centroid[i] - simplex[worst][i]);
    clamp_in(trial);
    const double f_reflect = eval(trial);

    if (f_reflect < values[best]) {
      for (std::size_t i = 0; i < n; ++i) trial2[i] = centroid[i] + 2.0 * (trial[i] - centroid[i]);
      clamp_in(trial2);
      const double f_expand = eval(trial2);
      if (f_expand < f_reflect) {
        simplex[worst] = trial2;
        values[worst] = f_expand;
      } else {
        simplex[worst] = trial;
        values[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < values[second]) {
      simplex[worst] = trial;
      values[worst] = f_reflect;
      continue;
    }

    const bool outside = f_reflect < values[worst];
    for (std::size_t i = 0; i < n; ++i)
      trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                          : centroid[i] + 0.5 * (simplex[worst][i] - centroid[i]);
    clamp_in(trial2);
    const double f_contract = eval(trial2);
    if (f_contract < std::min(f_reflect, values[worst])) {
      simplex[worst] = trial2;
      values[worst] = f_contract;
      continue;
    }

    // shrink toward the best vertex
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t idx = order[k];
      for (std::size_t i = 0; i < n; ++i) simplex[idx][i] = simplex[best][i] + 0.5 * (simplex[idx][i] - simplex[best][i]);
      values[idx] = eval(simplex[idx]);
    }
  }

  const auto it = std::min_element(values.begin(), values.end());
  result.x = simplex[static_cast<std::size_t>(it - values.begin())];
  result.value = *it;
  return result;
}

}  // namespace hcbo
