#include <doctest.h>

#include <cmath>
#include <random>

#include "hcbo/errors.hpp"
#include "hcbo/gp.hpp"
#include "hcbo/problems.hpp"
#include "hcbo/sampling.hpp"

using namespace hcbo;

namespace {

const DesignSpace& branin_space() { return find_problem("branin").space; }

std::vector<DesignVector> sobol_points(const DesignSpace& s, int n, std::uint64_t seed) {
  return hierarchical_sample(s, enumerate_valid_discrete(s), n, seed);
}

double branin_at(const DesignVector& x) { return evaluate(find_problem("branin"), x).f[0]; }

}  // namespace

TEST_CASE("two-point 1-D fit interpolates") {
  const DesignSpace s({VariableDef::continuous(0, 1)});
  const std::vector<DesignVector> x = {s.repair(s.make({}, {0.0})), s.repair(s.make({}, {1.0}))};
  const GpModel gp = GpModel::fit(s, x, {0.0, 1.0});
  CHECK(std::abs(gp.predict(x[0]).mean - 0.0) <= 1e-6);
  CHECK(std::abs(gp.predict(x[1]).mean - 1.0) <= 1e-6);
}

TEST_CASE("constant targets") {
  const DesignSpace s({VariableDef::continuous(0, 1)});
  std::vector<DesignVector> x;
  for (double v : {0.1, 0.5, 0.9}) x.push_back(s.repair(s.make({}, {v})));
  const GpModel gp = GpModel::fit(s, x, {4.0, 4.0, 4.0});
  CHECK(gp.is_constant());
  const GpPrediction p = gp.predict(s.repair(s.make({}, {0.3})));
  CHECK(p.mean == doctest::Approx(4.0));
  CHECK(p.std <= 1e-9);
}

TEST_CASE("too few points") {
  const DesignSpace s({VariableDef::continuous(0, 1)});
  CHECK_THROWS_AS(GpModel::fit(s, {s.repair(s.make({}, {0.5}))}, {1.0}), TooFewPoints);
}

TEST_CASE("branin fit: interpolation and training-point std") {
  const DesignSpace& s = branin_space();
  const auto x = sobol_points(s, 20, 0);
  std::vector<double> y;
  for (const auto& p : x) y.push_back(branin_at(p));
  const GpModel gp = GpModel::fit(s, x, y);
  const double range = *std::max_element(y.begin(), y.end()) - *std::min_element(y.begin(), y.end());
  const double signal_std = std::sqrt(gp.signal_variance());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const GpPrediction p = gp.predict(x[i]);
    CHECK(std::abs(p.mean - y[i]) <= 1e-6 * range);
    CHECK(p.std <= 1e-3 * signal_std);
  }
}

TEST_CASE("branin leave-one-out error below the sample spread") {
  const DesignSpace& s = branin_space();
  const auto x = sobol_points(s, 20, 0);
  std::vector<double> y;
  for (const auto& p : x) y.push_back(branin_at(p));
  double sq = 0.0, mean = 0.0;
  for (double v : y) mean += v / y.size();
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean) / (y.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto xi = x;
    auto yi = y;
    xi.erase(xi.begin() + static_cast<long>(i));
    yi.erase(yi.begin() + static_cast<long>(i));
    const double e = GpModel::fit(s, xi, yi).predict(x[i]).mean - y[i];
    sq += e * e;
  }
  CHECK(std::sqrt(sq / x.size()) < std::sqrt(var));
}

TEST_CASE("prior reversion far from data") {
  const DesignSpace s({VariableDef::continuous(0, 100)});
  std::vector<DesignVector> x;
  std::vector<double> y;
  for (int i = 0; i < 6; ++i) {
    x.push_back(s.repair(s.make({}, {i * 0.5})));
    y.push_back(std::sin(i * 0.5) + 2.0);
  }
  // length-scale 0.005 of the unit range = 0.5 units; the query is > 10 length-scales away
  const GpModel gp = GpModel::fit_fixed(s, x, y, {0.005});
  const GpPrediction far = gp.predict(s.repair(s.make({}, {90.0})));
  double mean = 0.0;
  for (double v : y) mean += v / y.size();
  CHECK(std::abs(far.std - std::sqrt(gp.signal_variance())) <= 0.05 * std::sqrt(gp.signal_variance()));
  CHECK(std::abs(far.mean - mean) <= 0.05 * std::abs(mean));
}

TEST_CASE("affine output transform with fixed hyperparameters") {
  const DesignSpace& s = branin_space();
  const auto x = sobol_points(s, 15, 1);
  std::vector<double> y, y2;
  const double a = -3.5, b = 12.0;
  for (const auto& p : x) {
    y.push_back(branin_at(p));
    y2.push_back(a * y.back() + b);
  }
  const GpModel g1 = GpModel::fit(s, x, y);
  const GpModel g2 = GpModel::fit_fixed(s, x, y2, g1.length_scales());
  std::size_t argmin1 = 0, argmin2 = 0;
  double best1 = 1e300, best2 = 1e300;
  const auto queries = sobol_points(s, 40, 7);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const GpPrediction p1 = g1.predict(queries[i]), p2 = g2.predict(queries[i]);
    CHECK(p2.mean == doctest::Approx(a * p1.mean + b).epsilon(1e-8));
    CHECK(p2.std == doctest::Approx(std::abs(a) * p1.std).epsilon(1e-8));
    if (p1.mean < best1) best1 = p1.mean, argmin1 = i;
    if (-p2.mean < best2) best2 = -p2.mean, argmin2 = i;  // a < 0 flips the order
  }
  CHECK(argmin1 == argmin2);
}

TEST_CASE("mixed space fit: std nonnegative, training interpolation") {
  const ProblemDef& p = find_problem("h-alimo");
  const auto x = sobol_points(p.space, 30, 3);
  std::vector<DesignVector> xs;
  std::vector<double> y;
  for (const auto& v : x) {
    const EvaluatedPoint e = evaluate(p, v);
    if (!e.viable || std::find(xs.begin(), xs.end(), v) != xs.end()) continue;
    xs.push_back(v);
    y.push_back(e.f[0]);
  }
  REQUIRE(xs.size() >= 5);
  const GpModel gp = GpModel::fit(p.space, xs, y);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(gp.predict(xs[i]).mean == doctest::Approx(y[i]).epsilon(1e-6));
  for (const auto& q : sobol_points(p.space, 50, 9)) CHECK(gp.predict(q).std >= 0.0);
}
