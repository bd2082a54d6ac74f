#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "hcbo/errors.hpp"
#include "hcbo/sampling.hpp"

using namespace hcbo;

TEST_CASE("doe size") {
  CHECK(doe_size({2.0, 0.6, 0}, 10) == 50);
  CHECK(doe_size({2.0, 0.6, 0}, 2) == 10);
  CHECK(doe_size({2.0, 0.0, 0}, 7) == 14);
  CHECK(doe_size({1.5, 0.5, 0}, 3) == 9);
}

TEST_CASE("sobol rows match an unscrambled direction-number reference") {
  // reference rows 1, 2 and 8 of the unscrambled 21-dimensional sequence
  const std::vector<double> row2 = {0.75, 0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75, 0.75, 0.75, 0.75,
                                    0.75, 0.25, 0.25, 0.75, 0.25, 0.75, 0.25, 0.75, 0.25, 0.25};
  const std::vector<double> row8 = {0.1875, 0.3125, 0.9375, 0.4375, 0.5625, 0.3125, 0.4375,
                                    0.9375, 0.9375, 0.3125, 0.6875, 0.0625, 0.9375, 0.9375,
                                    0.8125, 0.9375, 0.8125, 0.8125, 0.9375, 0.3125, 0.1875};
  const Eigen::MatrixXd m = sobol_fill(8, kSobolMaxDims);
  for (int j = 0; j < kSobolMaxDims; ++j) {
    CHECK(m(0, j) == 0.5);
    CHECK(m(1, j) == row2[static_cast<std::size_t>(j)]);
    CHECK(m(7, j) == row8[static_cast<std::size_t>(j)]);
  }
}

TEST_CASE("sobol 1-D spacing, determinism and seeded shift") {
  const Eigen::MatrixXd a = sobol_fill(4, 1);
  CHECK(a(0, 0) == 0.5);
  CHECK(a(1, 0) == 0.75);
  CHECK(a(2, 0) == 0.25);
  std::vector<double> v(a.data(), a.data() + 4);
  std::sort(v.begin(), v.end());
  for (int i = 1; i < 4; ++i) CHECK(v[i] - v[i - 1] >= 0.125);

  CHECK(sobol_fill(64, 5, 3) == sobol_fill(64, 5, 3));
  CHECK(sobol_fill(64, 5, 3) != sobol_fill(64, 5, 4));
  const Eigen::MatrixXd s = sobol_fill(256, 3, 11);
  CHECK(s.minCoeff() >= 0.0);
  CHECK(s.maxCoeff() < 1.0);
}

namespace {

// Star discrepancy over anchored boxes with corners at the sample coordinates (and 1).
double star_discrepancy(const std::vector<std::array<double, 2>>& p) {
  std::vector<double> xs{1.0}, ys{1.0};
  for (const auto& q : p) {
    xs.push_back(q[0]);
    ys.push_back(q[1]);
  }
  double worst = 0.0;
  const double n = static_cast<double>(p.size());
  for (double x : xs)
    for (double y : ys) {
      int open = 0, closed = 0;
      for (const auto& q : p) {
        open += q[0] < x && q[1] < y;
        closed += q[0] <= x && q[1] <= y;
      }
      worst = std::max({worst, x * y - open / n, closed / n - x * y});
    }
  return worst;
}

}  // namespace

TEST_CASE("sobol discrepancy below random sampling") {
  std::vector<std::array<double, 2>> pts;
  const Eigen::MatrixXd m = sobol_fill(256, 2);
  for (int i = 0; i < 256; ++i) pts.push_back({m(i, 0), m(i, 1)});
  const double d_sobol = star_discrepancy(pts);
  std::vector<double> d_random;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::array<double, 2>> r;
    for (int i = 0; i < 256; ++i) r.push_back({u(rng), u(rng)});
    d_random.push_back(star_discrepancy(r));
  }
  std::nth_element(d_random.begin(), d_random.begin() + 10, d_random.end());
  CHECK(d_sobol < d_random[10]);
}

TEST_CASE("group allocation") {
  const std::vector<int> a = allocate_groups(7, 3, 1);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{2, 2, 3});
  CHECK(allocate_groups(7, 3, 1) == a);
  for (int n : {3, 10, 50})
    for (int v : allocate_groups(n, 3, 9)) CHECK(v >= 1);
}

TEST_CASE("hierarchical sample: repaired, covers all groups, deterministic") {
  const DesignSpace s = fixtures::jet_engine();
  const ValidDiscreteSet valid = enumerate_valid_discrete(s);
  std::set<std::vector<bool>> groups(valid.activeness.begin(), valid.activeness.end());

  const auto xs = hierarchical_sample(s, valid, 60, 4);
  REQUIRE(xs.size() == 60);
  std::set<std::vector<bool>> seen;
  for (const auto& x : xs) {
    CHECK(s.is_repaired(x));
    seen.insert(x.active);
  }
  CHECK(seen == groups);
  CHECK(hierarchical_sample(s, valid, 60, 4) == xs);

  CHECK_THROWS_AS(hierarchical_sample(s, ValidDiscreteSet{}, 5, 0), EmptyValidSet);
}

TEST_CASE("hierarchical sample on a flat space is plain sampling") {
  const DesignSpace s({VariableDef::continuous(-1, 1), VariableDef::continuous(0, 10)});
  const auto xs = hierarchical_sample(s, enumerate_valid_discrete(s), 16, 0);
  std::set<std::vector<double>> unique;
  for (const auto& x : xs) {
    CHECK(x.continuous[0] >= -1.0);
    CHECK(x.continuous[1] <= 10.0);
    unique.insert(x.continuous);
  }
  CHECK(unique.size() == 16);
}
