#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "hcbo/errors.hpp"
#include "hcbo/problems.hpp"

using namespace hcbo;

namespace {

DesignVector random_raw(const DesignSpace& s, std::mt19937_64& rng) {
  std::vector<int> d;
  std::vector<double> c;
  for (std::size_t j = 0; j < s.n_discrete(); ++j)
    d.push_back(std::uniform_int_distribution<int>(-1, s.discrete_def(j).n_levels())(rng));
  for (std::size_t i = 0; i < s.n_continuous(); ++i) {
    const auto& def = s.continuous_def(i);
    const double w = def.upper - def.lower;
    c.push_back(std::uniform_real_distribution<double>(def.lower - 0.1 * w, def.upper + 0.1 * w)(rng));
  }
  return s.make(d, c);
}

}  // namespace

TEST_CASE("jet-engine enumeration and imputation ratios") {
  const DesignSpace s = fixtures::jet_engine();
  CHECK(s.declared_discrete_count() == 216.0);
  const ValidDiscreteSet valid = enumerate_valid_discrete(s);
  CHECK(valid.size() == 70);

  std::size_t active_continuous = 0;
  for (const auto& row : valid.activeness)
    for (std::size_t i = 0; i < s.n_continuous(); ++i) active_continuous += row[s.continuous_var(i)];
  CHECK(active_continuous == 500);

  const ImputationRatio ir = imputation_ratio(s, valid);
  CHECK(ir.discrete == doctest::Approx(216.0 / 70.0).epsilon(1e-12));
  CHECK(ir.continuous == doctest::Approx(630.0 / 500.0).epsilon(1e-12));
  CHECK(ir.overall == doctest::Approx(3.888).epsilon(1e-3));
  CHECK(ir.discrete * valid.size() == doctest::Approx(s.declared_discrete_count()));
}

TEST_CASE("non-hierarchical space enumerates the full product") {
  const DesignSpace s({VariableDef::categorical(3), VariableDef::categorical(2), VariableDef::continuous(0, 1)});
  const ValidDiscreteSet valid = enumerate_valid_discrete(s);
  CHECK(valid.size() == 6);
  for (const auto& row : valid.activeness)
    for (bool a : row) CHECK(a);
  const ImputationRatio ir = imputation_ratio(s, valid);
  CHECK(ir.discrete == 1.0);
  CHECK(ir.continuous == 1.0);
  CHECK(ir.overall == 1.0);
}

TEST_CASE("suborbital ratio arithmetic") { CHECK(2.8e6 / 123e3 == doctest::Approx(22.8).epsilon(0.01)); }

TEST_CASE("enumeration cap") {
  std::vector<VariableDef> vars(8, VariableDef::categorical(10));
  const DesignSpace s(vars);
  CHECK_THROWS_AS(enumerate_valid_discrete(s, 1e7), CapExceeded);
}

TEST_CASE("crew-size correction limits the module crew") {
  // total crew 1..3, module crew 1..3 with module <= total
  const DesignSpace s({VariableDef::integer(1, 3, "total"), VariableDef::integer(1, 3, "module")},
                      [](std::vector<int>& d, std::vector<bool>&) { d[1] = std::min(d[1], d[0]); });
  const DesignVector x = s.repair(s.make({1, 2}, {}));
  CHECK(x.discrete[0] == 1);
  CHECK(x.discrete[1] <= 1);
  CHECK(enumerate_valid_discrete(s).size() == 6);
}

TEST_CASE("repair: fixed point, canonical imputation, clipping") {
  const DesignSpace s = fixtures::jet_engine();
  // No fan: gearbox, mixed nozzle and fan-side continuous variables are inactive.
  std::vector<double> c(9);
  for (std::size_t i = 0; i < 9; ++i) {
    const auto& def = s.continuous_def(i);
    c[i] = def.lower + 0.9 * (def.upper - def.lower);
  }
  const DesignVector x = s.repair(s.make({0, 1, 1, 0, 2, 2}, c));
  CHECK(x.discrete == std::vector<int>{0, 0, 0, 0, 0, 0});
  CHECK(x.continuous[0] == doctest::Approx(s.continuous_def(0).midpoint()));
  CHECK(x.continuous[3] == doctest::Approx(c[3]));
  CHECK(s.repair(x) == x);
  CHECK(s.is_repaired(x));

  const DesignVector clipped = s.repair(s.make({5, -2, 0, 9, 1, 1}, std::vector<double>(9, 1e9)));
  CHECK(clipped.discrete[0] == 1);
  CHECK(clipped.discrete[3] == 2);
  CHECK(clipped.continuous[3] == s.continuous_def(3).upper);
}

TEST_CASE("repair idempotence and enumeration soundness on random vectors") {
  std::mt19937_64 rng(5);
  for (const auto* space : {&find_problem("h-hc-rosenbrock").space, &find_problem("md-hc-carside").space}) {
    const ValidDiscreteSet valid = enumerate_valid_discrete(*space);
    std::set<std::vector<int>> members(valid.vectors.begin(), valid.vectors.end());
    for (const auto& d : valid.vectors) {
      std::vector<double> c;
      for (std::size_t i = 0; i < space->n_continuous(); ++i) c.push_back(space->continuous_def(i).midpoint());
      CHECK(space->repair(space->make(d, c)).discrete == d);
    }
    for (int k = 0; k < 2000; ++k) {
      const DesignVector x = space->repair(random_raw(*space, rng));
      REQUIRE(space->repair(x) == x);
      REQUIRE(members.count(x.discrete) == 1);
    }
  }
}

TEST_CASE("rate diversity") {
  SUBCASE("balanced binary, always active") {
    const DesignSpace s({VariableDef::categorical(2)});
    const RateDiversity rd = rate_diversity(s, enumerate_valid_discrete(s));
    CHECK(rd.per_variable[0] == doctest::Approx(0.5));
    CHECK(rd.max == doctest::Approx(0.5));
  }
  SUBCASE("one option dominates") {
    // b is active only when a == 99: 101 valid vectors, b inactive in 99 of them
    const DesignSpace s({VariableDef::categorical(100), VariableDef::categorical(2)},
                        [](std::vector<int>& d, std::vector<bool>& active) { active[1] = d[0] == 99; });
    const RateDiversity rd = rate_diversity(s, enumerate_valid_discrete(s));
    CHECK(rd.per_variable[1] == doctest::Approx(98.0 / 101.0));
    for (double v : rd.per_variable) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}
