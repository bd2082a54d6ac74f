#include "hcbo/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "hcbo/errors.hpp"
#include "hcbo/sampling.hpp"

#ifndef HCBO_DATA_DIR
#define HCBO_DATA_DIR "data"
#endif

namespace hcbo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBraninOpt = 0.397887357729738;

// ---- analytic building blocks ------------------------------------------------

bool alimo_failed(double u1, double u2, bool edge) {
  std::array<double, 2> x{u1 + 0.15, 1.0 - u2};
  // Smallest shift that puts the top-left Branin minimum on the failure boundary (still viable).
  if (edge) {
    x[0] += 0.052;
    x[1] -= 0.060;
  }
  double sum = 0.0;
  for (double v : x) sum += 4.0 * (v - 0.7) * (v - 0.7) - 2.0 * std::cos(4.0 * M_PI * (v - 0.7));
  const double cx = 2.0 / 12.0 + 0.1 * sum - 0.25;
  return cx >= 0.0;
}

double mueller2_f(const std::vector<double>& x) {
  return (x[0] - x[1]) * (x[0] - x[1]) + std::exp(std::pow(1.0 - std::sin(x[0]), 2)) * std::cos(x[1]) +
         std::exp(std::pow(1.0 - std::cos(x[1]), 2)) * std::sin(x[0]);
}

bool mueller2_failed(const std::vector<double>& x) {
  double cx = 0.0;
  for (double xi : x) {
    const double xm = std::sqrt(std::abs(x[0] - xi + 1.0));
    const double xp = std::sqrt(std::abs(x[0] + xi + 1.0));
    cx += xi * std::sin(xm) * std::cos(xp) + (x[0] + 1.0) * std::sin(xp) * std::cos(xm);
  }
  return cx - 5.0 > 0.0;
}

DesignSpace continuous_space(const std::vector<std::pair<double, double>>& bounds) {
  std::vector<VariableDef> vars;
  for (std::size_t i = 0; i < bounds.size(); ++i)
    vars.push_back(VariableDef::continuous(bounds[i].first, bounds[i].second, "x" + std::to_string(i + 1)));
  return DesignSpace(std::move(vars));
}

constexpr std::array<double, 4> kBeamLower{2.0, 0.1, 0.1, 3.0};
constexpr std::array<double, 4> kBeamUpper{12.0, 1.0, 2.0, 7.0};
constexpr std::array<double, 7> kCarLower{0.5, 0.45, 0.5, 0.5, 0.875, 0.4, 0.4};
constexpr std::array<double, 7> kCarUpper{1.5, 1.35, 1.5, 1.5, 2.625, 1.2, 1.2};
constexpr int kMdLevels = 10;

// Design space whose first n_int variables are integer levels 0..9 mapped onto the original bounds.
template <std::size_t N>
DesignSpace mixed_discretized_space(const std::array<double, N>& lo, const std::array<double, N>& hi, int n_int) {
  std::vector<VariableDef> vars;
  for (std::size_t i = 0; i < N; ++i) {
    const std::string name = "x" + std::to_string(i + 1);
    vars.push_back(static_cast<int>(i) < n_int ? VariableDef::integer(0, kMdLevels - 1, name)
                                               : VariableDef::continuous(lo[i], hi[i], name));
  }
  return DesignSpace(std::move(vars));
}

template <std::size_t N>
std::vector<double> undiscretize(const DesignVector& x, const std::array<double, N>& lo,
                                 const std::array<double, N>& hi) {
  std::vector<double> v(N);
  const std::size_t nd = x.discrete.size();
  for (std::size_t i = 0; i < N; ++i)
    v[i] = i < nd ? lo[i] + (hi[i] - lo[i]) * x.discrete[i] / (kMdLevels - 1.0) : x.continuous[i - nd];
  return v;
}

// Carside with a subset of its constraints hidden: a point fails when any hidden g < 0.
EvaluateFn carside_hidden(std::vector<int> hidden, int n_int) {
  return [hidden = std::move(hidden), n_int](const DesignVector& x, std::vector<double>& f, std::vector<double>& g) {
    const auto v = n_int > 0 ? undiscretize(x, kCarLower, kCarUpper) : x.continuous;
    std::vector<double> all_g;
    carside(v, f, all_g);
    g.clear();
    bool failed = false;
    for (int k = 0; k < static_cast<int>(all_g.size()); ++k) {
      if (std::find(hidden.begin(), hidden.end(), k) != hidden.end())
        failed = failed || all_g[k] < 0.0;
      else
        g.push_back(all_g[k]);
    }
    return !failed;
  };
}

EvaluateFn beam_hidden(int n_int) {
  return [n_int](const DesignVector& x, std::vector<double>& f, std::vector<double>& g) {
    const auto v = n_int > 0 ? undiscretize(x, kBeamLower, kBeamUpper) : x.continuous;
    double fv, g1, g2;
    cantilevered_beam(v, fv, g1, g2);
    f = {fv};
    g = {g1};
    return !(g2 < 0.0);
  };
}

// ---- tunable hierarchical meta problem ----------------------------------------

constexpr int kSubRows = 20;
constexpr int kSubCols = 5;
// Sub-problem selection vectors and their activeness (imputation ratio 108/20).
constexpr std::array<std::array<int, kSubCols>, kSubRows> kSubX{{
    {0, 0, 0, 0, 0}, {0, 0, 0, 0, 1}, {0, 0, 1, 0, 0}, {0, 0, 2, 0, 0}, {0, 0, 2, 1, 0},
    {0, 1, 0, 0, 0}, {0, 1, 0, 1, 0}, {0, 1, 1, 0, 0}, {0, 1, 2, 0, 0}, {0, 2, 0, 0, 0},
    {0, 2, 0, 1, 0}, {0, 2, 1, 0, 0}, {0, 2, 2, 0, 0}, {1, 0, 0, 0, 0}, {1, 0, 1, 0, 0},
    {1, 1, 0, 0, 0}, {1, 2, 0, 0, 0}, {2, 0, 0, 0, 0}, {2, 1, 0, 0, 0}, {2, 2, 0, 0, 0},
}};
constexpr std::array<std::array<bool, kSubCols>, kSubRows> kSubActive{{
    {1, 1, 1, 0, 1}, {1, 1, 1, 0, 1}, {1, 1, 1, 0, 0}, {1, 1, 1, 1, 0}, {1, 1, 1, 1, 0},
    {1, 1, 1, 1, 0}, {1, 1, 1, 1, 0}, {1, 1, 1, 0, 0}, {1, 1, 1, 0, 0}, {1, 1, 1, 1, 0},
    {1, 1, 1, 1, 0}, {1, 1, 1, 0, 0}, {1, 1, 1, 0, 0}, {1, 1, 1, 0, 0}, {1, 1, 1, 0, 0},
    {1, 1, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 1, 0, 0, 0},
}};

int select_sub_problem(const std::vector<int>& discrete) {
  std::vector<int> rows(kSubRows);
  for (int r = 0; r < kSubRows; ++r) rows[r] = r;
  for (int j = 0; j < kSubCols && rows.size() > 1; ++j) {
    std::vector<int> matched;
    for (int r : rows)
      if (!kSubActive[r][j] || kSubX[r][j] == discrete[j]) matched.push_back(r);
    if (matched.empty()) {
      int best = std::numeric_limits<int>::max();
      for (int r : rows) best = std::min(best, std::abs(kSubX[r][j] - discrete[j]));
      for (int r : rows)
        if (std::abs(kSubX[r][j] - discrete[j]) == best) matched.push_back(r);
    }
    rows = std::move(matched);
  }
  return rows.front();
}

struct UnderlyingProblem {
  DesignSpace space;  // continuous only
  std::function<bool(const std::vector<double>&, double&)> eval;
  double f_min;  // viable optimum
  double f_scale;
};

ProblemDef hierarchical_meta(std::string name, std::string label, UnderlyingProblem base, TableMetadata table) {
  std::vector<VariableDef> vars;
  for (int j = 0; j < kSubCols; ++j) {
    int n_opts = 0;
    for (const auto& row : kSubX) n_opts = std::max(n_opts, row[j] + 1);
    vars.push_back(VariableDef::categorical(n_opts, "sel" + std::to_string(j + 1)));
  }
  for (std::size_t i = 0; i < base.space.n_continuous(); ++i) {
    auto def = base.space.continuous_def(i);
    vars.push_back(def);
  }
  auto rule = [](std::vector<int>& discrete, std::vector<bool>& active) {
    const int r = select_sub_problem(discrete);
    for (int j = 0; j < kSubCols; ++j) {
      discrete[j] = kSubX[r][j];
      active[j] = kSubActive[r][j];
    }
  };

  std::array<double, kSubRows> shift{}, shear{};
  for (int i = 0; i < kSubRows; ++i) {
    const double t = static_cast<double>(i) / kSubRows;
    shift[i] = std::sin((t + 0.25) * 2.0 * M_PI);
    shear[i] = std::cos((t + 0.125) * 2.0 * M_PI * 2.0);
  }

  ProblemDef p;
  p.name = std::move(name);
  p.label = std::move(label);
  p.space = DesignSpace(std::move(vars), rule);
  p.n_f = 1;
  p.n_g = 0;
  p.table = table;
  p.fn = [base = std::move(base), shift, shear](const DesignVector& x, std::vector<double>& f, std::vector<double>& g) {
    g.clear();
    double fv = 0.0;
    if (!base.eval(x.continuous, fv)) {
      f = {kNaN};
      return false;
    }
    int r = 0;
    for (; r < kSubRows; ++r)
      if (std::equal(kSubX[r].begin(), kSubX[r].end(), x.discrete.begin())) break;
    double fn = (fv - base.f_min) / base.f_scale;
    fn += 0.2 * shift[r];
    fn = (fn - 0.5) * (0.5 + 0.4 * shear[r]) + 0.5;
    f = {fn * base.f_scale + base.f_min};
    return true;
  };
  return p;
}

UnderlyingProblem alimo_base(bool edge) {
  return {continuous_space({{0.0, 1.0}, {0.0, 1.0}}),
          [edge](const std::vector<double>& x, double& f) {
            f = branin(x[0], x[1]);
            return !alimo_failed(x[0], x[1], edge);
          },
          kBraninOpt, 51.9496};
}

UnderlyingProblem mueller2_base() {
  const double b = 3.0 * M_PI;
  return {continuous_space({{-b, b}, {-b, b}, {-b, b}, {-b, b}}),
          [](const std::vector<double>& x, double& f) {
            f = mueller2_f(x);
            return !mueller2_failed(x);
          },
          -106.764536749265, 1.0};
}

// ---- hierarchical Rosenbrock ---------------------------------------------------

ProblemDef hier_rosenbrock(bool multi_objective) {
  std::vector<VariableDef> vars;
  for (int i = 0; i < 8; ++i)
    vars.push_back(i % 2 == 0 ? VariableDef::continuous(-1.0, 0.5, "x" + std::to_string(i + 1))
                              : VariableDef::continuous(0.0, 1.5, "x" + std::to_string(i + 1)));
  vars.push_back(VariableDef::integer(0, 1, "z1"));
  vars.push_back(VariableDef::integer(0, 1, "z2"));
  vars.push_back(VariableDef::integer(0, 2, "z3"));
  vars.push_back(VariableDef::categorical(2, "w1"));
  vars.push_back(VariableDef::categorical(2, "w2"));

  auto rule = [](std::vector<int>& d, std::vector<bool>& active) {
    const int w2 = d[4];
    const int idx = d[3] * 2 + w2;
    active[2] = active[3] = idx <= 2;
    active[4] = active[5] = w2 == 1;
    active[6] = active[7] = idx >= 1;
    active[10] = w2 == 1;
  };

  ProblemDef p;
  p.name = multi_objective ? "mo-h-hc-rosenbrock" : "h-hc-rosenbrock";
  p.label = multi_objective ? "MO/H/HC Rosenbrock" : "H/HC Rosenbrock";
  p.space = DesignSpace(std::move(vars), rule);
  p.n_f = multi_objective ? 2 : 1;
  p.n_g = 1;
  p.compare_discrete_ir = true;
  p.table = multi_objective ? TableMetadata{8, 5, 2, 1, 1.5, 0.60} : TableMetadata{8, 5, 1, 1, 1.5, 0.21};
  p.fn = [multi_objective](const DesignVector& x, std::vector<double>& f, std::vector<double>& g) {
    static constexpr std::array<double, 4> a1{7, 7, 10, 10};
    static constexpr std::array<double, 4> a2{9, 6, 9, 6};
    static constexpr std::array<bool, 4> add_z3{false, true, false, true};
    static const std::array<std::vector<int>, 4> x_idx{
        {{0, 1, 2, 3}, {0, 1, 4, 5}, {0, 1, 2, 3, 6, 7}, {0, 1, 4, 5, 6, 7}}};
    static const std::array<std::vector<int>, 2> x_idx_g2{{{0, 1, 2, 3}, {0, 1, 2, 3, 6, 7}}};

    const int z1 = x.discrete[0], z2 = x.discrete[1], z3 = x.discrete[2];
    const int idx = x.discrete[3] * 2 + x.discrete[4];
    std::vector<double> xs;
    for (int i : x_idx[idx]) xs.push_back(x.continuous[i]);

    const double s = z2 == 0 ? 1.0 : -1.0;
    const double pre = z2 == 0 ? 1.0 : 0.7;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      sum += pre * a1[idx] * a2[idx] * std::pow(xs[i + 1] - xs[i], 2) +
             ((a1[idx] + s * a2[idx]) / 10.0) * std::pow(1.0 - xs[i], 2);
    double f1 = 100.0 * z1 + sum;
    if (add_z3[idx]) f1 -= 35.0 * z3;

    double g1 = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) g1 += -std::pow(xs[i] - 1.0, 3) + xs[i + 1] - 2.6;
    double g2 = 0.0;
    if (idx < 2) {
      std::vector<double> xg;
      for (int i : x_idx_g2[idx]) xg.push_back(x.continuous[i]);
      for (std::size_t i = 0; i + 1 < xg.size(); ++i) g2 += -xg[i] - xg[i + 1] + 0.4;
    }

    f = {f1};
    bool failed = g2 > 0.0;
    if (multi_objective) {
      double f2 = std::pow(std::abs((400.0 - f1) / 40.0), 2);
      for (int i = 0; i < 4; ++i) f2 += std::pow(xs[i] + 1.0, 2) * 200.0;
      f.push_back(f2);
      const auto frac = [](double v) { return v - std::floor(v); };
      failed = failed || std::abs(0.5 - frac(f1 / 20.0)) > 0.35;
      failed = failed || (f2 > 1000.0 && std::abs(0.5 - frac(f2 / 100.0)) > 0.35);
    }
    g = {g1};
    return !failed;
  };
  return p;
}

// ---- registry -------------------------------------------------------------------

std::vector<ProblemDef> build_registry() {
  std::vector<ProblemDef> out;
  const double nan = kNaN;

  auto simple = [&](std::string name, std::string label, DesignSpace space, TableMetadata table,
                    std::function<bool(const std::vector<double>&, double&)> fn) {
    ProblemDef p;
    p.name = std::move(name);
    p.label = std::move(label);
    p.space = std::move(space);
    p.table = table;
    p.fn = [fn = std::move(fn)](const DesignVector& x, std::vector<double>& f, std::vector<double>& g) {
      g.clear();
      double v = 0.0;
      const bool ok = fn(x.continuous, v);
      f = {v};
      return ok;
    };
    out.push_back(std::move(p));
  };

  const auto unit2 = continuous_space({{0.0, 1.0}, {0.0, 1.0}});
  simple("branin", "Branin", unit2, {2, 0, 1, 0, nan, 0.0}, [](const std::vector<double>& x, double& f) {
    f = branin(x[0], x[1]);
    return true;
  });
  simple("hc-branin", "HC Branin", unit2, {2, 0, 1, 0, nan, 0.33}, [](const std::vector<double>& x, double& f) {
    f = branin(x[0], x[1]);
    return !((x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5) > 0.22);
  });
  simple("alimo", "Alimo", unit2, {2, 0, 1, 0, nan, 0.51}, [](const std::vector<double>& x, double& f) {
    f = branin(x[0], x[1]);
    return !alimo_failed(x[0], x[1], false);
  });
  simple("alimo-edge", "Alimo Edge", unit2, {2, 0, 1, 0, nan, 0.53}, [](const std::vector<double>& x, double& f) {
    f = branin(x[0], x[1]);
    return !alimo_failed(x[0], x[1], true);
  });

  {
    // Failure discs of radius 0.1 around 25 of 100 Sobol' points, picked with a fixed seed.
    const auto pts = sobol_fill(100, 2, 0);
    std::vector<int> order(100);
    for (int i = 0; i < 100; ++i) order[i] = i;
    std::mt19937_64 rng(0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::array<double, 2>> centers(25);
    for (int k = 0; k < 25; ++k) centers[k] = {pts(order[k], 0), pts(order[k], 1)};
    simple("hc-sphere", "HC Sphere", unit2, {2, 0, 1, 0, nan, 0.51},
           [centers](const std::vector<double>& x, double& f) {
             f = (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5);
             for (const auto& c : centers)
               if (std::hypot(x[0] - c[0], x[1] - c[1]) < 0.1) return false;
             return true;
           });
  }

  simple("mueller1", "Müller 1", continuous_space(std::vector<std::pair<double, double>>(5, {-10.0, 10.0})),
         {5, 0, 1, 0, nan, 0.67}, [](const std::vector<double>& x, double& f) {
           const double n = static_cast<double>(x.size());
           double sq = 0.0, cs = 0.0, cx = 0.0;
           bool failed = false;
           for (double v : x) {
             sq += v * v;
             cs += std::cos(2.0 * M_PI * v);
             cx += v * (std::sin(v) + 0.1);
             if (v >= -0.2 && v <= 0.2) failed = true;
           }
           f = -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::exp(1.0);
           return !(failed || cx > 0.0);
         });

  const double b = 3.0 * M_PI;
  simple("mueller2", "Müller 2", continuous_space({{-b, b}, {-b, b}, {-b, b}, {-b, b}}), {4, 0, 1, 0, nan, 0.40},
         [](const std::vector<double>& x, double& f) {
           f = mueller2_f(x);
           return !mueller2_failed(x);
         });

  auto engineering = [&](std::string name, std::string label, DesignSpace space, int n_f, int n_g,
                         TableMetadata table, EvaluateFn fn) {
    ProblemDef p;
    p.name = std::move(name);
    p.label = std::move(label);
    p.space = std::move(space);
    p.n_f = n_f;
    p.n_g = n_g;
    p.table = table;
    p.engineering = true;
    p.fn = std::move(fn);
    out.push_back(std::move(p));
  };

  std::vector<std::pair<double, double>> beam_bounds, car_bounds;
  for (std::size_t i = 0; i < 4; ++i) beam_bounds.emplace_back(kBeamLower[i], kBeamUpper[i]);
  for (std::size_t i = 0; i < 7; ++i) car_bounds.emplace_back(kCarLower[i], kCarUpper[i]);

  engineering("hc-cantbeam", "HC CantBeam", continuous_space(beam_bounds), 1, 1, {4, 0, 1, 1, nan, 0.83},
              beam_hidden(0));
  engineering("hc-carside-less", "HC Carside Less", continuous_space(car_bounds), 3, 9, {7, 0, 1, 9, nan, 0.39},
              carside_hidden({6}, 0));
  engineering("hc-carside", "HC Carside", continuous_space(car_bounds), 3, 8, {7, 0, 3, 8, nan, 0.66},
              carside_hidden({3, 7}, 0));
  engineering("md-hc-cantbeam", "MD/HC CantBeam", mixed_discretized_space(kBeamLower, kBeamUpper, 2), 1, 1,
              {2, 2, 1, 1, nan, 0.81}, beam_hidden(2));
  engineering("md-hc-carside", "MD/HC Carside", mixed_discretized_space(kCarLower, kCarUpper, 4), 3, 8,
              {3, 4, 3, 8, nan, 0.66}, carside_hidden({3, 7}, 4));

  out.push_back(hierarchical_meta("h-alimo", "H Alimo", alimo_base(false), {2, 5, 1, 0, 5.4, 0.51}));
  out.push_back(hierarchical_meta("h-alimo-edge", "H Alimo Edge", alimo_base(true), {2, 5, 1, 0, 5.4, 0.53}));
  out.push_back(hierarchical_meta("h-mueller2", "H Müller 2", mueller2_base(), {4, 4, 1, 0, 5.4, 0.37}));
  out.push_back(hier_rosenbrock(false));
  out.push_back(hier_rosenbrock(true));
  return out;
}

}  // namespace

double branin(double u1, double u2) {
  const double x1 = 15.0 * u1 - 5.0, x2 = 15.0 * u2;
  const double t1 = x2 - 5.1 / (4.0 * M_PI * M_PI) * x1 * x1 + 5.0 / M_PI * x1 - 6.0;
  return t1 * t1 + 10.0 * (1.0 - 1.0 / (8.0 * M_PI)) * std::cos(x1) + 10.0;
}

void carside(const std::vector<double>& x, std::vector<double>& f, std::vector<double>& g) {
  const double g1 = 1.16 - 0.3717 * x[1] * x[3] - 0.0092928 * x[2];
  const double g2 = 0.261 - 0.0159 * x[0] * x[1] - 0.188 * x[0] * 0.345 - 0.019 * x[1] * x[6] +
                    0.0144 * x[2] * x[4] + 0.08045 * x[5] * 0.192;
  const double g3 = 0.214 + 0.00817 * x[4] - 0.131 * x[0] * 0.345 - 0.0704 * x[0] * 0.192 +
                    0.03099 * x[1] * x[5] - 0.018 * x[1] * x[6] + 0.0208 * x[2] * 0.345 +
                    0.121 * x[2] * 0.192 - 0.00364 * x[4] * x[5] - 0.018 * x[1] * x[1];
  const double g4 = 0.74 - 0.61 * x[1] - 0.031296 * x[2] - 0.166 * x[6] * 0.192 + 0.227 * x[1] * x[1];
  const double g5 = 28.98 + 3.818 * x[2] - 4.2 * x[0] * x[1] + 6.63 * x[5] * 0.192 - 7.77 * x[6] * 0.345;
  const double g6 = 33.86 + 2.95 * x[2] - 5.057 * x[0] * x[1] - 11.0 * x[1] * 0.345 - 9.98 * x[6] * 0.345 +
                    22.0 * 0.345 * 0.192;
  const double g7 = 46.36 - 9.9 * x[1] - 12.9 * x[0] * 0.345;
  const double g8 = 4.72 - 0.5 * x[3] - 0.19 * x[1] * x[2];
  const double g9 = 10.58 - 0.674 * x[0] * x[1] - 1.95 * x[1] * 0.345;
  const double g10 = 16.45 - 0.489 * x[2] * x[6] - 0.843 * x[4] * x[5];

  const double f1 = 1.98 + 4.9 * x[0] + 6.67 * x[1] + 6.98 * x[2] + 4.01 * x[3] + 1.78 * x[4] + 0.00001 * x[5] +
                    2.73 * x[6];
  f = {f1, g8, (g9 + g10) / 2.0};
  g = {g1 - 1.0,          g2 / 0.32 - 1.0,  g3 / 0.32 - 1.0, g4 / 0.32 - 1.0, g5 / 32.0 - 1.0,
       g6 / 32.0 - 1.0,   g7 / 32.0 - 1.0,  g8 / 4.0 - 1.0,  g9 / 9.9 - 1.0,  g10 / 15.7 - 1.0};
}

void cantilevered_beam(const std::vector<double>& x, double& f, double& g1, double& g2) {
  constexpr double E = 1e7, L = 36.0, P = 1000.0;
  const double b1 = x[0], h1 = x[1], b2 = x[2], H = x[3];
  const double I = b2 * std::pow(H - 2.0 * h1, 3) / 12.0 +
                   2.0 * (b1 * std::pow(h1, 3) / 12.0 + b1 * h1 * (H - h1) * (H - h1) / 4.0);
  f = (2.0 * h1 * b1 + (H - 2.0 * h1) * b2) * L;
  const double sigma = P * L * H / (2.0 * I);
  const double delta = P * L * L * L / (3.0 * E * I);
  g1 = (sigma - 5000.0) / 5000.0;
  g2 = (delta - 0.1) / 0.1;
}

const std::vector<ProblemDef>& registry() {
  static const std::vector<ProblemDef> problems = build_registry();
  return problems;
}

const ProblemDef& find_problem(const std::string& name) {
  for (const auto& p : registry())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : registry()) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown problem '" + name + "' (known: " + known + ")");
}

EvaluatedPoint evaluate(const ProblemDef& problem, const DesignVector& x) {
  if (!problem.space.is_repaired(x)) throw InvalidVector("problem '" + problem.name + "' got an unrepaired vector");
  EvaluatedPoint out;
  out.x = x;
  out.viable = problem.fn(x, out.f, out.g);
  out.f.resize(problem.n_f);
  out.g.resize(problem.n_g);
  if (!out.viable) {
    std::fill(out.f.begin(), out.f.end(), kNaN);
    std::fill(out.g.begin(), out.g.end(), kNaN);
  } else {
    for (double v : out.f)
      if (!std::isfinite(v)) out.viable = false;
    for (double v : out.g)
      if (!std::isfinite(v)) out.viable = false;
    if (!out.viable) {
      std::fill(out.f.begin(), out.f.end(), kNaN);
      std::fill(out.g.begin(), out.g.end(), kNaN);
    }
  }
  return out;
}

double fail_rate_monte_carlo(const ProblemDef& problem, int n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("fail-rate estimate needs n >= 1");
  const auto valid = enumerate_valid_discrete(problem.space);
  const auto xs = hierarchical_sample(problem.space, valid, n, seed);
  std::vector<double> f, g;
  std::size_t failed = 0;
  for (const auto& x : xs) {
    f.clear();
    g.clear();
    if (!problem.fn(x, f, g)) ++failed;
  }
  return static_cast<double>(failed) / static_cast<double>(n);
}

std::string data_dir() {
  if (const char* env = std::getenv("HCBO_DATA_DIR"); env && *env) return env;
  return HCBO_DATA_DIR;
}

std::string reference_path(const ProblemDef& problem) { return data_dir() + "/reference/" + problem.name + ".txt"; }

ReferenceData load_reference(const ProblemDef& problem) {
  const std::string path = reference_path(problem);
  std::ifstream in(path);
  if (!in) throw ConfigError("missing reference data " + path + " (generate it with hcbo_reference)");
  ReferenceData ref;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    if (line[0] == '#') {
      std::string tag;
      row >> tag >> tag;
      if (tag == "scale") row >> ref.scale;
      continue;
    }
    std::vector<double> v;
    double d;
    while (row >> d) v.push_back(d);
    if (static_cast<int>(v.size()) != problem.n_f) throw ConfigError("malformed reference row in " + path);
    ref.front.push_back(std::move(v));
  }
  if (ref.front.empty()) throw ConfigError("empty reference data " + path);
  return ref;
}

void save_reference(const ProblemDef& problem, const ReferenceData& ref, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "# problem " << problem.name << "\n";
  if (problem.n_f == 1) out << "# scale " << std::setprecision(17) << ref.scale << "\n";
  out << std::setprecision(17);
  for (const auto& row : ref.front) {
    for (std::size_t m = 0; m < row.size(); ++m) out << (m ? " " : "") << row[m];
    out << "\n";
  }
}

}  // namespace hcbo
