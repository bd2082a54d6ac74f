// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"
#include "hcbo/gp.hpp"
#include "hcbo/infill.hpp"
#include "hcbo/metrics.hpp"
#include "hcbo/pov.hpp"
#include "hcbo/problems.hpp"
#include "hcbo/runner.hpp"
#include "hcbo/sampling.hpp"

using namespace hcbo;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::vector<std::pair<std::string, bool>> g_results;

void report(const std::string& name, const Outcome& o) {
  std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  g_results.emplace_back(name, o.pass);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

RunConfig bo_config(const std::string& problem, const std::string& strategy) {
  RunConfig c;
  c.problem = problem;
  c.strategy = StrategyConfig::parse(strategy);
  c.n_infill = 50;
  c.repetitions = 16;
  return c;
}

std::vector<RunSummary> run_reps(const RunConfig& c) {
  std::vector<RunSummary> out;
  const std::string strat = c.strategy.to_string();
  for (int rep = 0; rep < c.repetitions; ++rep) {
    const std::uint64_t seed = repetition_seed(c.seed, c.problem, strat, rep);
    out.push_back(summarize_run(c, run_bo(c, seed)));
  }
  return out;
}

double median_of(const std::vector<RunSummary>& runs, double RunSummary::*field) {
  std::vector<double> v;
  for (const auto& r : runs) v.push_back(r.*field);
  return median(v);
}

// ---- 1 -------------------------------------------------------------------------

Outcome fail_rates() {
  Outcome o;
  for (const auto& p : registry()) {
    if (std::isnan(p.table.fail_rate)) continue;
    const auto t0 = Clock::now();
    const double fr = fail_rate_monte_carlo(p, 100000, 0);
    const double secs = seconds_since(t0);
    const double tol = p.engineering ? 0.08 : 0.03;
    const bool ok = std::abs(fr - p.table.fail_rate) <= tol + 1e-12 && secs < 60.0;
    std::printf("  %-20s measured %5.1f%%  table %5.1f%%  tol %.0f  %.2fs  %s\n", p.name.c_str(), 100 * fr,
                100 * p.table.fail_rate, 100 * tol, secs, ok ? "ok" : "MISS");
    if (!ok) {
      o.pass = false;
      o.detail += p.name + " ";
    }
  }
  if (o.pass) o.detail = "all problems within tolerance";
  else o.detail = "outside tolerance: " + o.detail;
  return o;
}

// ---- 2 -------------------------------------------------------------------------

Outcome metadata() {
  Outcome o;
  const DesignSpace jet = fixtures::jet_engine();
  const ValidDiscreteSet jv = enumerate_valid_discrete(jet);
  const double ird = imputation_ratio(jet, jv).discrete;
  std::printf("  jet fixture: declared %.0f, valid %zu, IR_d %.4f (expected %.4f)\n", jet.declared_discrete_count(),
              jv.size(), ird, 216.0 / 70.0);
  if (std::abs(ird - 216.0 / 70.0) > 1e-12) o.pass = false;
  for (const auto& p : registry()) {
    if (std::isnan(p.table.ir) || !p.space.has_hierarchy()) continue;
    const ImputationRatio ir = imputation_ratio(p.space, enumerate_valid_discrete(p.space));
    const double got = p.compare_discrete_ir ? ir.discrete : ir.overall;
    const bool ok = std::abs(got - p.table.ir) <= 0.10 * p.table.ir;
    std::printf("  %-20s IR %.3f (IR_d %.3f, IR_c %.3f)  table %.2f  %s\n", p.name.c_str(), got, ir.discrete,
                ir.continuous, p.table.ir, ok ? "ok" : "MISS");
    if (!ok) {
      o.pass = false;
      o.detail += p.name + " ";
    }
  }
  o.detail = o.pass ? "jet IR_d = 216/70 and table IR values within 10%" : "mismatch: " + o.detail;
  return o;
}

// ---- 3 -------------------------------------------------------------------------

Outcome strategy_direction() {
  double sum_regret = 0.0, sum_fr = 0.0;
  int n = 0;
  for (const char* prob : {"alimo", "alimo-edge", "mueller2"}) {
    const auto t0 = Clock::now();
    const auto rej = run_reps(bo_config(prob, "rejection"));
    const auto pred = run_reps(bo_config(prob, "predict:mdgp:pov=0.25"));
    const double r0 = median_of(rej, &RunSummary::regret), r1 = median_of(pred, &RunSummary::regret);
    const double f0 = median_of(rej, &RunSummary::fail_rate), f1 = median_of(pred, &RunSummary::fail_rate);
    const double dr = 100.0 * (r1 - r0) / r0, df = 100.0 * (f1 - f0) / f0;
    std::printf("  %-12s regret %.4f -> %.4f (%+.1f%%)  fail rate %.3f -> %.3f (%+.1f%%)  %.0fs\n", prob, r0, r1, dr,
                f0, f1, df, seconds_since(t0));
    sum_regret += dr;
    sum_fr += df;
    ++n;
  }
  const double avg_r = sum_regret / n, avg_f = sum_fr / n;
  Outcome o;
  o.pass = avg_r <= -20.0 && avg_f <= -30.0;
  o.detail = "average regret change " + fmt("%+.1f%%", avg_r) + " (need <= -20%), fail rate change " +
             fmt("%+.1f%%", avg_f) + " (need <= -30%)";
  return o;
}

// ---- 4 -------------------------------------------------------------------------

Outcome pov_trend() {
  Outcome o;
  double prev = 2.0;
  std::string series;
  for (const char* pov : {"0.1", "0.25", "0.5", "0.75", "0.9"}) {
    const auto runs = run_reps(bo_config("alimo", std::string("predict:mdgp:pov=") + pov));
    const double fr = median_of(runs, &RunSummary::fail_rate);
    std::printf("  pov_min %-5s median fail rate %.4f  median regret %.4f\n", pov, fr,
                median_of(runs, &RunSummary::regret));
    if (fr > prev + 1e-12) o.pass = false;
    prev = fr;
    series += fmt("%.3f ", fr);
  }
  o.detail = "alimo fail rates over pov_min 0.1..0.9: " + series + (o.pass ? "(non-increasing)" : "(increase found)");
  return o;
}

// ---- 5 -------------------------------------------------------------------------

Outcome branin_convergence() {
  RunConfig c = bo_config("branin", "rejection");
  c.n_doe = 10;
  c.n_infill = 30;
  int hits = 0;
  double worst_time = 0.0;
  for (int rep = 0; rep < 16; ++rep) {
    const auto t0 = Clock::now();
    const auto recs = run_bo(c, repetition_seed(c.seed, c.problem, "rejection", rep));
    worst_time = std::max(worst_time, seconds_since(t0));
    hits += recs.back().delta_hv <= 0.01;
  }
  Outcome o;
  o.pass = hits >= 12 && worst_time < 60.0;
  o.detail = std::to_string(hits) + "/16 reps within 1% of the optimum (need >= 12), slowest rep " +
             fmt("%.1fs", worst_time);
  return o;
}

// ---- 6 -------------------------------------------------------------------------

double bumps(double a, double b) {
  return -std::exp(-30 * ((a - 0.2) * (a - 0.2) + (b - 0.3) * (b - 0.3))) -
         0.8 * std::exp(-30 * ((a - 0.8) * (a - 0.8) + (b - 0.2) * (b - 0.2))) -
         0.9 * std::exp(-30 * ((a - 0.5) * (a - 0.5) + (b - 0.85) * (b - 0.85)));
}

Outcome oracle_ei() {
  const DesignSpace s({VariableDef::continuous(0, 1), VariableDef::continuous(0, 1)});
  const ValidDiscreteSet valid = enumerate_valid_discrete(s);
  const auto x = hierarchical_sample(s, valid, 12, 3);
  std::vector<double> y;
  for (const auto& p : x) y.push_back(bumps(p.continuous[0], p.continuous[1]));
  const GpModel gp = GpModel::fit(s, x, y);
  const double y_min = *std::min_element(y.begin(), y.end());
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> z(0.0, 1.0);
  int ok = 0;
  double worst = 0.0;
  for (const auto& q : hierarchical_sample(s, valid, 20, 77)) {
    const GpPrediction p = gp.predict(q);
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double imp = std::max(y_min - (p.mean + p.std * z(rng)), 0.0);
      sum += imp;
      sum2 += imp * imp;
    }
    const double mc = sum / n;
    const double se = std::sqrt(std::max(sum2 / n - mc * mc, 0.0) / n);
    const double dev = std::abs(expected_improvement(p.mean, p.std, y_min) - mc);
    ok += dev <= 3.0 * se + 1e-12;
    if (se > 0) worst = std::max(worst, dev / se);
  }
  return {ok == 20, std::to_string(ok) + "/20 points within 3 SE (max " + fmt("%.2f", worst) + " SE)"};
}

// column count over the box spanned by the ideal point and ref (1,1)
double grid_hv(const PointSet& pts, int n) {
  double x0 = 1.0, y0 = 1.0;
  for (const auto& p : pts) {
    x0 = std::min(x0, p[0]);
    y0 = std::min(y0, p[1]);
  }
  const double hx = (1.0 - x0) / n, hy = (1.0 - y0) / n;
  long count = 0;
  for (int i = 0; i < n; ++i) {
    const double xc = x0 + (i + 0.5) * hx;
    double y_low = 1.0;
    for (const auto& p : pts)
      if (p[0] <= xc) y_low = std::min(y_low, p[1]);
    count += std::max(0L, static_cast<long>(std::floor((1.0 - y_low) / hy + 0.5)));
  }
  return count * hx * hy;
}

Outcome oracle_hv() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    PointSet pts;
    const int n = 1 + static_cast<int>(u(rng) * 20);
    for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    const double exact = hypervolume(pts, {1, 1});
    const double rel = std::abs(exact - grid_hv(pts, 4000)) / exact;
    ok += rel <= 1e-3;
    worst = std::max(worst, rel);
  }
  return {ok == 50, std::to_string(ok) + "/50 sets within 1e-3 relative (max " + fmt("%.2e", worst) + ")"};
}

Outcome oracle_repair() {
  struct Case {
    std::string name;
    const DesignSpace* space;
  };
  const DesignSpace jet = fixtures::jet_engine();
  std::vector<Case> cases = {{"jet-fixture", &jet}};
  for (const auto& p : registry()) cases.push_back({p.name, &p.space});
  long failures = 0, total = 0;
  std::mt19937_64 rng(99);
  for (const auto& c : cases) {
    const DesignSpace& s = *c.space;
    const ValidDiscreteSet valid = enumerate_valid_discrete(s);
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < valid.size(); ++i) index[valid.vectors[i]] = i;
    for (int k = 0; k < 10000; ++k, ++total) {
      std::vector<int> d;
      std::vector<double> x;
      for (std::size_t j = 0; j < s.n_discrete(); ++j) {
        std::uniform_int_distribution<int> di(-1, s.discrete_def(j).n_levels());
        d.push_back(di(rng));
      }
      for (std::size_t i = 0; i < s.n_continuous(); ++i) {
        const auto& v = s.continuous_def(i);
        const double w = v.upper - v.lower;
        std::uniform_real_distribution<double> dc(v.lower - 0.1 * w, v.upper + 0.1 * w);
        x.push_back(dc(rng));
      }
      const DesignVector r = s.repair(s.make(d, x));
      bool ok = s.is_repaired(r) && s.repair(r) == r;
      const auto it = index.find(r.discrete);
      ok = ok && it != index.end() && valid.activeness[it->second] == r.active;
      failures += !ok;
    }
  }
  return {failures == 0, std::to_string(total - failures) + "/" + std::to_string(total) + " vectors across " +
                             std::to_string(cases.size()) + " spaces"};
}

Outcome oracle_gp() {
  Outcome o;
  double worst_mean = 0.0, worst_std = 0.0;
  auto check = [&](const DesignSpace& s, const std::vector<DesignVector>& x, const std::vector<double>& y) {
    const GpModel gp = GpModel::fit(s, x, y);
    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    const double sig = std::sqrt(gp.signal_variance());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const GpPrediction p = gp.predict(x[i]);
      worst_mean = std::max(worst_mean, std::abs(p.mean - y[i]) / std::max(scale, 1e-300));
      worst_std = std::max(worst_std, p.std / sig);
    }
  };
  const DesignSpace sq({VariableDef::continuous(0, 1), VariableDef::continuous(0, 1)});
  const auto xs = hierarchical_sample(sq, enumerate_valid_discrete(sq), 20, 1);
  std::vector<double> ys;
  for (const auto& p : xs) ys.push_back(branin(p.continuous[0], p.continuous[1]));
  check(sq, xs, ys);
  for (const char* name : {"h-alimo", "h-hc-rosenbrock"}) {
    const ProblemDef& p = find_problem(name);
    std::vector<DesignVector> x;
    std::vector<double> y;
    for (const auto& v : hierarchical_sample(p.space, enumerate_valid_discrete(p.space), 60, 2)) {
      const EvaluatedPoint e = evaluate(p, v);
      if (e.viable && std::find(x.begin(), x.end(), v) == x.end()) x.push_back(v), y.push_back(e.f[0]);
    }
    check(p.space, x, y);
  }
  o.pass = worst_mean <= 1e-6 && worst_std <= 1e-3;
  o.detail = "max relative interpolation error " + fmt("%.2e", worst_mean) + ", max std/signal std " +
             fmt("%.2e", worst_std);
  return o;
}

Outcome oracle_pov() {
  const ProblemDef& p = find_problem("h-alimo");
  const ValidDiscreteSet valid = enumerate_valid_discrete(p.space);
  const auto x = hierarchical_sample(p.space, valid, 60, 1);
  std::vector<int> y;
  for (const auto& v : x) y.push_back(evaluate(p, v).viable);
  const auto q = hierarchical_sample(p.space, valid, 10000, 123);
  long bad = 0;
  for (PovVariant v : {PovVariant::rfc, PovVariant::knn, PovVariant::rbf, PovVariant::mdgp}) {
    PovOptions o;
    o.variant = v;
    for (double pov : PovModel::fit(p.space, x, y, o).predict(q)) bad += !(pov >= 0.0 && pov <= 1.0);
  }
  return {bad == 0, std::to_string(4 * 10000 - bad) + "/40000 predictions in [0,1]"};
}

Outcome oracles() {
  Outcome all;
  const std::pair<const char*, std::function<Outcome()>> parts[] = {
      {"EI vs Monte-Carlo", oracle_ei}, {"hypervolume vs grid", oracle_hv}, {"repair/enumeration", oracle_repair},
      {"GP interpolation", oracle_gp},  {"PoV range", oracle_pov}};
  for (const auto& [name, fn] : parts) {
    const Outcome o = fn();
    std::printf("  %-20s %s  %s\n", name, o.pass ? "ok" : "MISS", o.detail.c_str());
    if (!o.pass) {
      all.pass = false;
      all.detail += std::string(name) + "; ";
    }
  }
  all.detail = all.pass ? "all five oracle suites pass" : "failing: " + all.detail;
  return all;
}

// ---- 7 -------------------------------------------------------------------------

std::string log_without_times(const fs::path& p) {
  std::ifstream in(p);
  std::string line, out;
  while (std::getline(in, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    j.erase("t_train_s");
    j.erase("t_infill_s");
    out += j.dump() + "\n";
  }
  return out;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "hcbo_acceptance_determinism";
  fs::create_directories(dir);
  RunConfig c = bo_config("h-alimo", "predict:mdgp:pov=0.25");
  c.n_infill = 12;
  c.n_batch = 2;
  const std::uint64_t seed = repetition_seed(0, c.problem, c.strategy.to_string(), 0);
  run_bo(c, seed, (dir / "a.jsonl").string());
  run_bo(c, seed, (dir / "b.jsonl").string());
  const std::string a = log_without_times(dir / "a.jsonl"), b = log_without_times(dir / "b.jsonl");
  fs::remove_all(dir);
  return {!a.empty() && a == b, a == b ? "logs identical (" + std::to_string(a.size()) + " bytes)" : "logs differ"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 fail-rate reproduction", fail_rates},
      {"2 metadata reproduction", metadata},
      {"3 strategy direction", strategy_direction},
      {"4 pov_min trend", pov_trend},
      {"5 single-objective convergence", branin_convergence},
      {"6 oracle suites", oracles},
      {"7 determinism", determinism},
  };
  for (const auto& [name, fn] : criteria) {
    const auto t0 = Clock::now();
    std::printf("[%s]\n", name);
    std::fflush(stdout);
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    o.detail += fmt(" [%.0fs]", seconds_since(t0));
    report(name, o);
  }
  int failed = 0;
  for (const auto& r : g_results) failed += !r.second;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed, g_results.size());
  return failed == 0 ? 0 : 1;
}
