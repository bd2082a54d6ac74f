#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hcbo/errors.hpp"
#include "hcbo/problems.hpp"
#include "hcbo/runner.hpp"

using namespace hcbo;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunConfig quick(const std::string& problem, const std::string& strategy) {
  RunConfig c;
  c.problem = problem;
  c.strategy = StrategyConfig::parse(strategy);
  c.n_infill = 6;
  c.n_doe = 8;
  c.repetitions = 2;
  c.infill_pop_size = 24;
  c.infill_generations = 8;
  c.gp_starts = 2;
  c.gp_warm_starts = 1;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("hcbo_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<json> read_log(const fs::path& p) {
  std::vector<json> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

std::string strip_times(const fs::path& p) {
  std::string out;
  for (json j : read_log(p)) {
    j.erase("t_train_s");
    j.erase("t_infill_s");
    out += j.dump() + "\n";
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("budget is DoE size plus infill count") {
  const fs::path d = scratch("budget");
  RunConfig c = quick("branin", "rejection");
  c.n_doe = 13;
  c.n_infill = 17;
  const auto recs = run_bo(c, 5, (d / "log.jsonl").string());
  CHECK(recs.back().evaluations == 30);
  const auto log = read_log(d / "log.jsonl");
  CHECK(log.size() == 30);
  for (std::size_t i = 0; i < log.size(); ++i) CHECK(log[i].at("eval_id").get<std::size_t>() == i);
  fs::remove_all(d);
}

TEST_CASE("batches never exceed n_batch and contain new points only") {
  const fs::path d = scratch("batch");
  RunConfig c = quick("h-alimo", "predict:mdgp:pov=0.25");
  c.n_batch = 4;
  c.n_infill = 10;
  const auto recs = run_bo(c, 9, (d / "log.jsonl").string());
  CHECK(recs.back().evaluations == recs.front().evaluations + 10);
  std::set<std::pair<std::vector<int>, std::vector<double>>> seen;
  for (const auto& r : recs) {
    if (r.iteration > 0) CHECK(r.batch.size() <= 4);
    for (const auto& e : r.batch) CHECK(seen.insert({e.x.discrete, e.x.continuous}).second);
  }

  // logged vectors are repair fixed points
  const ProblemDef& p = find_problem("h-alimo");
  for (const auto& j : read_log(d / "log.jsonl")) {
    const auto xd = j.at("x_discrete").get<std::vector<int>>();
    const auto xc = j.at("x_continuous").get<std::vector<double>>();
    const DesignVector x = p.space.repair(p.space.make(xd, xc));
    CHECK(x.discrete == xd);
    CHECK(x.continuous == xc);
    std::vector<int> act;
    for (bool a : x.active) act.push_back(a);
    CHECK(j.at("active").get<std::vector<int>>() == act);
    CHECK(j.at("viable").get<bool>() == !j.at("f")[0].is_null());
  }
  fs::remove_all(d);
}

TEST_CASE("same seed gives identical logs apart from timings") {
  const fs::path d = scratch("determinism");
  const RunConfig c = quick("h-alimo", "replace:predicted-worst:a=1");
  run_bo(c, 42, (d / "a.jsonl").string());
  run_bo(c, 42, (d / "b.jsonl").string());
  CHECK(strip_times(d / "a.jsonl") == strip_times(d / "b.jsonl"));
  run_bo(c, 43, (d / "c.jsonl").string());
  CHECK(strip_times(d / "a.jsonl") != strip_times(d / "c.jsonl"));
  fs::remove_all(d);
}

TEST_CASE("repetition seeds and stems") {
  CHECK(repetition_seed(0, "alimo", "rejection", 0) == repetition_seed(0, "alimo", "rejection", 0));
  CHECK(repetition_seed(0, "alimo", "rejection", 0) != repetition_seed(0, "alimo", "rejection", 1));
  CHECK(repetition_seed(0, "alimo", "rejection", 0) != repetition_seed(1, "alimo", "rejection", 0));
  CHECK(run_stem("alimo", "predict:mdgp:pov=0.25", 3) == "alimo__predict_mdgp_pov_0.25__rep3");
}

TEST_CASE("resume skips completed repetitions") {
  const fs::path d = scratch("resume");
  RunConfig c = quick("alimo", "rejection");
  c.out_dir = d.string();
  const auto first = run_repetitions(c);
  REQUIRE(first.size() == 2);
  const fs::path log0 = d / (run_stem("alimo", "rejection", 0) + ".jsonl");
  const fs::path log1 = d / (run_stem("alimo", "rejection", 1) + ".jsonl");
  const std::string before0 = slurp(log0), before1 = slurp(log1);
  fs::remove(d / (run_stem("alimo", "rejection", 1) + ".summary.json"));
  const auto second = run_repetitions(c);
  CHECK(slurp(log0) == before0);
  CHECK(second[0].regret == first[0].regret);
  CHECK(second[1].regret == first[1].regret);
  CHECK(strip_times(log1) == [&] {
    std::ofstream(d / "tmp.jsonl") << before1;
    return strip_times(d / "tmp.jsonl");
  }());
  fs::remove_all(d);
}

TEST_CASE("campaign writes a summary with rejection as the baseline") {
  const fs::path d = scratch("campaign");
  const CampaignConfig cfg = parse_campaign_config(
      "problems = alimo, alimo-edge\n"
      "strategies = rejection; predict:mdgp:pov=0.25\n"
      "n_infill = 4  # short\n"
      "n-doe = 8\nreps = 2\ninfill-pop = 20\ninfill-gens = 6\n"
      "out = " + d.string() + "\n");
  CHECK(cfg.problems.size() == 2);
  CHECK(cfg.strategies.size() == 2);
  CHECK(cfg.base.n_infill == 4);
  CampaignConfig fast = cfg;
  fast.base.gp_starts = 2;
  fast.base.gp_warm_starts = 1;
  const auto runs = run_campaign(fast);
  CHECK(runs.size() == 8);

  const auto rows = summary_table(load_summaries(d.string()));
  REQUIRE(rows.size() == 4);
  write_summary_csv(rows, (d / "summary.csv").string());
  std::ifstream in(d / "summary.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "problem,strategy,median_regret,rank,fail_rate,train_time_s,infill_time_s,n_runs,rel_regret_pct,"
        "rel_fail_rate_pct,rel_train_time_pct,rel_infill_time_pct");
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 4);
  for (const auto& r : rows) {
    CHECK(r.n_runs == 2);
    if (r.strategy == "rejection") {
      CHECK(r.rel_regret == 0.0);
      CHECK(r.rel_fail_rate == 0.0);
      CHECK(r.rel_train_time == 0.0);
      CHECK(r.rel_infill_time == 0.0);
    }
  }
  write_plotdata(d.string(), (d / "plot.csv").string());
  CHECK(fs::file_size(d / "plot.csv") > 0);
  fs::remove_all(d);
}

TEST_CASE("config parser errors") {
  CHECK_THROWS_AS(parse_campaign_config("problems = alimo\n"), ConfigError);
  CHECK_THROWS_AS(parse_campaign_config("problems = alimo\nstrategies = rejection\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_campaign_config("problems = nope\nstrategies = rejection\n"), ConfigError);
  CHECK_THROWS_AS(parse_campaign_config("problems = alimo\nstrategies = rejection\nn-infill = x\n"), ConfigError);
  CHECK_THROWS_AS(parse_campaign_config("problems alimo\n"), ConfigError);
}
