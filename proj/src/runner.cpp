#include "hcbo/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hcbo/errors.hpp"
#include "hcbo/gp.hpp"
#include "hcbo/metrics.hpp"
#include "hcbo/pov.hpp"
#include "hcbo/problems.hpp"

namespace hcbo {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kMaxDoeExtensions = 3;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix(splitmix(seed ^ (stream * 0x632be59bd9b4e019ULL)) + index);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool feasible(const EvaluatedPoint& p) {
  if (!p.viable) return false;
  return std::all_of(p.g.begin(), p.g.end(), [](double g) { return g <= 0.0; });
}

double total_violation(const EvaluatedPoint& p) {
  double v = 0.0;
  for (double g : p.g) v += std::max(g, 0.0);
  return v;
}

PointSet feasible_front(const std::vector<EvaluatedPoint>& archive) {
  PointSet f;
  for (const auto& p : archive)
    if (feasible(p)) f.push_back(p.f);
  return nondominated(f);
}

// Front used by the infill criteria; falls back to the least-violating viable points.
PointSet infill_front(const std::vector<EvaluatedPoint>& archive) {
  PointSet front = feasible_front(archive);
  if (!front.empty()) return front;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : archive)
    if (p.viable) best = std::min(best, total_violation(p));
  PointSet f;
  for (const auto& p : archive)
    if (p.viable && total_violation(p) == best) f.push_back(p.f);
  return nondominated(f);
}

struct DeltaHvContext {
  bool available = false;
  bool single = true;
  ReferenceData ref;
  std::vector<double> ref_point;
  double hv_ref = 0.0;

  double operator()(const PointSet& front) const {
    if (!available) return std::numeric_limits<double>::quiet_NaN();
    if (single) {
      double best = std::numeric_limits<double>::quiet_NaN();
      for (const auto& p : front) best = std::isnan(best) ? p[0] : std::min(best, p[0]);
      return delta_hv_single(best, ref.front.front()[0], ref.scale);
    }
    if (front.empty()) return 1.0;
    return std::clamp((hv_ref - hypervolume(front, ref_point)) / hv_ref, 0.0, 1.0);
  }
};

DeltaHvContext make_delta_hv(const ProblemDef& problem) {
  DeltaHvContext ctx;
  ctx.single = problem.n_f == 1;
  try {
    ctx.ref = load_reference(problem);
    if (!ctx.single) {
      ctx.ref_point = hv_reference_point(ctx.ref.front);
      ctx.hv_ref = hypervolume(ctx.ref.front, ctx.ref_point);
      if (!(ctx.hv_ref > 0.0)) throw ConfigError("reference front of " + problem.name + " has zero hypervolume");
    }
    ctx.available = true;
  } catch (const ConfigError& e) {
    std::cerr << "warning: " << e.what() << "; delta-HV not recorded\n";
  }
  return ctx;
}

void write_log_lines(std::ostream& os, const RunRecord& rec, int first_eval_id) {
  int id = first_eval_id;
  for (const auto& p : rec.batch) {
    json active = json::array();
    for (bool a : p.x.active) active.push_back(a ? 1 : 0);
    json line;
    line["iter"] = rec.iteration;
    line["eval_id"] = id++;
    line["x_discrete"] = p.x.discrete;
    line["x_continuous"] = p.x.continuous;
    line["active"] = active;
    line["f"] = p.f;
    line["g"] = p.g;
    line["viable"] = p.viable;
    line["delta_hv"] = rec.delta_hv;
    line["t_train_s"] = rec.t_train_s;
    line["t_infill_s"] = rec.t_infill_s;
    os << line.dump() << '\n';
  }
  os.flush();
}

bool contains(const std::vector<DesignVector>& xs, const DesignVector& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  return out;
}

json summary_json(const RunSummary& s) {
  return json{{"problem", s.problem},
              {"strategy", s.strategy},
              {"rep", s.rep},
              {"seed", s.seed},
              {"ok", s.ok},
              {"error", s.error},
              {"n_doe", s.n_doe},
              {"n_evaluations", s.n_evaluations},
              {"regret", s.regret},
              {"final_delta_hv", s.final_delta_hv},
              {"fail_rate", s.fail_rate},
              {"train_time_s", s.train_time_s},
              {"infill_time_s", s.infill_time_s}};
}

double num_or_nan(const json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

RunSummary summary_from_json(const json& j) {
  RunSummary s;
  s.problem = j.at("problem").get<std::string>();
  s.strategy = j.at("strategy").get<std::string>();
  s.rep = j.at("rep").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.ok = j.at("ok").get<bool>();
  s.error = j.value("error", std::string{});
  s.n_doe = j.value("n_doe", 0);
  s.n_evaluations = j.value("n_evaluations", 0);
  s.regret = num_or_nan(j.at("regret"));
  s.final_delta_hv = num_or_nan(j.at("final_delta_hv"));
  s.fail_rate = num_or_nan(j.at("fail_rate"));
  s.train_time_s = num_or_nan(j.at("train_time_s"));
  s.infill_time_s = num_or_nan(j.at("infill_time_s"));
  return s;
}

double rel_change(double x, double base) {
  if (std::isnan(base) || std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (base == 0.0) return x == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  return 100.0 * (x - base) / base;
}

std::string csv_num(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

void RunConfig::validate() const {
  if (n_infill < 1) throw ConfigError("n_infill must be at least 1");
  if (n_batch < 1) throw ConfigError("n_batch must be at least 1");
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (n_doe < 0) throw ConfigError("n_doe must be nonnegative");
  if (infill_pop_size < 4 || infill_generations < 1) throw ConfigError("infill optimizer settings too small");
  strategy.validate();
  find_problem(problem);
}

std::uint64_t repetition_seed(std::uint64_t master, const std::string& problem, const std::string& strategy,
                              int rep) {
  // FNV-1a over the identifying fields, mixed with the master seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  feed(problem);
  feed(strategy);
  feed(std::to_string(rep));
  return splitmix(h ^ splitmix(master));
}

std::vector<RunRecord> run_bo(const RunConfig& cfg, std::uint64_t seed, const std::string& log_path) {
  cfg.validate();
  const ProblemDef& problem = find_problem(cfg.problem);
  const DesignSpace& space = problem.space;
  const ValidDiscreteSet valid = enumerate_valid_discrete(space);
  const DeltaHvContext dhv = make_delta_hv(problem);
  const StrategyConfig& strat = cfg.strategy;

  std::ofstream log;
  if (!log_path.empty()) {
    if (fs::path(log_path).has_parent_path()) fs::create_directories(fs::path(log_path).parent_path());
    log.open(log_path, std::ios::trunc);
    if (!log) throw ConfigError("cannot write log file " + log_path);
  }

  std::vector<EvaluatedPoint> archive;
  std::vector<DesignVector> archive_x;
  std::vector<RunRecord> records;
  int eval_id = 0;

  // DoE, extended when nothing viable was found.
  const int n_doe = cfg.n_doe > 0 ? cfg.n_doe : doe_size(cfg.doe, static_cast<int>(space.n_vars()));
  {
    RunRecord rec;
    rec.iteration = 0;
    for (int ext = 0; ext <= kMaxDoeExtensions; ++ext) {
      for (auto& x : hierarchical_sample(space, valid, n_doe, sub_seed(seed, 1, ext))) {
        rec.batch.push_back(evaluate(problem, x));
        archive.push_back(rec.batch.back());
        archive_x.push_back(x);
      }
      if (std::any_of(archive.begin(), archive.end(), [](const auto& p) { return p.viable; })) break;
      if (ext == kMaxDoeExtensions) {
        rec.evaluations = static_cast<int>(archive.size());
        rec.delta_hv = dhv({});
        if (log.is_open()) write_log_lines(log, rec, eval_id);
        throw NoViablePoints("no viable point in the DoE after " + std::to_string(kMaxDoeExtensions) +
                             " extensions");
      }
    }
    rec.evaluations = static_cast<int>(archive.size());
    rec.front = feasible_front(archive);
    rec.delta_hv = dhv(rec.front);
    if (log.is_open()) write_log_lines(log, rec, eval_id);
    eval_id += static_cast<int>(rec.batch.size());
    records.push_back(std::move(rec));
  }
  const int budget = static_cast<int>(archive.size()) + cfg.n_infill;

  std::vector<std::vector<double>> warm(static_cast<std::size_t>(problem.n_f + problem.n_g));
  std::vector<double> warm_pov;
  for (int iter = 1; static_cast<int>(archive.size()) < budget; ++iter) {
    RunRecord rec;
    rec.iteration = iter;
    const auto t_train = std::chrono::steady_clock::now();

    GpOptions gp_opt;
    gp_opt.seed = sub_seed(seed, 2, iter);
    const TrainingData data = build_training_sets(space, archive, strat, gp_opt);
    std::vector<GpModel> models;
    models.reserve(data.y.size());
    for (std::size_t k = 0; k < data.y.size(); ++k) {
      GpOptions o = gp_opt;
      o.seed = sub_seed(seed, 3, iter * 64 + k);
      o.warm_start = warm[k];
      o.n_starts = warm[k].empty() ? cfg.gp_starts : cfg.gp_warm_starts;
      models.push_back(GpModel::fit(space, data.x, data.y[k], o));
      warm[k] = models.back().length_scales();
    }
    std::optional<PovModel> pov;
    if (strat.kind == StrategyKind::predict) {
      PovOptions po;
      po.variant = strat.model;
      po.seed = sub_seed(seed, 4, iter);
      po.gp.seed = po.seed;
      po.gp.warm_start = warm_pov;
      po.gp.n_starts = warm_pov.empty() ? cfg.gp_starts : cfg.gp_warm_starts;
      pov = PovModel::fit(space, data.label_x, data.labels, po);
      if (auto ls = pov->length_scales(); !ls.empty()) warm_pov = std::move(ls);
    }
    rec.t_train_s = seconds_since(t_train);

    const auto t_infill = std::chrono::steady_clock::now();
    std::vector<const GpModel*> obj, con;
    for (int k = 0; k < problem.n_f; ++k) obj.push_back(&models[static_cast<std::size_t>(k)]);
    for (int k = 0; k < problem.n_g; ++k) con.push_back(&models[static_cast<std::size_t>(problem.n_f + k)]);
    InfillOptions io;
    io.nsga2.pop_size = cfg.infill_pop_size;
    io.nsga2.n_generations = cfg.infill_generations;
    io.nsga2.seed = sub_seed(seed, 5, iter);
    InfillProblem infill(space, obj, con, infill_front(archive), io);
    if (pov) infill.set_pov(&*pov, strat.integration, strat.pov_min);

    const InfillResult pareto =
        optimize_infill(infill, hierarchical_sample(space, valid, cfg.infill_pop_size, sub_seed(seed, 6, iter)));
    const int n_want = std::min(cfg.n_batch, budget - static_cast<int>(archive.size()));
    BatchSelection sel = select_batch(pareto, n_want, sub_seed(seed, 7, iter), archive_x, cfg.crowding);

    std::vector<DesignVector> batch;
    for (const auto& x : sel.points) {
      DesignVector xr = cfg.refine ? refine_continuous(x, infill, pareto.bounds) : x;
      if (contains(archive_x, xr) || contains(batch, xr)) xr = x;
      if (!contains(archive_x, xr) && !contains(batch, xr)) batch.push_back(xr);
    }
    // Top up from random samples when the infill set cannot supply enough new points.
    for (int attempt = 0; static_cast<int>(batch.size()) < n_want && attempt < 20; ++attempt) {
      for (auto& x : hierarchical_sample(space, valid, n_want, sub_seed(seed, 8, iter * 32 + attempt))) {
        if (static_cast<int>(batch.size()) >= n_want) break;
        if (!contains(archive_x, x) && !contains(batch, x)) batch.push_back(x);
      }
    }
    if (batch.empty()) throw EmptyValidSet("no unevaluated design vector left to sample");
    rec.t_infill_s = seconds_since(t_infill);

    for (const auto& x : batch) {
      rec.batch.push_back(evaluate(problem, x));
      archive.push_back(rec.batch.back());
      archive_x.push_back(x);
    }
    rec.evaluations = static_cast<int>(archive.size());
    rec.front = feasible_front(archive);
    rec.delta_hv = dhv(rec.front);
    if (log.is_open()) write_log_lines(log, rec, eval_id);
    eval_id += static_cast<int>(rec.batch.size());
    records.push_back(std::move(rec));
  }
  return records;
}

RunSummary summarize_run(const RunConfig& cfg, const std::vector<RunRecord>& records) {
  RunSummary s;
  s.problem = cfg.problem;
  s.strategy = cfg.strategy.to_string();
  if (records.empty()) throw ConfigError("no run records");
  s.n_doe = records.front().evaluations;
  s.n_evaluations = records.back().evaluations;
  std::vector<double> evals, dhv;
  int n_infill = 0, n_failed = 0;
  for (const auto& r : records) {
    evals.push_back(r.evaluations);
    dhv.push_back(r.delta_hv);
    s.train_time_s += r.t_train_s;
    s.infill_time_s += r.t_infill_s;
    if (r.iteration == 0) continue;
    for (const auto& p : r.batch) {
      ++n_infill;
      if (!p.viable) ++n_failed;
    }
  }
  s.final_delta_hv = dhv.back();
  s.regret = std::isnan(dhv.back()) ? std::numeric_limits<double>::quiet_NaN() : regret(evals, dhv);
  s.fail_rate = n_infill ? static_cast<double>(n_failed) / n_infill : 0.0;
  return s;
}

std::string run_stem(const std::string& problem, const std::string& strategy, int rep) {
  return sanitize(problem) + "__" + sanitize(strategy) + "__rep" + std::to_string(rep);
}

std::vector<RunSummary> run_repetitions(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.out_dir.empty()) throw ConfigError("output directory required");
  fs::create_directories(cfg.out_dir);
  const std::string strategy = cfg.strategy.to_string();
  std::vector<RunSummary> out;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    const std::string stem = (fs::path(cfg.out_dir) / run_stem(cfg.problem, strategy, rep)).string();
    const std::string summary_path = stem + ".summary.json";
    if (fs::exists(summary_path)) {
      std::ifstream in(summary_path);
      try {
        RunSummary prev = summary_from_json(json::parse(in));
        if (prev.ok) {
          out.push_back(prev);
          continue;
        }
      } catch (const std::exception&) {
        // Unreadable sidecar: run again.
      }
    }
    const std::uint64_t seed = repetition_seed(cfg.seed, cfg.problem, strategy, rep);
    RunSummary s;
    try {
      s = summarize_run(cfg, run_bo(cfg, seed, stem + ".jsonl"));
    } catch (const std::exception& e) {
      std::cerr << "warning: " << cfg.problem << " / " << strategy << " rep " << rep << " failed: " << e.what()
                << '\n';
      s.problem = cfg.problem;
      s.strategy = strategy;
      s.ok = false;
      s.error = e.what();
      s.regret = s.final_delta_hv = s.fail_rate = std::numeric_limits<double>::quiet_NaN();
    }
    s.rep = rep;
    s.seed = seed;
    std::ofstream(summary_path) << summary_json(s).dump(2) << '\n';
    out.push_back(s);
  }
  return out;
}

CampaignConfig parse_campaign_config(const std::string& text) {
  CampaignConfig c;
  std::istringstream in(text);
  std::string line;
  auto split_list = [](const std::string& v) {
    std::vector<std::string> items;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(0, item.find_first_not_of(" \t"));
      item.erase(item.find_last_not_of(" \t") + 1);
      if (!item.empty()) items.push_back(item);
    }
    return items;
  };
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    for (auto* s : {&key, &value}) {
      s->erase(0, s->find_first_not_of(" \t"));
      s->erase(s->find_last_not_of(" \t\r") + 1);
    }
    std::replace(key.begin(), key.end(), '_', '-');
    try {
      if (key == "problems" || key == "problem") {
        for (auto& p : split_list(value)) c.problems.push_back(p);
      } else if (key == "strategies" || key == "strategy") {
        // Strategy specs contain no commas; ';' also separates.
        std::replace(value.begin(), value.end(), ';', ',');
        for (auto& s : split_list(value)) c.strategies.push_back(s);
      } else if (key == "n-infill") {
        c.base.n_infill = std::stoi(value);
      } else if (key == "n-batch") {
        c.base.n_batch = std::stoi(value);
      } else if (key == "n-doe") {
        c.base.n_doe = std::stoi(value);
      } else if (key == "k-doe") {
        c.base.doe.k_doe = std::stod(value);
      } else if (key == "fr-expected") {
        c.base.doe.fr_expected = std::stod(value);
      } else if (key == "reps") {
        c.base.repetitions = std::stoi(value);
      } else if (key == "seed") {
        c.base.seed = std::stoull(value);
      } else if (key == "out") {
        c.base.out_dir = value;
      } else if (key == "infill-pop") {
        c.base.infill_pop_size = std::stoi(value);
      } else if (key == "infill-gens") {
        c.base.infill_generations = std::stoi(value);
      } else if (key == "refine") {
        c.base.refine = value == "1" || value == "true" || value == "yes";
      } else if (key == "crowding") {
        if (value == "lowest") c.base.crowding = CrowdingSelect::lowest;
        else if (value == "highest") c.base.crowding = CrowdingSelect::highest;
        else throw ConfigError("crowding must be lowest or highest");
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ConfigError("config line " + std::to_string(line_no) + ": bad value for " + key);
    }
  }
  if (c.problems.empty() || c.strategies.empty()) throw ConfigError("config needs problems and strategies");
  for (const auto& p : c.problems) find_problem(p);
  for (const auto& s : c.strategies) StrategyConfig::parse(s).validate();
  return c;
}

std::vector<RunSummary> run_campaign(const CampaignConfig& cfg) {
  if (cfg.problems.empty() || cfg.strategies.empty()) throw ConfigError("campaign needs problems and strategies");
  std::vector<RunSummary> all;
  for (const auto& p : cfg.problems)
    for (const auto& s : cfg.strategies) {
      RunConfig rc = cfg.base;
      rc.problem = p;
      rc.strategy = StrategyConfig::parse(s);
      auto runs = run_repetitions(rc);
      all.insert(all.end(), runs.begin(), runs.end());
    }
  return all;
}

std::vector<RunSummary> load_summaries(const std::string& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 13 && name.ends_with(".summary.json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunSummary> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    RunSummary s = summary_from_json(json::parse(in));
    if (!s.ok) {
      std::cerr << "warning: skipping crashed run " << f.filename().string() << ": " << s.error << '\n';
      continue;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<SummaryRow> summary_table(const std::vector<RunSummary>& runs) {
  std::map<std::string, std::map<std::string, std::vector<const RunSummary*>>> cells;
  std::vector<std::string> problem_order;
  for (const auto& r : runs) {
    if (!r.ok) continue;
    if (!cells.count(r.problem)) problem_order.push_back(r.problem);
    cells[r.problem][r.strategy].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& problem : problem_order) {
    const auto& by_strategy = cells[problem];
    std::map<std::string, std::vector<double>> regrets;
    for (const auto& [strategy, rs] : by_strategy)
      for (const auto* r : rs)
        if (!std::isnan(r->regret)) regrets[strategy].push_back(r->regret);
    std::map<std::string, int> rank_of;
    if (!regrets.empty()) {
      const StrategyRanking ranking = rank_strategies(regrets);
      for (std::size_t i = 0; i < ranking.strategies.size(); ++i) rank_of[ranking.strategies[i]] = ranking.ranks[i];
    }
    std::vector<SummaryRow> block;
    for (const auto& [strategy, rs] : by_strategy) {
      SummaryRow row;
      row.problem = problem;
      row.strategy = strategy;
      row.n_runs = static_cast<int>(rs.size());
      std::vector<double> fr, tt, ti;
      for (const auto* r : rs) {
        fr.push_back(r->fail_rate);
        tt.push_back(r->train_time_s);
        ti.push_back(r->infill_time_s);
      }
      row.median_regret = regrets.count(strategy) ? median(regrets[strategy]) : std::numeric_limits<double>::quiet_NaN();
      row.rank = rank_of.count(strategy) ? rank_of[strategy] : 0;
      row.fail_rate = median(fr);
      row.train_time_s = median(tt);
      row.infill_time_s = median(ti);
      block.push_back(row);
    }
    const auto base = std::find_if(block.begin(), block.end(), [](const auto& r) { return r.strategy == "rejection"; });
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (auto& row : block) {
      const bool has = base != block.end();
      row.rel_regret = has ? rel_change(row.median_regret, base->median_regret) : nan;
      row.rel_fail_rate = has ? rel_change(row.fail_rate, base->fail_rate) : nan;
      row.rel_train_time = has ? rel_change(row.train_time_s, base->train_time_s) : nan;
      row.rel_infill_time = has ? rel_change(row.infill_time_s, base->infill_time_s) : nan;
    }
    std::stable_sort(block.begin(), block.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << "problem,strategy,median_regret,rank,fail_rate,train_time_s,infill_time_s,n_runs,"
        "rel_regret_pct,rel_fail_rate_pct,rel_train_time_pct,rel_infill_time_pct\n";
  for (const auto& r : rows)
    os << r.problem << ',' << r.strategy << ',' << csv_num(r.median_regret) << ',' << r.rank << ','
       << csv_num(r.fail_rate) << ',' << csv_num(r.train_time_s) << ',' << csv_num(r.infill_time_s) << ','
       << r.n_runs << ',' << csv_num(r.rel_regret) << ',' << csv_num(r.rel_fail_rate) << ','
       << csv_num(r.rel_train_time) << ',' << csv_num(r.rel_infill_time) << '\n';
}

void write_rank_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::map<std::string, StrategyRanking> per_problem;
  for (const auto& r : rows) {
    if (r.rank == 0) continue;
    per_problem[r.problem].strategies.push_back(r.strategy);
    per_problem[r.problem].ranks.push_back(r.rank);
  }
  std::vector<StrategyRanking> rankings;
  for (auto& [p, r] : per_problem) rankings.push_back(r);
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << "strategy,rank1_pct,rank_le2_pct\n";
  for (const auto& [strategy, agg] : aggregate_ranks(rankings))
    os << strategy << ',' << csv_num(100.0 * agg.rank1) << ',' << csv_num(100.0 * agg.rank_le2) << '\n';
}

void write_plotdata(const std::string& dir, const std::string& path) {
  // Key: (problem, strategy) from the summary sidecar; values: per eval count, one delta-HV per rep.
  std::map<std::pair<std::string, std::string>, std::map<int, std::vector<double>>> series;
  for (const auto& s : load_summaries(dir)) {
    const fs::path log = fs::path(dir) / (run_stem(s.problem, s.strategy, s.rep) + ".jsonl");
    std::ifstream in(log);
    if (!in) {
      std::cerr << "warning: missing log " << log.string() << '\n';
      continue;
    }
    auto& cell = series[{s.problem, s.strategy}];
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (!j.at("delta_hv").is_number()) continue;
      cell[j.at("eval_id").get<int>() + 1].push_back(j.at("delta_hv").get<double>());
    }
  }
  auto quantile = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << "problem,strategy,evaluations,n_runs,median,q25,q75\n";
  for (const auto& [key, by_eval] : series)
    for (const auto& [n, vals] : by_eval)
      os << key.first << ',' << key.second << ',' << n << ',' << vals.size() << ',' << csv_num(quantile(vals, 0.5))
         << ',' << csv_num(quantile(vals, 0.25)) << ',' << csv_num(quantile(vals, 0.75)) << '\n';
}

}  // namespace hcbo
