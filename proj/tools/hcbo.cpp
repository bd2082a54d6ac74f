#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hcbo/errors.hpp"
#include "hcbo/problems.hpp"
#include "hcbo/runner.hpp"

using namespace hcbo;

namespace {

void write_tables(const std::vector<RunSummary>& runs, const std::string& csv) {
  const auto rows = summary_table(runs);
  write_summary_csv(rows, csv);
  std::string ranks = csv;
  if (ranks.size() > 4 && ranks.ends_with(".csv")) ranks.resize(ranks.size() - 4);
  ranks += "_ranks.csv";
  write_rank_csv(rows, ranks);
  std::cout << "wrote " << csv << " and " << ranks << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimization with hidden constraints"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string strategy = "predict:mdgp:pov=0.25";
  std::string crowding = "lowest";
  auto* run = app.add_subcommand("run", "Run repeated BO on one problem");
  run->add_option("--problem", rc.problem, "Problem name")->required();
  run->add_option("--strategy", strategy, "Hidden-constraint strategy");
  run->add_option("--n-infill", rc.n_infill, "Infill evaluations after the DoE");
  run->add_option("--n-batch", rc.n_batch, "Points per infill iteration");
  run->add_option("--n-doe", rc.n_doe, "DoE size (default from k-doe and fr-expected)");
  run->add_option("--k-doe", rc.doe.k_doe, "DoE size multiplier");
  run->add_option("--fr-expected", rc.doe.fr_expected, "Expected fail rate for DoE sizing");
  run->add_option("--reps", rc.repetitions, "Repetitions");
  run->add_option("--seed", rc.seed, "Master seed");
  run->add_option("--out", rc.out_dir, "Output directory")->required();
  run->add_option("--infill-pop", rc.infill_pop_size, "Infill NSGA-II population");
  run->add_option("--infill-gens", rc.infill_generations, "Infill NSGA-II generations");
  run->add_option("--crowding", crowding, "Batch selection by lowest or highest crowding")
      ->check(CLI::IsMember({"lowest", "highest"}));
  run->add_flag("!--no-refine", rc.refine, "Skip local refinement of continuous variables");

  std::string config_path;
  auto* campaign = app.add_subcommand("campaign", "Run a problem x strategy campaign");
  campaign->add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);

  std::string in_dir, out_csv;
  auto* summarize = app.add_subcommand("summarize", "Aggregate run summaries into CSV tables");
  summarize->add_option("--in", in_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  summarize->add_option("--out", out_csv, "Summary CSV")->required();

  std::string fr_problem;
  int fr_n = 100000;
  std::uint64_t fr_seed = 0;
  auto* failrate = app.add_subcommand("failrate", "Monte-Carlo fail rate and imputation ratio");
  failrate->add_option("--problem", fr_problem, "Problem name (default: all)");
  failrate->add_option("--n", fr_n, "Hierarchical samples");
  failrate->add_option("--seed", fr_seed, "Sampling seed");

  std::string plot_in, plot_out;
  auto* plotdata = app.add_subcommand("plotdata", "Median and interquartile delta-HV vs evaluations");
  plotdata->add_option("--in", plot_in, "Run directory")->required()->check(CLI::ExistingDirectory);
  plotdata->add_option("--out", plot_out, "Output CSV")->required();

  auto* list = app.add_subcommand("problems", "List problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      rc.strategy = StrategyConfig::parse(strategy);
      rc.crowding = crowding == "highest" ? CrowdingSelect::highest : CrowdingSelect::lowest;
      const auto runs = run_repetitions(rc);
      for (const auto& s : runs)
        std::cout << "rep " << s.rep << ": " << (s.ok ? "ok" : "FAILED " + s.error) << ", regret " << s.regret
                  << ", final dHV " << s.final_delta_hv << ", fail rate " << s.fail_rate << "\n";
    } else if (*campaign) {
      std::ifstream in(config_path);
      std::stringstream text;
      text << in.rdbuf();
      const CampaignConfig cc = parse_campaign_config(text.str());
      if (cc.base.out_dir.empty()) throw ConfigError("campaign config needs 'out'");
      const auto runs = run_campaign(cc);
      write_tables(runs, cc.base.out_dir + "/summary.csv");
    } else if (*summarize) {
      write_tables(load_summaries(in_dir), out_csv);
    } else if (*failrate) {
      std::vector<const ProblemDef*> probs;
      if (fr_problem.empty())
        for (const auto& p : registry()) probs.push_back(&p);
      else
        probs.push_back(&find_problem(fr_problem));
      std::cout << "problem,n_xc,n_xd,n_f,n_g,fail_rate_pct,table_fail_rate_pct,ir,ir_discrete,table_ir,seconds\n";
      for (const auto* p : probs) {
        const auto t0 = std::chrono::steady_clock::now();
        const double fr = fail_rate_monte_carlo(*p, fr_n, fr_seed);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const ImputationRatio ir = imputation_ratio(p->space, enumerate_valid_discrete(p->space));
        std::cout << p->name << ',' << p->space.n_continuous() << ',' << p->space.n_discrete() << ',' << p->n_f << ','
                  << p->n_g << ',' << std::fixed << std::setprecision(2) << 100 * fr << ','
                  << 100 * p->table.fail_rate << ',' << std::setprecision(3) << ir.overall << ',' << ir.discrete << ','
                  << p->table.ir << ',' << secs << std::defaultfloat << "\n";
      }
    } else if (*plotdata) {
      write_plotdata(plot_in, plot_out);
      std::cout << "wrote " << plot_out << "\n";
    } else if (*list) {
      for (const auto& p : registry())
        std::cout << std::left << std::setw(22) << p.name << p.label << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
