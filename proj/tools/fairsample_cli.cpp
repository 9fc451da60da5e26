#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fairsample/config.hpp"
#include "fairsample/error.hpp"
#include "fairsample/harness.hpp"
#include "fairsample/resampler.hpp"
#include "fairsample/rng.hpp"
#include "fairsample/splitter.hpp"
#include "fairsample/synthgen.hpp"

namespace fs = std::filesystem;
using namespace fairsample;

namespace {

struct Options {
  std::string config;
  std::string data;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t jobs = 1;
  double ratio = 1.0;
  std::string strategy = "sr_only";
  std::string technique = "bootstrap";
};

fs::path out_dir(const Options& opt) {
  fs::path dir(opt.out);
  fs::create_directories(dir);
  return dir;
}

PoolConfig resolved_pool(const ExperimentConfig& cfg) {
  PoolConfig pool = cfg.pool;
  bool needs_calibration = false;
  for (const auto& [g, share] : pool.group_mix) {
    (void)share;
    if (!pool.group_intercepts.count(g)) needs_calibration = true;
  }
  if (needs_calibration) {
    pool.group_intercepts = calibrate_intercepts(pool);
    for (const auto& [g, b] : pool.group_intercepts)
      std::printf("calibrated intercept %-12s %+.4f\n", g.c_str(), b);
  }
  return pool;
}

Dataset pool_from(const Options& opt, const ExperimentConfig& cfg) {
  if (!opt.data.empty()) return load_csv(opt.data);
  return generate_pool(resolved_pool(cfg));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

ResultTable table_from(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load_table(in);
}

void cmd_generate(const Options& opt) {
  ExperimentConfig cfg = load_experiment_config(opt.config);
  if (opt.seed_set) cfg.pool.seed = opt.seed;
  const Dataset pool = generate_pool(resolved_pool(cfg));
  const fs::path path = out_dir(opt) / "pool.csv";
  save_csv(pool, path);
  std::printf("wrote %s (%zu rows, %zu features)\n", path.c_str(), pool.size(),
              pool.dim());
}

void cmd_split(const Options& opt) {
  const ExperimentConfig cfg = load_experiment_config(opt.config);
  if (opt.data.empty()) throw ConfigError("split needs --data <pool csv>");
  const Dataset pool = load_csv(opt.data);
  const std::uint64_t seed =
      opt.seed_set ? opt.seed : derive_seed(cfg.design.master_seed, "folds");
  const FoldAssignment folds = stratified_kfold(pool, cfg.design.folds, seed);
  const fs::path path = out_dir(opt) / "folds.csv";
  save_folds(folds, pool.row_id, path);
  std::vector<std::size_t> sizes(folds.k, 0);
  for (std::size_t f : folds.fold_of) ++sizes[f];
  std::printf("wrote %s (folds:", path.c_str());
  for (std::size_t s : sizes) std::printf(" %zu", s);
  std::printf(")\n");
}

void cmd_resample(const Options& opt) {
  const ExperimentConfig cfg = load_experiment_config(opt.config);
  if (opt.data.empty()) throw ConfigError("resample needs --data <train csv>");
  const Dataset train = load_csv(opt.data);
  ResampleTarget target;
  target.ratio = opt.ratio;
  target.strategy = strategy_from_string(opt.strategy);
  target.technique = technique_from_string(opt.technique);

  const ResamplePlan plan = make_plan(train, cfg.groups, target);
  const std::uint64_t seed = opt.seed_set ? opt.seed : cfg.design.master_seed;
  const Dataset resampled =
      apply_plan(train, plan, seed, cfg.design.smote_neighbors);

  const fs::path dir = out_dir(opt);
  save_plan(plan, dir / "plan.csv");
  save_csv(resampled, dir / "resampled.csv");
  std::printf("wrote %s and %s (%zu -> %zu rows)\n", (dir / "plan.csv").c_str(),
              (dir / "resampled.csv").c_str(), train.size(), resampled.size());
  for (const auto& [g, r] : plan.achieved)
    std::printf("achieved ratio %-12s %.6f\n", g.c_str(), r);
}

void cmd_run(const Options& opt) {
  ExperimentConfig cfg = load_experiment_config(opt.config);
  if (opt.seed_set) cfg.design.master_seed = opt.seed;
  const Dataset pool = pool_from(opt, cfg);
  const SweepResult sweep = run_sweep(pool, cfg, opt.jobs);

  const fs::path dir = out_dir(opt);
  {
    std::ofstream out(dir / "results.csv", std::ios::binary);
    if (!out) throw DataError("cannot write results.csv");
    write_results_csv(sweep.records, cfg, out);
  }
  save_folds(sweep.folds, pool.row_id, dir / "folds.csv");
  {
    std::ofstream out(dir / "tuned.csv", std::ios::binary);
    out << "classifier,fold,params\n";
    for (const auto& [key, spec] : sweep.tuned) {
      std::string params;
      for (const auto& [name, value] : spec.hyperparams) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        if (!params.empty()) params += ';';
        params += name + "=" + buf;
      }
      out << to_string(key.first) << ',' << key.second << ',' << params << '\n';
    }
  }

  const std::size_t bad = static_cast<std::size_t>(
      std::count_if(sweep.records.begin(), sweep.records.end(),
                    [](const ResultRecord& r) { return r.infeasible; }));
  std::printf("wrote %s (%zu cells, %zu infeasible)\n",
              (dir / "results.csv").c_str(), sweep.records.size(), bad);
  if (!sweep.records.empty() && bad == sweep.records.size())
    throw InfeasibleError("every cell in the sweep was infeasible");
}

void cmd_aggregate(const Options& opt) {
  if (opt.data.empty()) throw ConfigError("aggregate needs --data <results csv>");
  const ResultTable means = aggregate(table_from(opt.data));
  const fs::path path = out_dir(opt) / "aggregate.csv";
  std::ofstream out(path, std::ios::binary);
  write_table(means, out);
  std::printf("wrote %s (%zu rows)\n", path.c_str(), means.rows.size());
}

void cmd_correlate(const Options& opt) {
  if (opt.data.empty()) throw ConfigError("correlate needs --data <results csv>");
  const ResultTable corr = condition_correlations(table_from(opt.data));
  const fs::path path = out_dir(opt) / "correlations.csv";
  std::ofstream out(path, std::ios::binary);
  write_table(corr, out);
  std::printf("wrote %s (%zu rows)\n", path.c_str(), corr.rows.size());
}

void cmd_tradeoff(const Options& opt) {
  if (opt.data.empty()) throw ConfigError("tradeoff needs --data <results csv>");
  const ResultTable trade = emit_tradeoff(table_from(opt.data));
  const fs::path dir = out_dir(opt);
  {
    std::ofstream out(dir / "tradeoff.csv", std::ios::binary);
    write_table(trade, out);
  }
  write_text(dir / "tradeoff.svg", tradeoff_svg(trade));
  std::printf("wrote %s and %s (%zu rows)\n", (dir / "tradeoff.csv").c_str(),
              (dir / "tradeoff.svg").c_str(), trade.rows.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness-aware resampling experiments on screening data"};
  app.require_subcommand(1);

  Options opt;
  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config, "experiment config (JSON)");
    if (needs_config) c->required();
    sub->add_option("--data", opt.data, "input CSV");
    sub->add_option("--out", opt.out, "output directory (default: .)");
    sub->add_option("--seed", opt.seed, "seed override")
        ->each([&](const std::string&) { opt.seed_set = true; });
  };

  auto* generate = app.add_subcommand("generate", "synthesize an applicant pool");
  add_common(generate, true);
  auto* split = app.add_subcommand("split", "assign stratified cross-validation folds");
  add_common(split, true);
  auto* resample = app.add_subcommand("resample", "plan and apply one resampling target");
  add_common(resample, true);
  resample->add_option("--ratio", opt.ratio, "target impact ratio")->required();
  resample->add_option("--strategy", opt.strategy, "sr_only | sr_and_n");
  resample->add_option("--technique", opt.technique, "bootstrap | smote");
  auto* run = app.add_subcommand("run", "run the full factorial sweep");
  add_common(run, true);
  run->add_option("--jobs", opt.jobs, "worker threads (default 1)");
  auto* agg = app.add_subcommand("aggregate", "condition means from a results CSV");
  add_common(agg, false);
  auto* corr = app.add_subcommand("correlate",
                                  "condition-factor correlations from a results CSV");
  add_common(corr, false);
  auto* trade = app.add_subcommand("tradeoff",
                                   "accuracy/impact-ratio trade-off table and plot");
  add_common(trade, false);

  generate->callback([&] { cmd_generate(opt); });
  split->callback([&] { cmd_split(opt); });
  resample->callback([&] { cmd_resample(opt); });
  run->callback([&] { cmd_run(opt); });
  agg->callback([&] { cmd_aggregate(opt); });
  corr->callback([&] { cmd_correlate(opt); });
  trade->callback([&] { cmd_tradeoff(opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const CalibrationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
