#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairsample/classifiers.hpp"
#include "fairsample/config.hpp"
#include "fairsample/dataset.hpp"
#include "fairsample/resampler.hpp"
#include "fairsample/splitter.hpp"

namespace fairsample {

// One unit of the factorial sweep: a resampling condition (or raw control),
// a classifier, and a test fold.  cell_seed is derived from the master seed
// and the cell id, so any cell can be reproduced in isolation.
struct ExperimentCell {
  ResampleTarget target;
  ClassifierKind classifier = ClassifierKind::LOGISTIC;
  std::size_t fold = 0;
  std::string cell_id;
  std::uint64_t cell_seed = 0;

  bool raw() const { return !target.ratio.has_value(); }
};

// Cartesian product of {ratios x strategies x techniques x classifiers x
// folds} followed by the raw controls {classifiers x folds}, in a stable
// deterministic order.
std::vector<ExperimentCell> enumerate_cells(const DesignConfig& design);

// Test-fold metrics at one overall selection-rate level.  Empty optionals
// pair with an entry in `flags` explaining what was undefined.
struct CellMetrics {
  double sr_level = 0.0;
  std::optional<double> acc_overall;
  std::vector<std::optional<double>> acc_groups;  // reference first, then focal
  std::vector<std::optional<double>> ai_groups;   // aggregate first, then focal
  std::vector<std::string> flags;
};

struct ResultRecord {
  ExperimentCell cell;
  bool infeasible = false;
  std::string failure;                          // reason when infeasible
  std::vector<std::optional<double>> achieved;  // training ratio per focal group
  std::vector<CellMetrics> by_sr;               // one entry per sr level
};

// Train/resample/fit/score one cell.  Plans apply to the train view only; an
// infeasible plan or degenerate fit marks the record instead of throwing.
ResultRecord run_cell(const ExperimentCell& cell, const Dataset& pool,
                      const FoldAssignment& folds, const ExperimentConfig& cfg,
                      const ClassifierSpec& tuned);

struct SweepResult {
  std::vector<ResultRecord> records;  // in enumerate_cells order
  std::map<std::pair<ClassifierKind, std::size_t>, ClassifierSpec> tuned;
  FoldAssignment folds;
};

// The full factorial run: fold assignment, per-(classifier, fold) tuning on
// the raw train views, then every cell.  `jobs` > 1 runs cells on a thread
// pool; output is byte-identical regardless of job count.
SweepResult run_sweep(const Dataset& pool, const ExperimentConfig& cfg,
                      std::size_t jobs = 1);

// Header for the results CSV, fixed order:
// cell_id,ratio_nominal,strategy,technique,classifier,fold,
// achieved_ratio_<g>...,sr_level,acc_overall,acc_<reference>,acc_<g>...,
// ai_<aggregate>,ai_<g>...,undefined_flags
std::vector<std::string> result_columns(const ExperimentConfig& cfg);

// One CSV row per (record, sr level); undefined metrics become empty cells
// with their flags listed in undefined_flags.
void write_results_csv(const std::vector<ResultRecord>& records,
                       const ExperimentConfig& cfg, std::ostream& out);

// Generic comma-separated table with a header row — the interchange format
// between the sweep and the reporting commands.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // DataError when absent
};

ResultTable load_table(std::istream& in);
void write_table(const ResultTable& t, std::ostream& out);

// Mean of every numeric column (achieved_ratio_*, acc_*, ai_*) per condition:
// grouped by ratio, by ratio x strategy, and by ratio x technique, each at
// every sr level.  Empty cells are excluded from the means; n_missing counts
// them and n_infeasible counts skipped cells, so nothing shrinks silently.
ResultTable aggregate(const ResultTable& results);

// Pearson correlations between the coded condition factors (numeric ratio;
// strategy sr_only=0 / sr_and_n=1; technique bootstrap=0 / smote=1) and each
// ai_* column, per sr level.  Raw and infeasible rows are excluded; a factor
// or column without variance yields an empty cell.
ResultTable condition_correlations(const ResultTable& results);

// Mean overall accuracy against mean aggregate impact ratio per (classifier,
// ratio) at overall SR .50 (or the largest configured level) — the
// accuracy/fairness trade-off table, raw controls included.
ResultTable emit_tradeoff(const ResultTable& results);

// Minimal self-contained SVG scatter of a tradeoff table.
std::string tradeoff_svg(const ResultTable& tradeoff);

}  // namespace fairsample
