#include "fairsample/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "fairsample/error.hpp"
#include "fairsample/metrics.hpp"
#include "fairsample/rng.hpp"

namespace fairsample {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}
std::string metric_str(double v) { return fmt("%.6f", v); }
std::string ratio_str(double r) { return fmt("%.1f", r); }
std::string sr_str(double s) { return fmt("%.2f", s); }

const char* short_strategy(Strategy s) {
  return s == Strategy::SR_ONLY ? "sro" : "srn";
}
const char* short_technique(Technique t) {
  return t == Technique::BOOTSTRAP ? "boot" : "smote";
}

std::string join(const std::vector<std::string>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::optional<double> parse_cell(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Membership test in a ';'-joined flag list.
bool has_flag(const std::string& cell, const std::string& flag) {
  std::size_t pos = 0;
  while (pos <= cell.size()) {
    const std::size_t end = std::min(cell.find(';', pos), cell.size());
    if (cell.compare(pos, end - pos, flag) == 0) return true;
    pos = end + 1;
  }
  return false;
}

std::optional<double> pearson(const std::vector<double>& x,
                              const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cxy = 0.0, cxx = 0.0, cyy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    cxy += dx * dy;
    cxx += dx * dx;
    cyy += dy * dy;
  }
  if (cxx <= 1e-24 || cyy <= 1e-24) return std::nullopt;
  return cxy / std::sqrt(cxx * cyy);
}

std::vector<std::string> acc_group_order(const GroupConfig& g) {
  std::vector<std::string> v{g.reference_group};
  v.insert(v.end(), g.focal_groups.begin(), g.focal_groups.end());
  return v;
}

std::vector<std::string> ai_group_order(const GroupConfig& g) {
  std::vector<std::string> v;
  if (g.aggregate_nonreference) v.push_back(g.aggregate_label);
  v.insert(v.end(), g.focal_groups.begin(), g.focal_groups.end());
  return v;
}

}  // namespace

std::vector<ExperimentCell> enumerate_cells(const DesignConfig& design) {
  design.validate();
  std::vector<ExperimentCell> cells;
  const auto push = [&](ExperimentCell c) {
    c.cell_seed = derive_seed(design.master_seed, c.cell_id);
    cells.push_back(std::move(c));
  };
  for (double r : design.ratios)
    for (Strategy s : design.strategies)
      for (Technique t : design.techniques)
        for (ClassifierKind k : design.classifiers)
          for (std::size_t f = 0; f < design.folds; ++f) {
            ExperimentCell c;
            c.target = ResampleTarget{r, s, t};
            c.classifier = k;
            c.fold = f;
            c.cell_id = "r" + ratio_str(r) + "-" + short_strategy(s) + "-" +
                        short_technique(t) + "-" + to_string(k) + "-f" +
                        std::to_string(f);
            push(std::move(c));
          }
  for (ClassifierKind k : design.classifiers)
    for (std::size_t f = 0; f < design.folds; ++f) {
      ExperimentCell c;
      c.classifier = k;
      c.fold = f;
      c.cell_id = std::string("raw-") + to_string(k) + "-f" + std::to_string(f);
      push(std::move(c));
    }
  return cells;
}

ResultRecord run_cell(const ExperimentCell& cell, const Dataset& pool,
                      const FoldAssignment& folds, const ExperimentConfig& cfg,
                      const ClassifierSpec& tuned) {
  ResultRecord rec;
  rec.cell = cell;
  rec.achieved.assign(cfg.groups.focal_groups.size(), std::nullopt);

  auto views = train_test_views(pool, folds, cell.fold);
  const Dataset& train = views.first;
  const Dataset& test = views.second;

  const auto fail_out = [&](const std::string& why) {
    rec.infeasible = true;
    rec.failure = why;
    rec.by_sr.clear();
    for (double sr : cfg.design.sr_levels) {
      CellMetrics m;
      m.sr_level = sr;
      m.acc_groups.assign(1 + cfg.groups.focal_groups.size(), std::nullopt);
      m.ai_groups.assign(ai_group_order(cfg.groups).size(), std::nullopt);
      m.flags = {"infeasible"};
      rec.by_sr.push_back(std::move(m));
    }
    return rec;
  };

  Dataset fitted;
  try {
    if (cell.raw()) {
      fitted = train;
    } else {
      const ResamplePlan plan = make_plan(train, cfg.groups, cell.target);
      for (std::size_t i = 0; i < cfg.groups.focal_groups.size(); ++i) {
        const auto it = plan.achieved.find(cfg.groups.focal_groups[i]);
        if (it != plan.achieved.end()) rec.achieved[i] = it->second;
      }
      fitted = apply_plan(train, plan, cell.cell_seed, cfg.design.smote_neighbors);
    }
  } catch (const InfeasibleError& e) {
    return fail_out(e.what());
  }

  ClassifierSpec spec = tuned;
  if (spec.kind == ClassifierKind::RANDOM_FOREST)
    spec.hyperparams["seed"] = static_cast<double>(cell.cell_seed & 0xffffffffULL);

  std::unique_ptr<TrainedModel> model;
  try {
    model = fit(spec, fitted.features, fitted.outcome);
  } catch (const DegenerateFitError& e) {
    return fail_out(e.what());
  }
  const std::vector<double> probs = model->predict_proba(test.features);

  const std::vector<std::string> acc_order = acc_group_order(cfg.groups);
  const std::vector<std::string> ai_order = ai_group_order(cfg.groups);
  for (double sr : cfg.design.sr_levels) {
    CellMetrics m;
    m.sr_level = sr;
    const std::vector<char> dec = threshold_at_sr(probs, sr);
    m.acc_overall = accuracy(dec, test.outcome);
    for (const std::string& g : acc_order) {
      std::vector<char> mask(test.size(), 0);
      bool any = false;
      for (std::size_t i = 0; i < test.size(); ++i)
        if (test.group[i] == g) {
          mask[i] = 1;
          any = true;
        }
      if (any) {
        m.acc_groups.push_back(accuracy(dec, test.outcome, &mask));
      } else {
        m.acc_groups.push_back(std::nullopt);
        m.flags.push_back("acc_" + g + "_empty");
      }
    }
    try {
      const AiRatioSet ai = ai_ratios(selection_stats(dec, test.group), cfg.groups);
      for (const std::string& g : ai_order) {
        const auto it = ai.ratios.find(g);
        if (it != ai.ratios.end()) {
          m.ai_groups.push_back(it->second);
        } else {
          m.ai_groups.push_back(std::nullopt);
          m.flags.push_back("ai_" + g + "_empty");
        }
      }
    } catch (const UndefinedRatioError&) {
      m.ai_groups.assign(ai_order.size(), std::nullopt);
      m.flags.push_back("ai_undefined");
    }
    rec.by_sr.push_back(std::move(m));
  }
  return rec;
}

SweepResult run_sweep(const Dataset& pool, const ExperimentConfig& cfg,
                      std::size_t jobs) {
  cfg.validate();
  pool.validate();

  SweepResult out;
  out.folds = stratified_kfold(pool, cfg.design.folds,
                               derive_seed(cfg.design.master_seed, "folds"));

  // Hyperparameters are tuned once per (classifier, fold) on the raw train
  // view and reused across every condition of that fold, so tuning never
  // sees resampled rows.
  for (ClassifierKind k : cfg.design.classifiers) {
    for (std::size_t f = 0; f < cfg.design.folds; ++f) {
      if (out.tuned.count({k, f})) continue;
      const auto views = train_test_views(pool, out.folds, f);
      const std::uint64_t tune_seed = derive_seed(
          cfg.design.master_seed,
          std::string("tune:") + to_string(k) + ":f" + std::to_string(f));
      out.tuned[{k, f}] =
          grid_tune(k, views.first.features, views.first.outcome, default_grid(k),
                    cfg.design.inner_folds, tune_seed);
    }
  }

  const std::vector<ExperimentCell> cells = enumerate_cells(cfg.design);
  out.records.resize(cells.size());
  const auto work = [&](std::size_t i) {
    out.records[i] = run_cell(cells[i], pool, out.folds, cfg,
                              out.tuned.at({cells[i].classifier, cells[i].fold}));
  };

  const std::size_t n_jobs =
      std::min(std::max<std::size_t>(jobs, 1), std::max<std::size_t>(cells.size(), 1));
  if (n_jobs <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    const auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        try {
          work(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(n_jobs);
    for (std::size_t t = 0; t < n_jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return out;
}

std::vector<std::string> result_columns(const ExperimentConfig& cfg) {
  std::vector<std::string> cols{"cell_id",   "ratio_nominal", "strategy",
                                "technique", "classifier",    "fold"};
  for (const auto& g : cfg.groups.focal_groups) cols.push_back("achieved_ratio_" + g);
  cols.push_back("sr_level");
  cols.push_back("acc_overall");
  for (const auto& g : acc_group_order(cfg.groups)) cols.push_back("acc_" + g);
  for (const auto& g : ai_group_order(cfg.groups)) cols.push_back("ai_" + g);
  cols.push_back("undefined_flags");
  return cols;
}

void write_results_csv(const std::vector<ResultRecord>& records,
                       const ExperimentConfig& cfg, std::ostream& out) {
  out << join(result_columns(cfg), ',') << '\n';
  for (const ResultRecord& rec : records) {
    std::vector<std::string> prefix;
    prefix.push_back(rec.cell.cell_id);
    if (rec.cell.raw()) {
      prefix.push_back("raw");
      prefix.push_back("na");
      prefix.push_back("na");
    } else {
      prefix.push_back(ratio_str(*rec.cell.target.ratio));
      prefix.push_back(to_string(rec.cell.target.strategy));
      prefix.push_back(to_string(rec.cell.target.technique));
    }
    prefix.push_back(to_string(rec.cell.classifier));
    prefix.push_back(std::to_string(rec.cell.fold));
    for (const auto& a : rec.achieved) prefix.push_back(a ? metric_str(*a) : "");

    for (const CellMetrics& m : rec.by_sr) {
      std::vector<std::string> row = prefix;
      row.push_back(sr_str(m.sr_level));
      row.push_back(m.acc_overall ? metric_str(*m.acc_overall) : "");
      for (const auto& v : m.acc_groups) row.push_back(v ? metric_str(*v) : "");
      for (const auto& v : m.ai_groups) row.push_back(v ? metric_str(*v) : "");
      row.push_back(join(m.flags, ';'));
      out << join(row, ',') << '\n';
    }
  }
}

std::size_t ResultTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw DataError("results table lacks column '" + name + "'");
}

ResultTable load_table(std::istream& in) {
  ResultTable t;
  std::string line;
  if (!std::getline(in, line)) throw DataError("results table is empty");
  t.columns = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_line(line);
    if (row.size() != t.columns.size())
      throw DataError("results row " + std::to_string(t.rows.size() + 1) +
                      " has " + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(t.columns.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_table(const ResultTable& t, std::ostream& out) {
  out << join(t.columns, ',') << '\n';
  for (const auto& row : t.rows) out << join(row, ',') << '\n';
}

ResultTable aggregate(const ResultTable& results) {
  const std::size_t c_ratio = results.column("ratio_nominal");
  const std::size_t c_strategy = results.column("strategy");
  const std::size_t c_technique = results.column("technique");
  const std::size_t c_sr = results.column("sr_level");
  const std::size_t c_flags = results.column("undefined_flags");

  std::vector<std::size_t> metric_cols;
  for (std::size_t i = 0; i < results.columns.size(); ++i) {
    const std::string& n = results.columns[i];
    if (n.rfind("achieved_ratio_", 0) == 0 || n.rfind("acc_", 0) == 0 ||
        n.rfind("ai_", 0) == 0)
      metric_cols.push_back(i);
  }

  struct Bucket {
    std::string ratio, strategy, technique, sr;
    std::size_t n_rows = 0, n_infeasible = 0, n_missing = 0;
    std::vector<double> sum;
    std::vector<std::size_t> cnt;
  };
  std::vector<std::vector<Bucket>> blocks(3);
  std::vector<std::map<std::string, std::size_t>> index(3);

  const auto touch = [&](int b, const std::string& ratio, const std::string& strategy,
                         const std::string& technique,
                         const std::string& sr) -> Bucket& {
    const std::string key = ratio + "|" + strategy + "|" + technique + "|" + sr;
    const auto [it, fresh] = index[b].try_emplace(key, blocks[b].size());
    if (fresh) {
      Bucket bk;
      bk.ratio = ratio;
      bk.strategy = strategy;
      bk.technique = technique;
      bk.sr = sr;
      bk.sum.assign(metric_cols.size(), 0.0);
      bk.cnt.assign(metric_cols.size(), 0);
      blocks[b].push_back(std::move(bk));
    }
    return blocks[b][it->second];
  };

  for (const auto& row : results.rows) {
    const bool infeasible = has_flag(row[c_flags], "infeasible");
    std::vector<Bucket*> hit;
    hit.push_back(&touch(0, row[c_ratio], "all", "all", row[c_sr]));
    if (row[c_ratio] != "raw") {
      hit.push_back(&touch(1, row[c_ratio], row[c_strategy], "all", row[c_sr]));
      hit.push_back(&touch(2, row[c_ratio], "all", row[c_technique], row[c_sr]));
    }
    for (Bucket* b : hit) {
      if (infeasible) {
        ++b->n_infeasible;
        continue;
      }
      ++b->n_rows;
      for (std::size_t mi = 0; mi < metric_cols.size(); ++mi) {
        if (const auto v = parse_cell(row[metric_cols[mi]])) {
          b->sum[mi] += *v;
          ++b->cnt[mi];
        } else {
          ++b->n_missing;
        }
      }
    }
  }

  ResultTable t;
  t.columns = {"grouping", "ratio",  "strategy",     "technique",
               "sr_level", "n_rows", "n_infeasible", "n_missing"};
  for (std::size_t i : metric_cols) t.columns.push_back(results.columns[i]);
  const char* names[3] = {"ratio", "ratio_x_strategy", "ratio_x_technique"};
  for (int b = 0; b < 3; ++b)
    for (const Bucket& bk : blocks[b]) {
      std::vector<std::string> row{names[b],
                                   bk.ratio,
                                   bk.strategy,
                                   bk.technique,
                                   bk.sr,
                                   std::to_string(bk.n_rows),
                                   std::to_string(bk.n_infeasible),
                                   std::to_string(bk.n_missing)};
      for (std::size_t mi = 0; mi < metric_cols.size(); ++mi)
        row.push_back(bk.cnt[mi] ? metric_str(bk.sum[mi] / bk.cnt[mi]) : "");
      t.rows.push_back(std::move(row));
    }
  return t;
}

ResultTable condition_correlations(const ResultTable& results) {
  const std::size_t c_ratio = results.column("ratio_nominal");
  const std::size_t c_strategy = results.column("strategy");
  const std::size_t c_technique = results.column("technique");
  const std::size_t c_sr = results.column("sr_level");
  const std::size_t c_flags = results.column("undefined_flags");

  std::vector<std::size_t> ai_cols;
  for (std::size_t i = 0; i < results.columns.size(); ++i)
    if (results.columns[i].rfind("ai_", 0) == 0) ai_cols.push_back(i);

  std::vector<std::string> levels;
  for (const auto& row : results.rows)
    if (std::find(levels.begin(), levels.end(), row[c_sr]) == levels.end())
      levels.push_back(row[c_sr]);

  ResultTable t;
  t.columns = {"factor", "sr_level", "n_rows"};
  for (std::size_t i : ai_cols) t.columns.push_back(results.columns[i]);

  for (const std::string& sr : levels) {
    struct Obs {
      double coded[3];
      const std::vector<std::string>* row;
    };
    std::vector<Obs> subset;
    for (const auto& row : results.rows) {
      if (row[c_sr] != sr || row[c_ratio] == "raw" ||
          has_flag(row[c_flags], "infeasible"))
        continue;
      const auto rv = parse_cell(row[c_ratio]);
      if (!rv) continue;
      subset.push_back({{*rv, row[c_strategy] == "sr_and_n" ? 1.0 : 0.0,
                         row[c_technique] == "smote" ? 1.0 : 0.0},
                        &row});
    }
    const char* factor_names[3] = {"ratio", "strategy", "technique"};
    for (int f = 0; f < 3; ++f) {
      std::vector<std::string> out_row{factor_names[f], sr,
                                       std::to_string(subset.size())};
      for (std::size_t ci : ai_cols) {
        std::vector<double> xs, ys;
        for (const Obs& o : subset) {
          if (const auto v = parse_cell((*o.row)[ci])) {
            xs.push_back(o.coded[f]);
            ys.push_back(*v);
          }
        }
        const auto r = pearson(xs, ys);
        out_row.push_back(r ? metric_str(*r) : "");
      }
      t.rows.push_back(std::move(out_row));
    }
  }
  return t;
}

ResultTable emit_tradeoff(const ResultTable& results) {
  const std::size_t c_ratio = results.column("ratio_nominal");
  const std::size_t c_class = results.column("classifier");
  const std::size_t c_sr = results.column("sr_level");
  const std::size_t c_flags = results.column("undefined_flags");
  const std::size_t c_acc = results.column("acc_overall");

  std::size_t c_ai = results.columns.size();
  for (std::size_t i = 0; i < results.columns.size(); ++i)
    if (results.columns[i].rfind("ai_", 0) == 0) {
      c_ai = i;
      break;
    }
  if (c_ai == results.columns.size())
    throw DataError("results table has no impact-ratio columns");

  // The trade-off view is read at overall SR .50 when present, otherwise at
  // the largest level in the table.
  std::vector<std::string> levels;
  for (const auto& row : results.rows)
    if (std::find(levels.begin(), levels.end(), row[c_sr]) == levels.end())
      levels.push_back(row[c_sr]);
  std::string want;
  double best_level = -1.0;
  for (const auto& s : levels) {
    const auto v = parse_cell(s);
    if (!v) continue;
    if (std::abs(*v - 0.50) < 1e-9) {
      want = s;
      break;
    }
    if (*v > best_level) {
      best_level = *v;
      want = s;
    }
  }

  struct Bucket {
    std::string kind, ratio;
    std::size_t kind_order = 0;
    bool is_raw = false;
    double ratio_val = 0.0;
    std::size_t n = 0, n_acc = 0, n_ai = 0;
    double sum_acc = 0.0, sum_ai = 0.0;
  };
  std::vector<Bucket> buckets;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::size_t> kind_order;

  for (const auto& row : results.rows) {
    if (row[c_sr] != want || has_flag(row[c_flags], "infeasible")) continue;
    const std::string& kind = row[c_class];
    kind_order.try_emplace(kind, kind_order.size());
    const std::string key = kind + "|" + row[c_ratio];
    const auto [it, fresh] = index.try_emplace(key, buckets.size());
    if (fresh) {
      Bucket b;
      b.kind = kind;
      b.ratio = row[c_ratio];
      b.kind_order = kind_order.at(kind);
      b.is_raw = row[c_ratio] == "raw";
      b.ratio_val = parse_cell(row[c_ratio]).value_or(0.0);
      buckets.push_back(std::move(b));
    }
    Bucket& b = buckets[it->second];
    ++b.n;
    if (const auto v = parse_cell(row[c_acc])) {
      b.sum_acc += *v;
      ++b.n_acc;
    }
    if (const auto v = parse_cell(row[c_ai])) {
      b.sum_ai += *v;
      ++b.n_ai;
    }
  }

  std::stable_sort(buckets.begin(), buckets.end(), [](const Bucket& a, const Bucket& b) {
    if (a.kind_order != b.kind_order) return a.kind_order < b.kind_order;
    if (a.is_raw != b.is_raw) return !a.is_raw;  // raw last within a classifier
    return a.ratio_val < b.ratio_val;
  });

  ResultTable t;
  t.columns = {"classifier", "ratio",       "sr_level",
               "n_rows",     "acc_overall", results.columns[c_ai]};
  for (const Bucket& b : buckets)
    t.rows.push_back({b.kind, b.ratio, want, std::to_string(b.n),
                      b.n_acc ? metric_str(b.sum_acc / static_cast<double>(b.n_acc)) : "",
                      b.n_ai ? metric_str(b.sum_ai / static_cast<double>(b.n_ai)) : ""});
  return t;
}

std::string tradeoff_svg(const ResultTable& tradeoff) {
  const std::size_t c_class = tradeoff.column("classifier");
  const std::size_t c_ratio = tradeoff.column("ratio");
  const std::size_t c_acc = tradeoff.column("acc_overall");
  const std::size_t c_ai = c_acc + 1;  // aggregate ratio sits after accuracy
  if (c_ai >= tradeoff.columns.size())
    throw DataError("tradeoff table lacks an impact-ratio column");

  struct Point {
    double x, y;
    std::string kind, label;
    bool is_raw;
  };
  std::vector<Point> points;
  std::vector<std::string> kinds;
  for (const auto& row : tradeoff.rows) {
    const auto ai = parse_cell(row[c_ai]);
    const auto acc = parse_cell(row[c_acc]);
    if (!ai || !acc) continue;
    points.push_back({*ai, *acc, row[c_class], row[c_ratio], row[c_ratio] == "raw"});
    if (std::find(kinds.begin(), kinds.end(), row[c_class]) == kinds.end())
      kinds.push_back(row[c_class]);
  }

  const double width = 640, height = 480;
  const double ml = 70, mr = 150, mt = 40, mb = 55;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2
      << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">Accuracy against adverse-impact ratio</text>\n";

  if (points.empty()) {
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">no plottable rows</text>\n</svg>\n";
    return svg.str();
  }

  double x0 = points[0].x, x1 = x0, y0 = points[0].y, y1 = y0;
  for (const Point& p : points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const auto widen = [](double& lo, double& hi) {
    const double span = hi - lo;
    const double pad = span < 1e-9 ? 0.05 : span * 0.08;
    lo -= pad;
    hi += pad;
  };
  widen(x0, x1);
  widen(y0, y1);

  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto sx = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
  const auto sy = [&](double v) { return mt + ph - (v - y0) / (y1 - y0) * ph; };

  svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    svg << "<line x1=\"" << fmt("%.1f", sx(fx)) << "\" y1=\"" << mt + ph << "\" x2=\""
        << fmt("%.1f", sx(fx)) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt("%.1f", sx(fx)) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt("%.2f", fx) << "</text>\n";
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt("%.1f", sy(fy)) << "\" x2=\""
        << ml << "\" y2=\"" << fmt("%.1f", sy(fy)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << fmt("%.1f", sy(fy) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt("%.2f", fy) << "</text>\n";
  }
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
         "mean aggregate impact ratio</text>\n";
  svg << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 18 "
      << mt + ph / 2 << ")\">mean overall accuracy</text>\n";

  const char* palette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                            "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const auto color = [&](const std::string& kind) {
    const auto it = std::find(kinds.begin(), kinds.end(), kind);
    return palette[static_cast<std::size_t>(it - kinds.begin()) % 8];
  };

  for (const Point& p : points) {
    svg << "<circle cx=\"" << fmt("%.1f", sx(p.x)) << "\" cy=\"" << fmt("%.1f", sy(p.y))
        << "\" r=\"5\" fill=\"" << color(p.kind) << "\"";
    if (p.is_raw) svg << " stroke=\"black\" stroke-width=\"2\"";
    svg << "/>\n";
    svg << "<text x=\"" << fmt("%.1f", sx(p.x) + 7) << "\" y=\""
        << fmt("%.1f", sy(p.y) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << p.label << "</text>\n";
  }

  double ly = mt + 10;
  for (const std::string& k : kinds) {
    svg << "<circle cx=\"" << width - mr + 18 << "\" cy=\"" << ly << "\" r=\"5\" fill=\""
        << color(k) << "\"/>\n";
    svg << "<text x=\"" << width - mr + 28 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << k << "</text>\n";
    ly += 18;
  }
  svg << "<circle cx=\"" << width - mr + 18 << "\" cy=\"" << ly
      << "\" r=\"5\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  svg << "<text x=\"" << width - mr + 28 << "\" y=\"" << ly + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\">raw control</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fairsample
