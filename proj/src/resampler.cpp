#include "fairsample/resampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "fairsample/error.hpp"
#include "fairsample/rng.hpp"
#include "fairsample/smote.hpp"

namespace fairsample {

const char* to_string(Strategy s) {
  return s == Strategy::SR_ONLY ? "sr_only" : "sr_and_n";
}

const char* to_string(Technique t) {
  return t == Technique::BOOTSTRAP ? "bootstrap" : "smote";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "sr_only") return Strategy::SR_ONLY;
  if (s == "sr_and_n") return Strategy::SR_AND_N;
  throw ConfigError("unknown strategy '" + s + "'");
}

Technique technique_from_string(const std::string& s) {
  if (s == "bootstrap") return Technique::BOOTSTRAP;
  if (s == "smote") return Technique::SMOTE;
  throw ConfigError("unknown technique '" + s + "'");
}

namespace {

struct CellCounts {
  std::size_t n = 0;
  std::size_t pass = 0;
  std::size_t fail() const { return n - pass; }
  double sr() const { return n ? static_cast<double>(pass) / static_cast<double>(n) : 0.0; }
};

std::map<std::string, CellCounts> count_groups(const Dataset& d) {
  std::map<std::string, CellCounts> counts;
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto& c = counts[d.group[i]];
    ++c.n;
    if (d.outcome[i] == 1) ++c.pass;
  }
  return counts;
}

long long round_count(double v) { return std::llround(v); }

// Achieved ratios of the data as-is, for raw plans: focal SR over reference
// SR, omitting groups that are absent or undefined.
std::map<std::string, double> current_ratios(const std::map<std::string, CellCounts>& counts,
                                             const GroupConfig& cfg) {
  std::map<std::string, double> out;
  const auto ref = counts.find(cfg.reference_group);
  if (ref == counts.end() || ref->second.pass == 0) return out;
  for (const auto& g : cfg.focal_groups) {
    const auto it = counts.find(g);
    if (it != counts.end() && it->second.n > 0) out[g] = it->second.sr() / ref->second.sr();
  }
  return out;
}

const CellCounts& reference_counts(const std::map<std::string, CellCounts>& counts,
                                   const GroupConfig& cfg) {
  const auto ref = counts.find(cfg.reference_group);
  if (ref == counts.end() || ref->second.n == 0)
    throw InfeasibleError("reference group '" + cfg.reference_group + "' has no rows");
  const double sr = ref->second.sr();
  if (sr <= 0.0 || sr >= 1.0)
    throw InfeasibleError("reference group selection ratio " + std::to_string(sr) +
                          " is not strictly between 0 and 1");
  return ref->second;
}

double focal_target_sr(double ratio, double reference_sr, const std::string& group) {
  const double t = ratio * reference_sr;
  if (t >= 1.0)
    throw InfeasibleError("target selection ratio " + std::to_string(t) + " for group '" +
                          group + "' is not reachable");
  return t;
}

}  // namespace

std::size_t solve_pass_oversample(std::size_t P, std::size_t N, double t) {
  if (N == 0 || P > N) throw ConfigError("invalid cell counts");
  if (t >= 1.0)
    throw InfeasibleError("oversampling passes cannot reach a selection ratio of 1");
  const double cur = static_cast<double>(P) / static_cast<double>(N);
  if (t <= cur) return 0;

  const double x0 = (t * static_cast<double>(N) - static_cast<double>(P)) / (1.0 - t);
  long long best = -1;
  double best_err = 0.0;
  for (long long x : {static_cast<long long>(std::floor(x0)),
                      static_cast<long long>(std::ceil(x0))}) {
    if (x < 0) x = 0;
    const double achieved = (static_cast<double>(P) + static_cast<double>(x)) /
                            (static_cast<double>(N) + static_cast<double>(x));
    const double err = std::abs(achieved - t);
    if (best < 0 || err < best_err || (err == best_err && x < best)) {
      best = x;
      best_err = err;
    }
  }
  return static_cast<std::size_t>(best);
}

std::size_t solve_pass_undersample(std::size_t P, std::size_t N, double t) {
  if (N == 0 || P > N) throw ConfigError("invalid cell counts");
  if (t < 0.0) throw ConfigError("target selection ratio is negative");
  const double cur = static_cast<double>(P) / static_cast<double>(N);
  if (t >= cur) return 0;

  const double y0 = (static_cast<double>(P) - t * static_cast<double>(N)) / (1.0 - t);
  long long best = -1;
  double best_err = 0.0;
  for (long long y : {static_cast<long long>(std::floor(y0)),
                      static_cast<long long>(std::ceil(y0))}) {
    if (y < 0) y = 0;
    if (y > static_cast<long long>(P)) y = static_cast<long long>(P);
    const double achieved = (static_cast<double>(P) - static_cast<double>(y)) /
                            (static_cast<double>(N) - static_cast<double>(y));
    const double err = std::abs(achieved - t);
    if (best < 0 || err < best_err || (err == best_err && y < best)) {
      best = y;
      best_err = err;
    }
  }
  if (best >= static_cast<long long>(P))
    throw InfeasibleError("reaching the target would remove every passing row");
  return static_cast<std::size_t>(best);
}

ResamplePlan plan_sr_only(const Dataset& train, const GroupConfig& cfg,
                          const ResampleTarget& target) {
  cfg.validate();
  const auto counts = count_groups(train);
  ResamplePlan plan;
  if (!target.ratio) {
    plan.achieved = current_ratios(counts, cfg);
    return plan;
  }
  const auto& ref = reference_counts(counts, cfg);
  const double ref_sr = ref.sr();

  for (const auto& g : cfg.focal_groups) {
    const auto it = counts.find(g);
    if (it == counts.end() || it->second.n == 0) continue;
    const CellCounts& c = it->second;
    const double t = focal_target_sr(*target.ratio, ref_sr, g);

    long long np = static_cast<long long>(c.pass);
    long long nn = static_cast<long long>(c.n);
    if (t > c.sr()) {
      if (c.pass == 0)
        throw InfeasibleError("group '" + g + "' has no passing rows to resample");
      const auto x = solve_pass_oversample(c.pass, c.n, t);
      if (x > 0) plan.entries.push_back({g, 1, static_cast<long long>(x), target.technique});
      np += static_cast<long long>(x);
      nn += static_cast<long long>(x);
    } else if (t < c.sr()) {
      const auto y = solve_pass_undersample(c.pass, c.n, t);
      if (y > 0) plan.entries.push_back({g, 1, -static_cast<long long>(y), target.technique});
      np -= static_cast<long long>(y);
      nn -= static_cast<long long>(y);
    }
    plan.achieved[g] = (static_cast<double>(np) / static_cast<double>(nn)) / ref_sr;
  }
  return plan;
}

ResamplePlan plan_equal_n(const Dataset& train, const GroupConfig& cfg,
                          const ResampleTarget& target) {
  cfg.validate();
  const auto counts = count_groups(train);
  ResamplePlan plan;
  if (!target.ratio) {
    plan.achieved = current_ratios(counts, cfg);
    return plan;
  }
  const auto& ref = reference_counts(counts, cfg);

  // A focal group may need fewer fail rows than the reference group holds
  // while currently holding more.  In that one situation the reference fail
  // cell is padded first (by the largest focal excess) and every target is
  // recomputed against the grown reference group.
  long long pad = 0;
  for (const auto& g : cfg.focal_groups) {
    const auto it = counts.find(g);
    if (it == counts.end() || it->second.n == 0) continue;
    const double t0 = focal_target_sr(*target.ratio, ref.sr(), g);
    const long long want_fail =
        static_cast<long long>(ref.n) - round_count(t0 * static_cast<double>(ref.n));
    if (want_fail < static_cast<long long>(ref.fail()) &&
        it->second.fail() > ref.fail())
      pad = std::max(pad, static_cast<long long>(it->second.fail()) -
                              static_cast<long long>(ref.fail()));
  }
  if (pad > 0) {
    if (ref.fail() == 0)
      throw InfeasibleError("reference group has no fail rows to duplicate");
    plan.entries.push_back({cfg.reference_group, 0, pad, target.technique});
  }

  const long long n_star = static_cast<long long>(ref.n) + pad;
  const double ref_sr = static_cast<double>(ref.pass) / static_cast<double>(n_star);

  for (const auto& g : cfg.focal_groups) {
    const auto it = counts.find(g);
    if (it == counts.end() || it->second.n == 0) continue;
    const CellCounts& c = it->second;
    const double t = focal_target_sr(*target.ratio, ref_sr, g);
    const long long want_pass = round_count(t * static_cast<double>(n_star));
    const long long want_fail = n_star - want_pass;

    const long long dp = want_pass - static_cast<long long>(c.pass);
    const long long df = want_fail - static_cast<long long>(c.fail());
    if (dp > 0 && c.pass == 0)
      throw InfeasibleError("group '" + g + "' has no passing rows to resample");
    if (df > 0 && c.fail() == 0)
      throw InfeasibleError("group '" + g + "' has no failing rows to resample");
    if (dp < 0 && want_pass == 0)
      throw InfeasibleError("plan would remove every passing row of group '" + g + "'");
    if (df < 0 && want_fail == 0)
      throw InfeasibleError("plan would remove every failing row of group '" + g + "'");
    if (dp != 0) plan.entries.push_back({g, 1, dp, target.technique});
    if (df != 0) plan.entries.push_back({g, 0, df, target.technique});
    plan.achieved[g] =
        (static_cast<double>(want_pass) / static_cast<double>(n_star)) / ref_sr;
  }
  return plan;
}

ResamplePlan make_plan(const Dataset& train, const GroupConfig& cfg,
                       const ResampleTarget& target) {
  return target.strategy == Strategy::SR_AND_N ? plan_equal_n(train, cfg, target)
                                               : plan_sr_only(train, cfg, target);
}

Dataset apply_plan(const Dataset& train, const ResamplePlan& plan, std::uint64_t seed,
                   std::size_t smote_neighbors) {
  if (plan.entries.empty()) return train;

  const auto cells = group_cells(train);
  std::vector<char> removed(train.size(), 0);

  struct Added {
    std::vector<double> features;
    int outcome;
    std::string group;
    std::string id;
  };
  std::vector<Added> added;
  std::size_t tag = 0;

  for (std::size_t e = 0; e < plan.entries.size(); ++e) {
    const PlanEntry& entry = plan.entries[e];
    const auto cell_it = cells.find({entry.group, entry.outcome});
    const std::vector<std::size_t>* rows =
        cell_it != cells.end() ? &cell_it->second : nullptr;
    const std::uint64_t entry_seed = derive_seed(seed, "entry:" + std::to_string(e));

    if (entry.delta < 0) {
      const std::size_t need = static_cast<std::size_t>(-entry.delta);
      if (!rows || need >= rows->size())
        throw InfeasibleError("removal would empty the (" + entry.group + ", " +
                              std::to_string(entry.outcome) + ") cell");
      Rng rng(entry_seed);
      for (std::size_t idx : rng.sample_without_replacement(rows->size(), need))
        removed[(*rows)[idx]] = 1;
    } else if (entry.delta > 0) {
      const std::size_t need = static_cast<std::size_t>(entry.delta);
      if (!rows || rows->empty())
        throw InfeasibleError("cannot add rows to the empty (" + entry.group + ", " +
                              std::to_string(entry.outcome) + ") cell");
      if (entry.technique == Technique::BOOTSTRAP) {
        Rng rng(entry_seed);
        for (std::size_t r = 0; r < need; ++r) {
          const std::size_t src = (*rows)[rng.below(rows->size())];
          const auto row = train.features.row(src);
          added.push_back({{row.begin(), row.end()},
                           entry.outcome,
                           entry.group,
                           "dup:" + std::to_string(++tag) + ":" + train.row_id[src]});
        }
      } else {
        const Matrix cell = train.features.take_rows(*rows);
        const SmoteResult synth =
            smote_sample(cell, need, {smote_neighbors, entry_seed});
        for (std::size_t r = 0; r < synth.rows.rows(); ++r) {
          const auto row = synth.rows.row(r);
          added.push_back({{row.begin(), row.end()},
                           entry.outcome,
                           entry.group,
                           "smote:" + std::to_string(++tag)});
        }
      }
    }
  }

  Dataset out;
  out.features = Matrix(0, train.dim());
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (removed[i]) continue;
    out.features.append_row(train.features.row(i));
    out.outcome.push_back(train.outcome[i]);
    out.group.push_back(train.group[i]);
    out.row_id.push_back(train.row_id[i]);
  }
  for (const auto& a : added) {
    out.features.append_row(a.features);
    out.outcome.push_back(a.outcome);
    out.group.push_back(a.group);
    out.row_id.push_back(a.id);
  }
  return out;
}

void save_plan(const ResamplePlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "group,outcome,delta,technique,achieved_ratio\n";
  char buf[32];
  for (const auto& e : plan.entries) {
    out << e.group << ',' << e.outcome << ',' << e.delta << ',' << to_string(e.technique)
        << ',';
    const auto it = plan.achieved.find(e.group);
    if (it != plan.achieved.end()) {
      std::snprintf(buf, sizeof(buf), "%.6f", it->second);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace fairsample
