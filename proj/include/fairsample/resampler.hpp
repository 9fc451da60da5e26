#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairsample/dataset.hpp"

namespace fairsample {

// How to reach a target impact ratio in training data.
enum class Strategy {
  SR_ONLY,  // adjust focal selection ratios only
  SR_AND_N  // adjust selection ratios and equalize group sizes
};

// How added rows are produced.
enum class Technique {
  BOOTSTRAP,  // duplicate real rows, drawn with replacement
  SMOTE       // synthesize rows between neighbors
};

const char* to_string(Strategy s);
const char* to_string(Technique t);
Strategy strategy_from_string(const std::string& s);
Technique technique_from_string(const std::string& s);

// A requested training-data manipulation.  An empty `ratio` means the raw
// condition: leave the data untouched.
struct ResampleTarget {
  std::optional<double> ratio;
  Strategy strategy = Strategy::SR_ONLY;
  Technique technique = Technique::BOOTSTRAP;
};

// One cell adjustment: add (delta > 0) or remove (delta < 0) |delta| rows in
// the (group, outcome) cell.
struct PlanEntry {
  std::string group;
  int outcome = 0;
  long long delta = 0;
  Technique technique = Technique::BOOTSTRAP;
};

// The integer adjustments that realize a target, plus the impact ratio each
// focal group actually lands on after rounding.
struct ResamplePlan {
  std::vector<PlanEntry> entries;
  std::map<std::string, double> achieved;  // focal group -> achieved ratio
};

// Rows to add to a group's pass cell so its selection ratio lands as close as
// possible to t: the floor or ceil of (t*N - P)/(1 - t), whichever minimizes
// |(P+x)/(N+x) - t|, ties toward the smaller count.  Returns 0 when the ratio
// already meets or exceeds t.  Throws InfeasibleError for t >= 1.
std::size_t solve_pass_oversample(std::size_t P, std::size_t N, double t);

// Rows to remove from a group's pass cell so its selection ratio lands as
// close as possible to t, by the same floor/ceil rule on (P - t*N)/(1 - t).
// Returns 0 when the ratio is already at or below t.  Throws InfeasibleError
// when reaching t would remove every passing row.
std::size_t solve_pass_undersample(std::size_t P, std::size_t N, double t);

// Plan adjustments of focal pass cells only: each focal group's selection
// ratio is pushed toward target.ratio times the reference group's.  The
// reference group and any non-focal group pass through untouched.
ResamplePlan plan_sr_only(const Dataset& train, const GroupConfig& cfg,
                          const ResampleTarget& target);

// Plan adjustments that also equalize group sizes: every focal group is driven
// to the reference group's row count, with pass counts at round(t_g * N) and
// fails making up the rest.  When a focal group needs fewer fails than the
// reference group currently has while holding more, the reference fail cell is
// first padded by the excess — the one situation where reference rows change.
ResamplePlan plan_equal_n(const Dataset& train, const GroupConfig& cfg,
                          const ResampleTarget& target);

// Dispatch on target.strategy (raw targets yield an empty plan either way).
ResamplePlan make_plan(const Dataset& train, const GroupConfig& cfg,
                       const ResampleTarget& target);

// Execute a plan: removals delete seeded uniform draws from the cell,
// additions are appended after all original rows with ids recording their
// origin ("dup:<n>:<source-id>" or "smote:<n>").  Deterministic given seed.
// An empty plan returns the input unchanged.
Dataset apply_plan(const Dataset& train, const ResamplePlan& plan, std::uint64_t seed,
                   std::size_t smote_neighbors = 5);

// Audit serialization: `group,outcome,delta,technique,achieved_ratio` CSV.
void save_plan(const ResamplePlan& plan, const std::filesystem::path& path);

}  // namespace fairsample
