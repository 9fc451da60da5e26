#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "fairsample/dataset.hpp"

namespace fairsample {

// Selection outcome for one group: `passes` of `n` candidates screened in,
// sr = passes/n.
struct GroupCount {
  std::size_t n = 0;
  std::size_t passes = 0;
  double sr = 0.0;
};

// Per-group and overall selection ratios for one decision vector.
struct SelectionStats {
  std::map<std::string, GroupCount> per_group;
  std::size_t n_total = 0;
  std::size_t passes_total = 0;
  double overall_sr = 0.0;
};

// Count pass decisions per group.  decisions[i] ∈ {0,1} marks whether row i
// was screened in.  Groups with no rows never appear in the result.
SelectionStats selection_stats(const std::vector<char>& decisions,
                               const std::vector<std::string>& groups);

// Impact ratios of focal-group selection ratios against the reference group's.
// `ratios` is keyed by focal label and, when the config asks for it, by the
// aggregate label whose counts pool every non-reference group.
struct AiRatioSet {
  std::string reference;
  std::map<std::string, double> ratios;
  double overall_sr_context = 0.0;
};

// Divide each focal group's selection ratio by the reference group's.  Focal
// groups absent from `stats` are omitted from the result.  Throws
// UndefinedRatioError when the reference group is absent or its selection
// ratio is zero — never returns NaN or infinity.
AiRatioSet ai_ratios(const SelectionStats& stats, const GroupConfig& cfg);

// Four-fifths screen: true (violation) iff the ratio is strictly below 0.8.
bool violates_four_fifths(double ratio);

// sqrt(n*p*(1-p)): the standard deviation of a count of successes among n
// independent trials with success probability p.
double binary_sd(std::size_t n, double p);

// Number of rows a target selection ratio screens in: round(target_sr * n)
// with halves away from zero.
std::size_t selection_count(std::size_t n, double target_sr);

// Set the k highest-probability rows to 1, where k = selection_count(N,
// target_sr).  Ties on the probability break toward the lower row index, so
// the output is deterministic.
std::vector<char> threshold_at_sr(const std::vector<double>& probs, double target_sr);

// Fraction of rows where decision == truth.  When `mask` is given, only rows
// with mask[i] != 0 are scored; an empty selection is an error.
double accuracy(const std::vector<char>& decisions, const std::vector<int>& truth,
                const std::vector<char>* mask = nullptr);

}  // namespace fairsample
