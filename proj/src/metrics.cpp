#include "fairsample/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairsample/error.hpp"

namespace fairsample {

SelectionStats selection_stats(const std::vector<char>& decisions,
                               const std::vector<std::string>& groups) {
  if (decisions.empty()) throw DataError("selection stats over an empty pool");
  if (decisions.size() != groups.size())
    throw DataError("decision and group vectors differ in length");
  SelectionStats stats;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    auto& g = stats.per_group[groups[i]];
    ++g.n;
    ++stats.n_total;
    if (decisions[i]) {
      ++g.passes;
      ++stats.passes_total;
    }
  }
  for (auto& [label, g] : stats.per_group)
    g.sr = static_cast<double>(g.passes) / static_cast<double>(g.n);
  stats.overall_sr =
      static_cast<double>(stats.passes_total) / static_cast<double>(stats.n_total);
  return stats;
}

AiRatioSet ai_ratios(const SelectionStats& stats, const GroupConfig& cfg) {
  const auto ref = stats.per_group.find(cfg.reference_group);
  if (ref == stats.per_group.end() || ref->second.n == 0)
    throw UndefinedRatioError("reference group '" + cfg.reference_group + "' absent");
  if (ref->second.passes == 0)
    throw UndefinedRatioError("reference group '" + cfg.reference_group +
                              "' has selection ratio 0");
  const double ref_sr = ref->second.sr;

  AiRatioSet out;
  out.reference = cfg.reference_group;
  out.overall_sr_context = stats.overall_sr;
  for (const auto& g : cfg.focal_groups) {
    const auto it = stats.per_group.find(g);
    if (it == stats.per_group.end()) continue;  // absent focal: entry omitted
    out.ratios[g] = it->second.sr / ref_sr;
  }
  if (cfg.aggregate_nonreference) {
    std::size_t n = 0, passes = 0;
    for (const auto& [label, g] : stats.per_group) {
      if (label == cfg.reference_group) continue;
      n += g.n;
      passes += g.passes;
    }
    if (n > 0)
      out.ratios[cfg.aggregate_label] =
          (static_cast<double>(passes) / static_cast<double>(n)) / ref_sr;
  }
  return out;
}

bool violates_four_fifths(double ratio) { return ratio < 0.8; }

double binary_sd(std::size_t n, double p) {
  if (n == 0) throw ConfigError("binary_sd needs n >= 1");
  if (p < 0.0 || p > 1.0) throw ConfigError("probability out of [0,1]");
  return std::sqrt(static_cast<double>(n) * p * (1.0 - p));
}

std::size_t selection_count(std::size_t n, double target_sr) {
  if (target_sr < 0.0 || target_sr > 1.0)
    throw ConfigError("target selection ratio out of [0,1]");
  const double k = std::round(target_sr * static_cast<double>(n));
  if (k <= 0.0) return 0;
  if (k >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(k);
}

std::vector<char> threshold_at_sr(const std::vector<double>& probs, double target_sr) {
  const std::size_t n = probs.size();
  if (n == 0) throw DataError("thresholding an empty probability vector");
  if (!(target_sr > 0.0) || target_sr > 1.0)
    throw ConfigError("target selection ratio out of (0,1]");
  for (double p : probs)
    if (!std::isfinite(p)) throw DataError("non-finite class probability");
  const std::size_t k = selection_count(n, target_sr);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  std::vector<char> decisions(n, 0);
  for (std::size_t i = 0; i < k; ++i) decisions[order[i]] = 1;
  return decisions;
}

double accuracy(const std::vector<char>& decisions, const std::vector<int>& truth,
                const std::vector<char>* mask) {
  if (decisions.size() != truth.size())
    throw DataError("decision and truth vectors differ in length");
  if (mask && mask->size() != truth.size())
    throw DataError("mask length differs from decisions");
  std::size_t total = 0, hit = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    ++total;
    if (static_cast<int>(decisions[i] ? 1 : 0) == truth[i]) ++hit;
  }
  if (total == 0) throw DataError("accuracy over an empty selection");
  return static_cast<double>(hit) / static_cast<double>(total);
}

}  // namespace fairsample
