#include "fairsample/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairsample/error.hpp"
#include "fairsample/kernels.hpp"
#include "fairsample/rng.hpp"

namespace fairsample {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

void PoolConfig::validate() const {
  if (n_total == 0) throw ConfigError("pool size must be positive");
  if (n_features == 0) throw ConfigError("pool needs at least one feature");
  if (!(noise_sd > 0.0)) throw ConfigError("noise_sd must be positive");
  if (group_mix.empty()) throw ConfigError("pool needs at least one group");
  if (outcome_coefs.size() != n_features)
    throw ConfigError("outcome_coefs length must match the feature count");

  double total = 0.0;
  for (const auto& [g, share] : group_mix) {
    if (!(share > 0.0) || share > 1.0)
      throw ConfigError("group '" + g + "' share must be in (0, 1]");
    total += share;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("group shares must sum to 1");

  for (const auto& [g, shift] : group_mean_shift) {
    if (!group_mix.count(g))
      throw ConfigError("mean shift given for unknown group '" + g + "'");
    if (shift.size() != n_features)
      throw ConfigError("mean shift for group '" + g + "' has the wrong length");
  }
  for (const auto& [g, v] : group_intercepts) {
    (void)v;
    if (!group_mix.count(g))
      throw ConfigError("intercept given for unknown group '" + g + "'");
  }
  for (const auto& [g, t] : target_srs) {
    if (!group_mix.count(g))
      throw ConfigError("target pass rate given for unknown group '" + g + "'");
    if (!(t > 0.0) || !(t < 1.0))
      throw ConfigError("target pass rate for group '" + g + "' must be in (0, 1)");
  }
  for (const auto& [g, share] : group_mix) {
    (void)share;
    if (!group_mean_shift.count(g))
      throw ConfigError("group '" + g + "' has no mean shift vector");
    if (!group_intercepts.count(g) && !target_srs.count(g))
      throw ConfigError("group '" + g + "' needs an intercept or a target pass rate");
  }
}

std::map<std::string, std::size_t> apportion_counts(const PoolConfig& cfg) {
  cfg.validate();
  std::map<std::string, std::size_t> counts;
  std::vector<std::pair<std::string, double>> remainders;
  std::size_t assigned = 0;
  for (const auto& [g, share] : cfg.group_mix) {
    const double exact = share * static_cast<double>(cfg.n_total);
    const auto base = static_cast<std::size_t>(std::floor(exact));
    counts[g] = base;
    assigned += base;
    remainders.emplace_back(g, exact - std::floor(exact));
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (std::size_t i = 0; assigned < cfg.n_total; ++i, ++assigned)
    ++counts[remainders[i % remainders.size()].first];

  for (const auto& [g, n] : counts)
    if (n == 0)
      throw InfeasibleError("pool of " + std::to_string(cfg.n_total) +
                            " rows leaves group '" + g + "' empty");
  return counts;
}

std::map<std::string, double> calibrate_intercepts(const PoolConfig& cfg) {
  cfg.validate();
  std::map<std::string, double> out = cfg.group_intercepts;
  constexpr std::size_t draws = 10000;

  for (const auto& [g, target] : cfg.target_srs) {
    if (out.count(g)) continue;  // explicit intercept wins

    // Fixed per-group draw set, reused across every bisection step so the
    // estimated pass rate is a smooth monotone function of the intercept.
    Rng rng(derive_seed(cfg.seed, "calib:" + g));
    const std::vector<double>& shift = cfg.group_mean_shift.at(g);
    std::vector<double> z(draws);
    for (std::size_t i = 0; i < draws; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cfg.n_features; ++j)
        s += cfg.outcome_coefs[j] * (shift[j] + cfg.noise_sd * rng.normal());
      z[i] = s;
    }
    const auto expected_sr = [&](double b) {
      double s = 0.0;
      for (double v : z) s += sigmoid(v + b);
      return s / static_cast<double>(draws);
    };

    double lo = -2.0, hi = 2.0;
    while (expected_sr(lo) > target && lo > -20.0)
      lo = std::max(lo * 2.0, -20.0);
    while (expected_sr(hi) < target && hi < 20.0)
      hi = std::min(hi * 2.0, 20.0);
    if (expected_sr(lo) > target || expected_sr(hi) < target)
      throw CalibrationError("target pass rate for group '" + g +
                             "' is unreachable within intercept bounds");

    bool done = false;
    for (int it = 0; it < 200 && !done; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double sr = expected_sr(mid);
      if (std::abs(sr - target) <= 0.005) {
        out[g] = mid;
        done = true;
      } else if (sr < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!done)
      throw CalibrationError("intercept search for group '" + g +
                             "' failed to converge");
  }
  return out;
}

Dataset generate_pool(const PoolConfig& cfg) {
  cfg.validate();
  for (const auto& [g, share] : cfg.group_mix) {
    (void)share;
    if (!cfg.group_intercepts.count(g))
      throw ConfigError("group '" + g +
                        "' has no intercept; run intercept calibration first");
  }
  const std::map<std::string, std::size_t> counts = apportion_counts(cfg);

  Dataset d;
  d.features = Matrix(cfg.n_total, cfg.n_features);
  d.outcome.resize(cfg.n_total);
  d.group.resize(cfg.n_total);
  d.row_id.resize(cfg.n_total);

  Rng rng(cfg.seed);
  std::size_t row = 0;
  for (const auto& [g, n] : counts) {
    const std::vector<double>& shift = cfg.group_mean_shift.at(g);
    const double intercept = cfg.group_intercepts.at(g);
    for (std::size_t r = 0; r < n; ++r, ++row) {
      for (std::size_t j = 0; j < cfg.n_features; ++j)
        d.features(row, j) = shift[j] + cfg.noise_sd * rng.normal();
      const double z =
          intercept + kernels::dot(cfg.outcome_coefs.data(), d.features.row(row).data(),
                                   cfg.n_features);
      d.outcome[row] = rng.uniform() < sigmoid(z) ? 1 : 0;
      d.group[row] = g;
      d.row_id[row] = "r" + std::to_string(row + 1);
    }
  }
  d.validate();
  return d;
}

}  // namespace fairsample
